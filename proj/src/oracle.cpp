#include "stlflow/oracle.hpp"

#include <algorithm>

#include "stlflow/solver.hpp"

namespace stlflow {

namespace {

// All source-to-sink paths of one time-expanded graph, as edge id lists.
void dfs_paths(const TimeExpandedGraph& g, int vertex,
               std::vector<int>& stack, std::vector<std::vector<int>>& out,
               std::int64_t cap) {
  if (vertex == g.super_sink()) {
    if (static_cast<std::int64_t>(out.size()) >= cap) {
      throw EncodeError("plan enumeration exceeds cap of " +
                        std::to_string(cap));
    }
    out.push_back(stack);
    return;
  }
  for (int e : g.out_edges(vertex)) {
    stack.push_back(e);
    dfs_paths(g, g.edges[static_cast<size_t>(e)].head, stack, out, cap);
    stack.pop_back();
  }
}

std::vector<std::vector<int>> all_paths(const TimeExpandedGraph& g,
                                        std::int64_t cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  dfs_paths(g, g.super_source(), stack, out, cap);
  return out;
}

}  // namespace

std::vector<JointPlan> enumerate_plans(
    const std::vector<const TimeExpandedGraph*>& graphs, std::int64_t cap) {
  std::vector<std::vector<std::vector<int>>> paths_per_robot;
  std::int64_t product = 1;
  for (const auto* g : graphs) {
    paths_per_robot.push_back(all_paths(*g, cap));
    const auto count =
        static_cast<std::int64_t>(paths_per_robot.back().size());
    if (count == 0) return {};
    if (product > cap / count) {
      throw EncodeError("joint plan count exceeds cap of " +
                        std::to_string(cap));
    }
    product *= count;
  }

  std::vector<JointPlan> plans;
  plans.reserve(static_cast<size_t>(product));
  std::vector<size_t> pick(graphs.size(), 0);
  while (true) {
    JointPlan plan;
    plan.visits.resize(graphs.size());
    for (size_t r = 0; r < graphs.size(); ++r) {
      const auto& g = *graphs[r];
      for (int e : paths_per_robot[r][pick[r]]) {
        const auto& edge = g.edges[static_cast<size_t>(e)];
        plan.cost += edge.cost;
        if (edge.head != g.super_sink()) {
          plan.visits[r].emplace_back(g.site_of(edge.head),
                                      g.time_of(edge.head));
        }
      }
    }
    plans.push_back(std::move(plan));
    size_t level = 0;
    while (level < graphs.size() &&
           ++pick[level] == paths_per_robot[level].size()) {
      pick[level] = 0;
      ++level;
    }
    if (level == graphs.size()) break;
  }
  return plans;
}

std::optional<double> brute_force_optimum(
    const GroundedFormula& grounded,
    const std::map<std::string, std::pair<int, std::string>>& atom_to_robot_site,
    const std::vector<const TimeExpandedGraph*>& graphs, std::int64_t cap) {
  const auto plans = enumerate_plans(graphs, cap);
  std::optional<double> best;
  for (const auto& plan : plans) {
    // Occupancy signal: robot r is at site s at time t iff (s, t) is a
    // visited vertex of its path.
    std::vector<std::set<std::pair<int, int>>> occupied(graphs.size());
    for (size_t r = 0; r < graphs.size(); ++r) {
      occupied[r].insert(plan.visits[r].begin(), plan.visits[r].end());
    }
    auto truth = [&](const std::string& atom, int time) {
      auto it = atom_to_robot_site.find(atom);
      if (it == atom_to_robot_site.end()) {
        throw EncodeError("oracle has no binding for atom: " + atom);
      }
      const auto& [robot, site] = it->second;
      const int s = graphs[static_cast<size_t>(robot)]->site_index(site);
      return occupied[static_cast<size_t>(robot)].contains({s, time});
    };
    if (evaluate(grounded, truth)) {
      if (!best || plan.cost < *best) best = plan.cost;
    }
  }
  return best;
}

namespace {

MblpModel fragment_model(const ConstraintFragment& fragment) {
  MblpModel m;
  for (const auto& def : fragment.vars) m.add_variable(def);
  for (const auto& row : fragment.constraints) m.add_row(row);
  return m;
}

void check_pi_size(size_t n) {
  if (n > 12) {
    throw EncodeError("feasible-set enumeration refused for |pi| = " +
                      std::to_string(n) + " > 12");
  }
}

}  // namespace

std::set<std::uint64_t> feasible_z_tree(
    const ConstraintFragment& fragment,
    const std::vector<std::pair<std::string, int>>& pi) {
  check_pi_size(pi.size());
  MblpModel model = fragment_model(fragment);
  SimplexEngine engine(model);
  std::vector<double> lb(engine.base_lb().begin(),
                         engine.base_lb().begin() + model.num_vars());
  std::vector<double> ub(engine.base_ub().begin(),
                         engine.base_ub().begin() + model.num_vars());
  std::vector<int> z_index;
  for (const auto& [pred, time] : pi) {
    z_index.push_back(model.var_index(z_var_name(pred, time)));
  }
  std::set<std::uint64_t> feasible;
  for (std::uint64_t mask = 0; mask < (1ULL << pi.size()); ++mask) {
    for (size_t k = 0; k < pi.size(); ++k) {
      const double v = (mask >> k) & 1 ? 1.0 : 0.0;
      lb[static_cast<size_t>(z_index[k])] = v;
      ub[static_cast<size_t>(z_index[k])] = v;
    }
    if (engine.solve(lb, ub).status == LpStatus::Optimal) {
      feasible.insert(mask);
    }
  }
  return feasible;
}

std::set<std::uint64_t> feasible_z_flow(
    const Lnf& f, const ConstraintFragment& fragment,
    const std::vector<std::pair<std::string, int>>& pi) {
  check_pi_size(pi.size());

  // Enumerate source-target paths once; a binary unit y-flow is exactly the
  // indicator of one of them.
  std::vector<std::vector<int>> paths;
  {
    std::vector<int> stack;
    auto dfs = [&](auto&& self, int vertex) -> void {
      if (vertex == f.target) {
        paths.push_back(stack);
        return;
      }
      for (int e : f.out_edges(vertex)) {
        stack.push_back(e);
        self(self, f.edges[static_cast<size_t>(e)].head);
        stack.pop_back();
      }
    };
    dfs(dfs, f.source);
  }

  MblpModel model = fragment_model(fragment);
  SimplexEngine engine(model);
  std::vector<double> base_lb(engine.base_lb().begin(),
                              engine.base_lb().begin() + model.num_vars());
  std::vector<double> base_ub(engine.base_ub().begin(),
                              engine.base_ub().begin() + model.num_vars());
  std::vector<int> z_index;
  for (const auto& [pred, time] : pi) {
    z_index.push_back(model.var_index(z_var_name(pred, time)));
  }
  std::vector<int> y_index;
  for (int e = 0; e < static_cast<int>(f.edges.size()); ++e) {
    y_index.push_back(model.var_index(y_var_name(e)));
  }

  std::set<std::uint64_t> feasible;
  std::vector<double> lb = base_lb, ub = base_ub;
  for (std::uint64_t mask = 0; mask < (1ULL << pi.size()); ++mask) {
    for (size_t k = 0; k < pi.size(); ++k) {
      const double v = (mask >> k) & 1 ? 1.0 : 0.0;
      lb[static_cast<size_t>(z_index[k])] = v;
      ub[static_cast<size_t>(z_index[k])] = v;
    }
    for (const auto& path : paths) {
      std::vector<bool> on_path(f.edges.size(), false);
      for (int e : path) on_path[static_cast<size_t>(e)] = true;
      for (size_t e = 0; e < f.edges.size(); ++e) {
        const double v = on_path[e] ? 1.0 : 0.0;
        lb[static_cast<size_t>(y_index[e])] = v;
        ub[static_cast<size_t>(y_index[e])] = v;
      }
      if (engine.solve(lb, ub).status == LpStatus::Optimal) {
        feasible.insert(mask);
        break;
      }
    }
  }
  return feasible;
}

std::set<std::uint64_t> satisfying_z_set(
    const GroundedFormula& g,
    const std::vector<std::pair<std::string, int>>& pi) {
  check_pi_size(pi.size());
  std::map<std::pair<std::string, int>, size_t> index;
  for (size_t k = 0; k < pi.size(); ++k) index[pi[k]] = k;
  std::set<std::uint64_t> out;
  for (std::uint64_t mask = 0; mask < (1ULL << pi.size()); ++mask) {
    auto truth = [&](const std::string& pred, int time) {
      auto it = index.find({pred, time});
      if (it == index.end()) {
        throw EncodeError("timed predicate missing from pi: " + pred + "@" +
                          std::to_string(time));
      }
      return ((mask >> it->second) & 1) != 0;
    };
    if (evaluate(g, truth)) out.insert(mask);
  }
  return out;
}

}  // namespace stlflow
