#include "stlflow/logicflow.hpp"

#include <algorithm>
#include <queue>

#include <nlohmann/json.hpp>

namespace stlflow {

std::vector<int> Lnf::in_edges(int vertex) const {
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (edges[static_cast<size_t>(e)].head == vertex) ids.push_back(e);
  }
  return ids;
}

std::vector<int> Lnf::out_edges(int vertex) const {
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    if (edges[static_cast<size_t>(e)].tail == vertex) ids.push_back(e);
  }
  return ids;
}

int Lnf::pi_index_of(const std::string& predicate, int time) const {
  auto it = std::lower_bound(pi.begin(), pi.end(),
                             std::make_pair(predicate, time));
  if (it == pi.end() || it->first != predicate || it->second != time) {
    throw EncodeError("timed predicate not indexed: " + predicate + "@" +
                      std::to_string(time));
  }
  return static_cast<int>(it - pi.begin());
}

std::vector<int> Lnf::topological_order() const {
  std::vector<int> indegree(static_cast<size_t>(num_vertices), 0);
  for (const auto& edge : edges) {
    ++indegree[static_cast<size_t>(edge.head)];
  }
  std::queue<int> ready;
  for (int v = 0; v < num_vertices; ++v) {
    if (indegree[static_cast<size_t>(v)] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(static_cast<size_t>(num_vertices));
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop();
    order.push_back(v);
    for (const auto& edge : edges) {
      if (edge.tail == v && --indegree[static_cast<size_t>(edge.head)] == 0) {
        ready.push(edge.head);
      }
    }
  }
  if (static_cast<int>(order.size()) != num_vertices) {
    throw EncodeError("logic network flow contains a cycle");
  }
  return order;
}

namespace {

class LnfBuilder {
 public:
  explicit LnfBuilder(const LogicTree& tree) : tree_(tree) {}

  Lnf run(const LnfBuildOptions& options) {
    Lnf out;
    out.pi = tree_.pi;
    num_vertices_ = 1;  // source
    edges_.push_back(Lnf::Edge{0, -1, {}});
    auto [vertex, edge] = build(tree_.root, 0, 0);
    if (!options.keep_trailing_edge && edges_[static_cast<size_t>(edge)].literals.empty() &&
        edges_[static_cast<size_t>(edge)].tail != 0) {
      // The trailing edge carries nothing; its tail merge vertex doubles as
      // the target.
      out.target = edges_[static_cast<size_t>(edge)].tail;
      edges_.erase(edges_.begin() + edge);
    } else {
      out.target = num_vertices_++;
      edges_[static_cast<size_t>(edge)].head = out.target;
    }
    (void)vertex;
    out.num_vertices = num_vertices_;
    out.edges = std::move(edges_);
    return out;
  }

 private:
  // Returns (current vertex, dangling edge id). The dangling edge has no
  // head yet; literals accumulate on it.
  std::pair<int, int> build(int node_id, int vertex, int edge) {
    const auto& node = tree_.at(node_id);
    if (node.is_leaf) {
      auto& literals = edges_[static_cast<size_t>(edge)].literals;
      if (std::find(literals.begin(), literals.end(), node.literal) ==
          literals.end()) {
        literals.push_back(node.literal);
      }
      return {vertex, edge};
    }
    if (node.combo == LogicTree::Combo::And) {
      for (int child : node.children) {
        std::tie(vertex, edge) = build(child, vertex, edge);
      }
      return {vertex, edge};
    }
    // Disjunction: duplicate the dangling edge and its literal set for each
    // child before recursing, then merge the returned edges.
    const int n = static_cast<int>(node.children.size());
    std::vector<int> branch_edges;
    branch_edges.push_back(edge);
    for (int j = 1; j < n; ++j) {
      edges_.push_back(edges_[static_cast<size_t>(edge)]);
      branch_edges.push_back(static_cast<int>(edges_.size()) - 1);
    }
    std::vector<int> returned;
    returned.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      auto [v_out, e_out] = build(node.children[static_cast<size_t>(j)],
                                  vertex, branch_edges[static_cast<size_t>(j)]);
      (void)v_out;
      returned.push_back(e_out);
    }
    const int merge = num_vertices_++;
    for (int e_in : returned) {
      edges_[static_cast<size_t>(e_in)].head = merge;
    }
    edges_.push_back(Lnf::Edge{merge, -1, {}});
    return {merge, static_cast<int>(edges_.size()) - 1};
  }

  const LogicTree& tree_;
  std::vector<Lnf::Edge> edges_;
  int num_vertices_ = 0;
};

}  // namespace

Lnf build_lnf(const LogicTree& t, const LnfBuildOptions& options) {
  if (t.root < 0) {
    throw EncodeError("cannot build a network flow from an empty tree");
  }
  return LnfBuilder(t).run(options);
}

std::string y_var_name(int edge) { return "y" + std::to_string(edge); }

std::string w_var_name(int edge, int component) {
  return "w" + std::to_string(edge) + "_" + std::to_string(component);
}

ConstraintFragment encode_lnf(const Lnf& f, const LnfEncodeOptions& options) {
  const int num_edges = static_cast<int>(f.edges.size());
  const int num_components = static_cast<int>(f.pi.size());
  ConstraintFragment frag;

  for (const auto& [pred, time] : f.pi) {
    frag.declare(z_var_name(pred, time), 0.0, 1.0, VarKind::Binary);
  }
  for (int e = 0; e < num_edges; ++e) {
    frag.declare(y_var_name(e), 0.0, 1.0,
                 options.relax_y ? VarKind::Continuous : VarKind::Binary);
  }
  for (int e = 0; e < num_edges; ++e) {
    for (int k = 0; k < num_components; ++k) {
      frag.declare(w_var_name(e, k), 0.0, 1.0, VarKind::Continuous);
    }
  }

  // Edge rows: traversing an edge forces its literal set.
  for (int e = 0; e < num_edges; ++e) {
    for (const auto& literal : f.edges[static_cast<size_t>(e)].literals) {
      const int k = f.pi_index_of(literal.predicate, literal.time);
      if (literal.positive) {
        frag.add({{w_var_name(e, k), 1.0}, {y_var_name(e), -1.0}}, Rel::Ge,
                 0.0, "edge");
      } else {
        frag.add({{w_var_name(e, k), -1.0}, {y_var_name(e), -1.0}}, Rel::Ge,
                 -1.0, "edge");
      }
    }
  }

  // Flow conservation at interior vertices.
  for (int v = 0; v < f.num_vertices; ++v) {
    if (v == f.source || v == f.target) continue;
    const auto in = f.in_edges(v);
    const auto out = f.out_edges(v);
    std::vector<std::pair<std::string, double>> yterms;
    for (int e : in) yterms.emplace_back(y_var_name(e), 1.0);
    for (int e : out) yterms.emplace_back(y_var_name(e), -1.0);
    frag.add(std::move(yterms), Rel::Eq, 0.0, "conserve_y");
    for (int k = 0; k < num_components; ++k) {
      std::vector<std::pair<std::string, double>> wterms;
      for (int e : in) wterms.emplace_back(w_var_name(e, k), 1.0);
      for (int e : out) wterms.emplace_back(w_var_name(e, k), -1.0);
      frag.add(std::move(wterms), Rel::Eq, 0.0, "conserve_w");
    }
  }

  // Source rows: one unit of y in; the predicate vector enters as w.
  {
    const auto out = f.out_edges(f.source);
    std::vector<std::pair<std::string, double>> yterms;
    for (int e : out) yterms.emplace_back(y_var_name(e), 1.0);
    frag.add(std::move(yterms), Rel::Eq, 1.0, "source_y");
    for (int k = 0; k < num_components; ++k) {
      std::vector<std::pair<std::string, double>> wterms;
      for (int e : out) wterms.emplace_back(w_var_name(e, k), 1.0);
      wterms.emplace_back(z_var_name(f.pi[static_cast<size_t>(k)].first,
                                     f.pi[static_cast<size_t>(k)].second),
                          -1.0);
      frag.add(std::move(wterms), Rel::Eq, 0.0, "source_w");
    }
  }

  if (options.cycle_inequalities) {
    for (int v = 0; v < f.num_vertices; ++v) {
      if (v == f.source) continue;
      std::vector<std::pair<std::string, double>> yterms;
      for (int e : f.in_edges(v)) yterms.emplace_back(y_var_name(e), 1.0);
      if (!yterms.empty()) {
        frag.add(std::move(yterms), Rel::Le, 1.0, "cycle");
      }
    }
  }

  if (options.negation_guards) {
    std::vector<bool> negated(static_cast<size_t>(num_components), false);
    for (const auto& edge : f.edges) {
      for (const auto& literal : edge.literals) {
        if (!literal.positive) {
          negated[static_cast<size_t>(
              f.pi_index_of(literal.predicate, literal.time))] = true;
        }
      }
    }
    for (int k = 0; k < num_components; ++k) {
      if (!negated[static_cast<size_t>(k)]) continue;
      for (int e = 0; e < num_edges; ++e) {
        frag.add({{w_var_name(e, k), 1.0}, {y_var_name(e), -1.0}}, Rel::Le,
                 0.0, "neg_guard");
      }
    }
  }

  return frag;
}

nlohmann::json lnf_to_json(const Lnf& f) {
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < static_cast<int>(f.edges.size()); ++e) {
    const auto& edge = f.edges[static_cast<size_t>(e)];
    nlohmann::json literals = nlohmann::json::array();
    for (const auto& lit : edge.literals) {
      literals.push_back({{"predicate", lit.predicate},
                          {"time", lit.time},
                          {"positive", lit.positive}});
    }
    edges.push_back({{"id", e},
                     {"tail", edge.tail},
                     {"head", edge.head},
                     {"literals", std::move(literals)}});
  }
  nlohmann::json pi = nlohmann::json::array();
  for (const auto& [pred, time] : f.pi) {
    pi.push_back({{"predicate", pred}, {"time", time}});
  }
  return nlohmann::json{{"num_vertices", f.num_vertices},
                        {"source", f.source},
                        {"target", f.target},
                        {"edges", std::move(edges)},
                        {"pi", std::move(pi)}};
}

}  // namespace stlflow
