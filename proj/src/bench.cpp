#include "stlflow/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace stlflow {

std::string to_string(Encoding e) {
  return e == Encoding::Tree ? "tree" : "flow";
}

Encoding encoding_from_string(const std::string& s) {
  if (s == "tree") return Encoding::Tree;
  if (s == "flow") return Encoding::Flow;
  throw EncodeError("unknown encoding: " + s + " (expected tree or flow)");
}

std::string atom_name(int robot_id, const std::string& site) {
  return "r" + std::to_string(robot_id) + "_" + site;
}

namespace {

std::string window_text(TimeInterval w) {
  return "[" + std::to_string(w.lo) + "," + std::to_string(w.hi) + "]";
}

std::string join_group(const std::vector<std::string>& parts,
                       const std::string& op) {
  if (parts.empty()) {
    throw EncodeError("template expanded to an empty group");
  }
  if (parts.size() == 1) return parts.front();
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += " " + op + " ";
    out += parts[i];
  }
  out += ")";
  return out;
}

}  // namespace

std::string deliver_spec(const std::vector<int>& robots,
                         const std::string& from, const std::string& to,
                         TimeInterval window, int delay) {
  std::vector<std::string> branches;
  for (int i : robots) {
    branches.push_back("F" + window_text(window) + "((G[0,2] " +
                       atom_name(i, from) + " & G[" + std::to_string(delay) +
                       "," + std::to_string(delay + 2) + "] " +
                       atom_name(i, to) + "))");
  }
  return join_group(branches, "|");
}

std::string charge_spec(const std::vector<int>& robots,
                        const std::string& site, TimeInterval window,
                        int hold) {
  std::vector<std::string> terms;
  for (int i : robots) {
    terms.push_back("F" + window_text(window) + "G[0," +
                    std::to_string(hold) + "] " + atom_name(i, site));
  }
  return join_group(terms, "&");
}

std::string team_spec(const std::vector<int>& robots, const std::string& site,
                      TimeInterval window, int hold) {
  std::vector<std::string> pairs;
  for (int i : robots) {
    for (int j : robots) {
      if (i == j) continue;
      pairs.push_back("(G[0," + std::to_string(hold) + "] " +
                      atom_name(i, site) + " & G[0," + std::to_string(hold) +
                      "] " + atom_name(j, site) + ")");
    }
  }
  return "F" + window_text(window) + join_group(pairs, "|");
}

std::string search_spec(const std::vector<int>& robots,
                        const std::vector<SearchPosition>& positions) {
  std::vector<std::string> terms;
  for (const auto& pos : positions) {
    std::vector<std::string> visitors;
    for (int i : robots) {
      visitors.push_back("G[0,1] " + atom_name(i, pos.site));
    }
    terms.push_back("F" + window_text(pos.window) +
                    join_group(visitors, "|"));
  }
  return join_group(terms, "&");
}

namespace {

TimeInterval window_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw EncodeError("window must be a [lo, hi] pair");
  }
  return TimeInterval(j[0].get<int>(), j[1].get<int>());
}

std::vector<int> robots_from_json(const nlohmann::json& tmpl,
                                  const char* key = "robots") {
  std::vector<int> robots;
  for (const auto& r : tmpl.at(key)) robots.push_back(r.get<int>());
  if (robots.empty()) throw EncodeError("template needs at least one robot");
  return robots;
}

}  // namespace

std::string expand_template(const nlohmann::json& tmpl) {
  const std::string kind = tmpl.at("kind").get<std::string>();
  if (kind == "deliver") {
    return deliver_spec(robots_from_json(tmpl),
                        tmpl.at("from").get<std::string>(),
                        tmpl.at("to").get<std::string>(),
                        window_from_json(tmpl.at("window")),
                        tmpl.at("delay").get<int>());
  }
  if (kind == "charge") {
    TimeInterval window = tmpl.contains("window")
                              ? window_from_json(tmpl["window"])
                              : TimeInterval(10, 20);
    return charge_spec(robots_from_json(tmpl),
                       tmpl.at("site").get<std::string>(), window,
                       tmpl.value("hold", 1));
  }
  if (kind == "team") {
    return team_spec(robots_from_json(tmpl),
                     tmpl.at("site").get<std::string>(),
                     window_from_json(tmpl.at("window")),
                     tmpl.value("hold", 1));
  }
  if (kind == "search") {
    std::vector<SearchPosition> positions;
    for (const auto& p : tmpl.at("positions")) {
      positions.push_back(SearchPosition{p.at("site").get<std::string>(),
                                         window_from_json(p.at("window"))});
    }
    if (positions.empty()) {
      throw EncodeError("search template needs positions");
    }
    return search_spec(robots_from_json(tmpl), positions);
  }
  throw EncodeError("unknown template kind: " + kind);
}

std::set<std::string> Scenario::predicate_table() const {
  std::set<std::string> table;
  for (const auto& robot : robots) {
    for (const auto& site : map.sites) {
      table.insert(atom_name(robot.id, site.name));
    }
  }
  return table;
}

std::map<std::string, AtomBinding> Scenario::bindings() const {
  std::map<std::string, AtomBinding> out;
  for (const auto& robot : robots) {
    for (const auto& site : map.sites) {
      out[atom_name(robot.id, site.name)] =
          AtomBinding{robot.id, site.name};
    }
  }
  return out;
}

Scenario scenario_from_json(const nlohmann::json& j) {
  Scenario s;
  s.name = j.value("name", "scenario");
  s.dt_minutes = j.value("dt_minutes", 1.0);
  s.horizon = j.at("horizon").get<int>();
  if (s.horizon < 1) throw EncodeError("scenario horizon must be >= 1");
  s.map = site_graph_from_json(j.at("map"));
  for (const auto& jr : j.at("robots")) {
    RobotSpec robot;
    robot.id = jr.at("id").get<int>();
    robot.initial_site = jr.at("initial_site").get<std::string>();
    s.map.site_index(robot.initial_site);  // validates
    s.robots.push_back(std::move(robot));
  }
  for (size_t a = 0; a < s.robots.size(); ++a) {
    for (size_t b = a + 1; b < s.robots.size(); ++b) {
      if (s.robots[a].id == s.robots[b].id) {
        throw EncodeError("duplicate robot id " +
                          std::to_string(s.robots[a].id));
      }
    }
  }

  std::vector<std::string> parts;
  if (j.contains("spec_templates")) {
    for (const auto& tmpl : j["spec_templates"]) {
      parts.push_back(expand_template(tmpl));
    }
  }
  if (j.contains("spec") && !j["spec"].get<std::string>().empty()) {
    parts.push_back(j["spec"].get<std::string>());
  }
  if (!parts.empty()) s.spec_text = join_group(parts, "&");

  if (j.contains("seeds")) {
    for (const auto& seed : j["seeds"]) {
      s.seeds.push_back(seed.get<std::uint64_t>());
    }
  }
  if (j.contains("solver")) {
    const auto& js = j["solver"];
    s.solver.gap_tol = js.value("gap_tol", 0.0);
    s.solver.time_limit_s = js.value("time_limit_s", 600.0);
    s.solver.node_limit = js.value("node_limit", 5'000'000L);
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EncodeError("cannot open scenario file: " + path);
  nlohmann::json j;
  in >> j;
  return scenario_from_json(j);
}

CompiledSpec compile_spec(const Scenario& s) {
  CompiledSpec out;
  if (s.spec_text.empty()) {
    out.grounded.root = -1;
    return out;
  }
  Formula f = parse_stl(s.spec_text, s.predicate_table());
  out.grounded = ground(to_nnf(f), 0, s.horizon - 1);
  out.tree = build_logic_tree(out.grounded);
  out.flow = build_lnf(out.tree);
  out.pi = out.tree.pi;
  return out;
}

std::vector<TimeExpandedGraph> build_robot_graphs(const Scenario& s,
                                                  std::uint64_t seed) {
  std::vector<TimeExpandedGraph> graphs;
  graphs.reserve(s.robots.size());
  for (size_t r = 0; r < s.robots.size(); ++r) {
    const auto& robot = s.robots[r];
    graphs.push_back(build_dnf(
        s.map, s.horizon, robot.initial_site,
        mix_seed(seed, static_cast<std::uint64_t>(robot.id)),
        "d" + std::to_string(robot.id)));
  }
  return graphs;
}

MblpModel build_model(const Scenario& s, const CompiledSpec& spec,
                      const std::vector<TimeExpandedGraph>& graphs,
                      Encoding encoding) {
  ConstraintFragment spec_fragment;
  ConstraintFragment coupling;
  if (spec.grounded.root >= 0) {
    spec_fragment = encoding == Encoding::Tree ? encode_tree(spec.tree)
                                               : encode_lnf(spec.flow);
    std::map<int, const TimeExpandedGraph*> by_robot;
    for (size_t r = 0; r < s.robots.size(); ++r) {
      by_robot[s.robots[r].id] = &graphs[r];
    }
    coupling = couple_predicates(spec.pi, s.bindings(), by_robot);
  }
  std::vector<ConstraintFragment> dyn;
  std::vector<std::pair<std::string, double>> objective;
  for (const auto& g : graphs) {
    dyn.push_back(encode_dnf(g));
    for (auto& term : edge_cost_terms(g)) objective.push_back(std::move(term));
  }
  return assemble(spec_fragment, dyn, coupling, objective);
}

std::string run_record_csv_header() {
  return "encoding,seed,n_binary,n_continuous,n_constraints,root_gap,"
         "t_find_opt,nodes_find_opt,t_prove_opt,nodes_prove_opt,optimum,"
         "status";
}

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string to_csv_row(const RunRecord& r) {
  std::string out;
  out += r.encoding + "," + std::to_string(r.seed) + ",";
  out += std::to_string(r.n_binary) + "," + std::to_string(r.n_continuous) +
         "," + std::to_string(r.n_constraints) + ",";
  out += fmt_double(r.root_gap) + "," + fmt_double(r.t_find_opt) + "," +
         std::to_string(r.nodes_find_opt) + "," + fmt_double(r.t_prove_opt) +
         "," + std::to_string(r.nodes_prove_opt) + "," +
         fmt_double(r.optimum) + "," + r.status;
  return out;
}

nlohmann::json run_record_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["encoding"] = r.encoding;
  j["seed"] = r.seed;
  j["n_binary"] = r.n_binary;
  j["n_continuous"] = r.n_continuous;
  j["n_constraints"] = r.n_constraints;
  if (!std::isnan(r.root_gap)) j["root_gap"] = r.root_gap;
  if (!std::isnan(r.t_find_opt)) j["t_find_opt"] = r.t_find_opt;
  j["nodes_find_opt"] = r.nodes_find_opt;
  if (!std::isnan(r.t_prove_opt)) j["t_prove_opt"] = r.t_prove_opt;
  j["nodes_prove_opt"] = r.nodes_prove_opt;
  if (!std::isnan(r.optimum)) j["optimum"] = r.optimum;
  j["status"] = r.status;
  return j;
}

std::vector<RunRecord> run_benchmark(const Scenario& s,
                                     const BenchParams& params) {
  namespace fs = std::filesystem;
  const std::vector<std::uint64_t> seeds =
      params.seeds.value_or(s.seeds.empty() ? std::vector<std::uint64_t>{0}
                                            : s.seeds);
  if (!params.out_dir.empty()) {
    fs::create_directories(params.out_dir);
  }

  CompiledSpec spec = compile_spec(s);
  std::vector<RunRecord> records;
  for (std::uint64_t seed : seeds) {
    const auto graphs = build_robot_graphs(s, seed);
    for (Encoding encoding : params.encodings) {
      RunRecord record;
      record.encoding = to_string(encoding);
      record.seed = seed;
      try {
        MblpModel model = build_model(s, spec, graphs, encoding);
        const ModelStats stats = model_stats(model);
        record.n_binary = stats.n_binary;
        record.n_continuous = stats.n_continuous;
        record.n_constraints = stats.n_constraints;

        BnbParams bnb;
        bnb.gap_tol = s.solver.gap_tol;
        bnb.time_limit_s = s.solver.time_limit_s;
        bnb.node_limit = s.solver.node_limit;
        BnbResult result = branch_and_bound(model, bnb);

        record.nodes_find_opt = result.nodes_to_incumbent;
        record.nodes_prove_opt = result.nodes_to_proof;
        record.t_find_opt = result.t_find_ms / 1000.0;
        record.t_prove_opt = result.t_prove_ms / 1000.0;
        switch (result.status) {
          case BnbStatus::Optimal: {
            record.status = "optimal";
            record.optimum = result.objective;
            const RootGap gap = compute_root_gap(result);
            record.root_gap = gap.value;
            break;
          }
          case BnbStatus::Infeasible:
            record.status = "infeasible";
            break;
          case BnbStatus::Limit:
            record.status = "limit";
            break;
        }
        if (!params.out_dir.empty()) {
          const std::string path = params.out_dir + "/trace_" +
                                   record.encoding + "_seed" +
                                   std::to_string(seed) + ".jsonl";
          std::ofstream out(path);
          out << trace_to_jsonl(result.trace);
        }
      } catch (const Error& e) {
        record.status = std::string("error: ") + e.what();
      }
      records.push_back(std::move(record));
    }
  }

  if (!params.out_dir.empty()) {
    std::ofstream csv(params.out_dir + "/results.csv");
    csv << run_record_csv_header() << "\n";
    for (const auto& record : records) {
      csv << to_csv_row(record) << "\n";
    }
  }
  return records;
}

std::pair<double, double> median_mad(std::vector<double> values) {
  if (values.empty()) {
    return {std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN()};
  }
  auto median_of = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
  };
  const double med = median_of(values);
  std::vector<double> deviations;
  deviations.reserve(values.size());
  for (double v : values) deviations.push_back(std::fabs(v - med));
  const double mad = median_of(deviations);
  return {med, mad};
}

std::string summarize(const std::vector<RunRecord>& records) {
  std::string out;
  for (const std::string encoding : {"tree", "flow"}) {
    std::vector<const RunRecord*> rows;
    for (const auto& r : records) {
      if (r.encoding == encoding) rows.push_back(&r);
    }
    if (rows.empty()) continue;
    out += encoding + ":\n";
    auto line = [&](const char* label, auto getter) {
      std::vector<double> values;
      for (const auto* r : rows) {
        const double v = getter(*r);
        if (!std::isnan(v)) values.push_back(v);
      }
      if (values.empty()) return;
      auto [med, mad] = median_mad(std::move(values));
      char buf[120];
      std::snprintf(buf, sizeof(buf), "  %-16s %.6g +- %.6g\n", label, med,
                    mad);
      out += buf;
    };
    line("root_gap", [](const RunRecord& r) { return r.root_gap; });
    line("t_find_opt", [](const RunRecord& r) { return r.t_find_opt; });
    line("nodes_find_opt", [](const RunRecord& r) {
      return static_cast<double>(r.nodes_find_opt);
    });
    line("t_prove_opt", [](const RunRecord& r) { return r.t_prove_opt; });
    line("nodes_prove_opt", [](const RunRecord& r) {
      return static_cast<double>(r.nodes_prove_opt);
    });
    line("optimum", [](const RunRecord& r) { return r.optimum; });
  }
  return out;
}

}  // namespace stlflow
