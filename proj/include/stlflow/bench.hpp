#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stlflow/dynflow.hpp"
#include "stlflow/formula.hpp"
#include "stlflow/logicflow.hpp"
#include "stlflow/logictree.hpp"
#include "stlflow/model.hpp"
#include "stlflow/solver.hpp"

namespace stlflow {

enum class Encoding { Tree, Flow };

std::string to_string(Encoding e);
Encoding encoding_from_string(const std::string& s);

/// Atom naming convention for robot-indexed predicates: r<id>_<site>.
std::string atom_name(int robot_id, const std::string& site);

// Spec templates. Windows are [t1, t2] pairs; every emitted formula follows
// the text grammar of parse_stl.

/// One robot delivers: pick up at `from` within `window` holding 2 extra
/// steps, drop at `to` after `delay` steps holding 2 extra steps; any robot
/// may take the task.
std::string deliver_spec(const std::vector<int>& robots,
                         const std::string& from, const std::string& to,
                         TimeInterval window, int delay);

/// Every robot visits `site` within `window` and stays `hold` extra steps.
std::string charge_spec(const std::vector<int>& robots,
                        const std::string& site, TimeInterval window,
                        int hold);

/// Some ordered pair of distinct robots occupies `site` simultaneously for
/// `hold` extra steps, somewhere within `window`.
std::string team_spec(const std::vector<int>& robots, const std::string& site,
                      TimeInterval window, int hold);

/// Every listed position is visited by some robot within its window,
/// holding one extra step.
struct SearchPosition {
  std::string site;
  TimeInterval window;
};
std::string search_spec(const std::vector<int>& robots,
                        const std::vector<SearchPosition>& positions);

/// JSON dispatcher over the four kinds; see the scenario schema in the
/// README. Throws EncodeError on unknown kinds or bad arguments.
std::string expand_template(const nlohmann::json& tmpl);

struct RobotSpec {
  int id = 0;
  std::string initial_site;
};

struct SolverConfig {
  double gap_tol = 0.0;
  double time_limit_s = 600.0;
  long node_limit = 5'000'000;
};

struct Scenario {
  std::string name;
  double dt_minutes = 1.0;
  int horizon = 1;  // number of time slices N; formulas may use 0..N-1
  SiteGraph map;
  std::vector<RobotSpec> robots;
  std::string spec_text;  // fully expanded STL text; may be empty
  std::vector<std::uint64_t> seeds;
  SolverConfig solver;

  std::set<std::string> predicate_table() const;
  std::map<std::string, AtomBinding> bindings() const;
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

/// Everything derived from a scenario that does not depend on the seed.
struct CompiledSpec {
  GroundedFormula grounded;
  LogicTree tree;
  Lnf flow;
  std::vector<std::pair<std::string, int>> pi;
};

CompiledSpec compile_spec(const Scenario& s);

/// Per-robot graphs with costs drawn from `seed` (stream split per robot).
std::vector<TimeExpandedGraph> build_robot_graphs(const Scenario& s,
                                                  std::uint64_t seed);

/// Assembles the full model for one encoding and seed.
MblpModel build_model(const Scenario& s, const CompiledSpec& spec,
                      const std::vector<TimeExpandedGraph>& graphs,
                      Encoding encoding);

struct RunRecord {
  std::string encoding;
  std::uint64_t seed = 0;
  int n_binary = 0;
  int n_continuous = 0;
  int n_constraints = 0;
  double root_gap = std::numeric_limits<double>::quiet_NaN();
  double t_find_opt = std::numeric_limits<double>::quiet_NaN();   // seconds
  long nodes_find_opt = 0;
  double t_prove_opt = std::numeric_limits<double>::quiet_NaN();  // seconds
  long nodes_prove_opt = 0;
  double optimum = std::numeric_limits<double>::quiet_NaN();
  std::string status;
};

std::string run_record_csv_header();
std::string to_csv_row(const RunRecord& r);
nlohmann::json run_record_to_json(const RunRecord& r);

struct BenchParams {
  std::vector<Encoding> encodings{Encoding::Tree, Encoding::Flow};
  std::optional<std::vector<std::uint64_t>> seeds;  // default: scenario seeds
  std::string out_dir;  // empty: no files written
};

/// Runs every (seed, encoding) cell, writes results.csv plus one JSON-lines
/// trace per run under out_dir when set, and returns all records. Failures
/// become status rows; the batch continues.
std::vector<RunRecord> run_benchmark(const Scenario& s,
                                     const BenchParams& params);

/// median and median absolute deviation.
std::pair<double, double> median_mad(std::vector<double> values);

/// Per-encoding `median +- MAD` table over the numeric record fields.
std::string summarize(const std::vector<RunRecord>& records);

}  // namespace stlflow
