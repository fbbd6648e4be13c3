#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "stlflow/model.hpp"

namespace stlflow {

enum class LpStatus { Optimal, Infeasible, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;  // structural variable values, model order
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feas_tol = 1e-7;
  double dual_tol = 1e-9;
  int max_iterations = 0;  // 0: scaled default
};

/// Solves the LP relaxation (integrality dropped, declared bounds kept).
LpSolution solve_lp(const MblpModel& m, const LpOptions& options = {});

/// Basis snapshot used to warm start child nodes in branch and bound.
struct SimplexBasis {
  std::vector<std::uint8_t> status;  // per column: basic / at lower / at upper
  std::vector<int> basic;            // basic column of each row
};

/// Bounded-variable primal simplex over a fixed constraint matrix with
/// per-solve bound overrides. Phase 1 minimizes total bound infeasibility of
/// the basis (no artificial columns), so it can start from any basis; phase 2
/// optimizes the true objective. Dantzig pricing with a Bland fallback after
/// a degeneracy stall. Deterministic for identical inputs.
class SimplexEngine {
 public:
  explicit SimplexEngine(const MblpModel& m, const LpOptions& options = {});
  ~SimplexEngine();
  SimplexEngine(SimplexEngine&&) noexcept;

  LpSolution solve(const std::vector<double>& lb,
                   const std::vector<double>& ub,
                   const SimplexBasis* warm = nullptr,
                   SimplexBasis* basis_out = nullptr);

  int num_rows() const;
  const std::vector<double>& base_lb() const;
  const std::vector<double>& base_ub() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class BnbStatus { Optimal, Infeasible, Limit };

struct TraceEvent {
  long nodes = 0;
  double lb = -std::numeric_limits<double>::infinity();
  double ub = std::numeric_limits<double>::infinity();
  double t_ms = 0.0;
};

struct BnbParams {
  double gap_tol = 0.0;
  double time_limit_s = std::numeric_limits<double>::infinity();
  long node_limit = 5'000'000;
  double int_tol = 1e-6;
  double prune_slack = 1e-9;
  LpOptions lp;
};

struct BnbResult {
  BnbStatus status = BnbStatus::Infeasible;
  std::vector<double> incumbent;  // structural values; empty if none found
  double objective = std::numeric_limits<double>::infinity();     // UB
  double best_bound = -std::numeric_limits<double>::infinity();   // LB
  double root_bound = std::numeric_limits<double>::infinity();
  bool root_integral = false;
  long nodes_to_incumbent = 0;
  long nodes_to_proof = 0;
  double t_find_ms = 0.0;
  double t_prove_ms = 0.0;
  std::vector<TraceEvent> trace;
};

/// Best-bound branch and bound over the model's binary variables. Branches
/// on the fractional binary closest to one half (ties: lowest index), child
/// order fix-to-0 then fix-to-1, FIFO among equal bounds. A node is pruned
/// when its bound reaches the incumbent minus `prune_slack`; an LP-integral
/// solution becomes the incumbent. Single-threaded and deterministic.
BnbResult branch_and_bound(const MblpModel& m, const BnbParams& params = {});

struct RootGap {
  double value = 0.0;
  /// True when the optimum is zero and the gap is reported as an absolute
  /// difference instead of a fraction.
  bool absolute = false;
};

/// |optimum - root bound| / |optimum| for a proven-optimal result.
RootGap compute_root_gap(const BnbResult& result);

/// JSON-lines trace: one {"nodes","lb","ub","t_ms"} object per event.
/// Unknown bounds are written as null.
std::string trace_to_jsonl(const std::vector<TraceEvent>& trace);

}  // namespace stlflow
