#include "stlflow/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

#include <Eigen/Dense>

namespace stlflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum ColStatus : std::uint8_t { kAtLower = 0, kAtUpper = 1, kBasic = 2 };

constexpr int kRefactorInterval = 128;
constexpr int kDegeneracyStall = 400;
constexpr double kPivotTol = 1e-9;
constexpr double kDegenStep = 1e-10;

}  // namespace

struct SimplexEngine::Impl {
  // Constraint matrix in column-sparse form over structural plus slack
  // columns. Slack column j (j >= n_struct) has a single +1 entry in its row.
  int m = 0;
  int n_struct = 0;
  int n_total = 0;
  std::vector<int> col_start;
  std::vector<int> row_idx;
  std::vector<double> a_val;
  std::vector<double> rhs;
  std::vector<double> cost;     // size n_total; slacks cost zero
  std::vector<double> base_lb;  // size n_total
  std::vector<double> base_ub;
  LpOptions options;

  // Per-solve state.
  std::vector<double> lb, ub;
  std::vector<std::uint8_t> status;
  std::vector<int> basic;
  Eigen::MatrixXd Binv;
  Eigen::VectorXd xB;
  int iterations = 0;
  int pivots_since_refactor = 0;

  explicit Impl(const MblpModel& model, const LpOptions& opts)
      : options(opts) {
    m = model.num_rows();
    n_struct = model.num_vars();
    n_total = n_struct + m;
    col_start.assign(static_cast<size_t>(n_total) + 1, 0);

    // Column counts from rows.
    std::vector<std::vector<std::pair<int, double>>> cols(
        static_cast<size_t>(n_struct));
    rhs.resize(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      const auto& row = model.rows()[static_cast<size_t>(i)];
      rhs[static_cast<size_t>(i)] = row.rhs;
      for (const auto& [j, coef] : row.terms) {
        if (coef != 0.0) cols[static_cast<size_t>(j)].emplace_back(i, coef);
      }
    }
    for (int j = 0; j < n_struct; ++j) {
      auto& entries = cols[static_cast<size_t>(j)];
      std::sort(entries.begin(), entries.end());
      // Merge duplicate row entries.
      std::vector<std::pair<int, double>> merged;
      for (const auto& [r, v] : entries) {
        if (!merged.empty() && merged.back().first == r) {
          merged.back().second += v;
        } else {
          merged.emplace_back(r, v);
        }
      }
      col_start[static_cast<size_t>(j) + 1] =
          col_start[static_cast<size_t>(j)] + static_cast<int>(merged.size());
      for (const auto& [r, v] : merged) {
        row_idx.push_back(r);
        a_val.push_back(v);
      }
      entries = std::move(merged);
    }
    for (int i = 0; i < m; ++i) {
      const int j = n_struct + i;
      col_start[static_cast<size_t>(j) + 1] =
          col_start[static_cast<size_t>(j)] + 1;
      row_idx.push_back(i);
      a_val.push_back(1.0);
    }

    cost.assign(static_cast<size_t>(n_total), 0.0);
    base_lb.resize(static_cast<size_t>(n_total));
    base_ub.resize(static_cast<size_t>(n_total));
    for (int j = 0; j < n_struct; ++j) {
      const auto& var = model.vars()[static_cast<size_t>(j)];
      cost[static_cast<size_t>(j)] = model.objective()[static_cast<size_t>(j)];
      base_lb[static_cast<size_t>(j)] = var.lb;
      base_ub[static_cast<size_t>(j)] = var.ub;
    }
    for (int i = 0; i < m; ++i) {
      const int j = n_struct + i;
      switch (model.rows()[static_cast<size_t>(i)].rel) {
        case Rel::Le:
          base_lb[static_cast<size_t>(j)] = 0.0;
          base_ub[static_cast<size_t>(j)] = kInf;
          break;
        case Rel::Ge:
          base_lb[static_cast<size_t>(j)] = -kInf;
          base_ub[static_cast<size_t>(j)] = 0.0;
          break;
        case Rel::Eq:
          base_lb[static_cast<size_t>(j)] = 0.0;
          base_ub[static_cast<size_t>(j)] = 0.0;
          break;
      }
    }
  }

  double nb_value(int j) const {
    return status[static_cast<size_t>(j)] == kAtUpper
               ? ub[static_cast<size_t>(j)]
               : lb[static_cast<size_t>(j)];
  }

  template <typename Fn>
  void for_col(int j, Fn&& fn) const {
    for (int p = col_start[static_cast<size_t>(j)];
         p < col_start[static_cast<size_t>(j) + 1]; ++p) {
      fn(row_idx[static_cast<size_t>(p)], a_val[static_cast<size_t>(p)]);
    }
  }

  void refactor() {
    if (m == 0) {
      Binv.resize(0, 0);
      xB.resize(0);
      pivots_since_refactor = 0;
      return;
    }
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      for_col(basic[static_cast<size_t>(i)],
              [&](int r, double v) { B(r, i) = v; });
    }
    Binv = B.partialPivLu().inverse();
    recompute_basics();
    pivots_since_refactor = 0;
  }

  void recompute_basics() {
    Eigen::VectorXd r(m);
    for (int i = 0; i < m; ++i) r(i) = rhs[static_cast<size_t>(i)];
    for (int j = 0; j < n_total; ++j) {
      if (status[static_cast<size_t>(j)] == kBasic) continue;
      const double v = nb_value(j);
      if (v != 0.0) {
        for_col(j, [&](int row, double coef) { r(row) -= coef * v; });
      }
    }
    xB = Binv * r;
  }

  Eigen::VectorXd ftran(int j) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for_col(j, [&](int row, double coef) { w += coef * Binv.col(row); });
    return w;
  }

  double reduced_cost(int j, const Eigen::VectorXd& y,
                      const std::vector<double>& cvec) const {
    double d = cvec[static_cast<size_t>(j)];
    for_col(j, [&](int row, double coef) { d -= coef * y(row); });
    return d;
  }

  double infeasibility() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      const int j = basic[static_cast<size_t>(i)];
      const double v = xB(i);
      if (v < lb[static_cast<size_t>(j)]) {
        total += lb[static_cast<size_t>(j)] - v;
      } else if (v > ub[static_cast<size_t>(j)]) {
        total += v - ub[static_cast<size_t>(j)];
      }
    }
    return total;
  }

  // One simplex iteration for the given phase. Returns:
  //   0 = pivoted or flipped, 1 = no entering candidate, 2 = iteration limit.
  int iterate(bool phase1, int max_iterations, bool bland, bool* degenerate) {
    const double feas = options.feas_tol;
    // Phase objective for basic columns.
    Eigen::VectorXd cB(m);
    for (int i = 0; i < m; ++i) {
      const int j = basic[static_cast<size_t>(i)];
      if (phase1) {
        if (xB(i) < lb[static_cast<size_t>(j)] - feas) {
          cB(i) = -1.0;
        } else if (xB(i) > ub[static_cast<size_t>(j)] + feas) {
          cB(i) = 1.0;
        } else {
          cB(i) = 0.0;
        }
      } else {
        cB(i) = cost[static_cast<size_t>(j)];
      }
    }
    Eigen::VectorXd y = Binv.transpose() * cB;

    // Pricing.
    int entering = -1;
    double best_score = options.dual_tol;
    int direction = 0;
    for (int j = 0; j < n_total; ++j) {
      const auto st = status[static_cast<size_t>(j)];
      if (st == kBasic) continue;
      if (lb[static_cast<size_t>(j)] == ub[static_cast<size_t>(j)]) continue;
      double d = phase1 ? -([&] {
                     double dot = 0.0;
                     for_col(j, [&](int row, double coef) {
                       dot += coef * y(row);
                     });
                     return dot;
                   }())
                        : reduced_cost(j, y, cost);
      int dir = 0;
      double score = 0.0;
      if (st == kAtLower && d < -options.dual_tol) {
        dir = +1;
        score = -d;
      } else if (st == kAtUpper && d > options.dual_tol) {
        dir = -1;
        score = d;
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (score > best_score) {
        best_score = score;
        entering = j;
        direction = dir;
      }
    }
    if (entering == -1) return 1;
    if (iterations >= max_iterations) return 2;
    ++iterations;

    // Ratio test: entering moves by t >= 0 in `direction`; basic i moves by
    // -direction * t * w_i.
    Eigen::VectorXd w = ftran(entering);
    double best_t = ub[static_cast<size_t>(entering)] -
                    lb[static_cast<size_t>(entering)];  // own-bound flip
    int leave_row = -1;
    std::uint8_t leave_status = kAtLower;
    double leave_pivot = 0.0;
    for (int i = 0; i < m; ++i) {
      const double wi = w(i);
      const double step = direction * wi;
      if (std::fabs(wi) <= kPivotTol) continue;
      const int j = basic[static_cast<size_t>(i)];
      const double lo = lb[static_cast<size_t>(j)];
      const double hi = ub[static_cast<size_t>(j)];
      const double v = xB(i);
      double t = kInf;
      std::uint8_t hit = kAtLower;
      if (step > 0.0) {
        // Basic value decreases.
        if (phase1 && v > hi + feas) {
          t = (v - hi) / step;  // leaves feasible at its upper bound
          hit = kAtUpper;
        } else if (v >= lo - feas) {
          if (lo == -kInf) continue;
          t = (v - lo) / step;
          hit = kAtLower;
        } else {
          continue;  // already below lower, moving further away blocks nothing
        }
      } else {
        // Basic value increases.
        if (phase1 && v < lo - feas) {
          t = (lo - v) / (-step);
          hit = kAtLower;
        } else if (v <= hi + feas) {
          if (hi == kInf) continue;
          t = (hi - v) / (-step);
          hit = kAtUpper;
        } else {
          continue;
        }
      }
      if (t < 0.0) t = 0.0;
      const bool better =
          t < best_t - 1e-12 ||
          (t < best_t + 1e-12 && leave_row >= 0 &&
           (bland ? basic[static_cast<size_t>(i)] <
                        basic[static_cast<size_t>(leave_row)]
                  : std::fabs(wi) > std::fabs(leave_pivot)));
      if (leave_row == -1 ? t < best_t : better) {
        best_t = t;
        leave_row = i;
        leave_status = hit;
        leave_pivot = wi;
      }
    }

    if (best_t == kInf) {
      throw SolveError("simplex step unbounded; inconsistent bounds");
    }
    *degenerate = best_t <= kDegenStep;

    if (leave_row == -1) {
      // Entering variable flips to its opposite bound.
      const double t = best_t;
      for (int i = 0; i < m; ++i) xB(i) -= direction * t * w(i);
      status[static_cast<size_t>(entering)] =
          status[static_cast<size_t>(entering)] == kAtLower ? kAtUpper
                                                            : kAtLower;
      return 0;
    }

    // Pivot: entering becomes basic in leave_row.
    const double enter_value = nb_value(entering) + direction * best_t;
    for (int i = 0; i < m; ++i) xB(i) -= direction * best_t * w(i);
    const int leaving = basic[static_cast<size_t>(leave_row)];
    status[static_cast<size_t>(leaving)] = leave_status;
    status[static_cast<size_t>(entering)] = kBasic;
    basic[static_cast<size_t>(leave_row)] = entering;
    xB(leave_row) = enter_value;

    // Product-form update of the dense inverse.
    const double pivot = w(leave_row);
    Eigen::VectorXd wc = w;
    wc(leave_row) = 0.0;
    Binv.row(leave_row) /= pivot;
    Binv.noalias() -= wc * Binv.row(leave_row);

    if (++pivots_since_refactor >= kRefactorInterval) {
      refactor();
    }
    return 0;
  }

  // Runs one phase to completion. Returns LpStatus-ish: 0 done, 2 limit.
  int run_phase(bool phase1, int max_iterations) {
    int degen_streak = 0;
    bool bland = false;
    while (true) {
      if (phase1 && infeasibility() <= options.feas_tol) return 0;
      bool degenerate = false;
      const int rc = iterate(phase1, max_iterations, bland, &degenerate);
      if (rc == 1) return 0;  // phase optimal (or proven infeasible)
      if (rc == 2) return 2;
      if (degenerate) {
        if (++degen_streak > kDegeneracyStall) bland = true;
      } else {
        degen_streak = 0;
        bland = false;
      }
    }
  }

  LpSolution solve(const std::vector<double>& lb_in,
                   const std::vector<double>& ub_in, const SimplexBasis* warm,
                   SimplexBasis* basis_out) {
    lb = lb_in;
    ub = ub_in;
    lb.resize(static_cast<size_t>(n_total));
    ub.resize(static_cast<size_t>(n_total));
    for (int i = 0; i < m; ++i) {
      lb[static_cast<size_t>(n_struct + i)] =
          base_lb[static_cast<size_t>(n_struct + i)];
      ub[static_cast<size_t>(n_struct + i)] =
          base_ub[static_cast<size_t>(n_struct + i)];
    }
    iterations = 0;
    const int max_iterations = options.max_iterations > 0
                                   ? options.max_iterations
                                   : std::max(20000, 200 * (m + 1));

    bool warm_ok = warm != nullptr &&
                   static_cast<int>(warm->status.size()) == n_total &&
                   static_cast<int>(warm->basic.size()) == m;
    if (warm_ok) {
      status = warm->status;
      basic = warm->basic;
      // Nonbasic columns whose bound moved sit at the nearest new bound.
      for (int j = 0; j < n_total; ++j) {
        if (status[static_cast<size_t>(j)] == kBasic) continue;
        if (status[static_cast<size_t>(j)] == kAtUpper &&
            ub[static_cast<size_t>(j)] == kInf) {
          status[static_cast<size_t>(j)] = kAtLower;
        }
        if (status[static_cast<size_t>(j)] == kAtLower &&
            lb[static_cast<size_t>(j)] == -kInf) {
          status[static_cast<size_t>(j)] = kAtUpper;
        }
      }
    } else {
      status.assign(static_cast<size_t>(n_total), kAtLower);
      basic.resize(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        basic[static_cast<size_t>(i)] = n_struct + i;
        status[static_cast<size_t>(n_struct + i)] = kBasic;
      }
    }
    refactor();

    LpSolution result;
    int rc = run_phase(/*phase1=*/true, max_iterations);
    if (rc == 2) {
      result.status = LpStatus::IterationLimit;
      result.iterations = iterations;
      return result;
    }
    if (infeasibility() > options.feas_tol * 10.0) {
      result.status = LpStatus::Infeasible;
      result.iterations = iterations;
      return result;
    }
    rc = run_phase(/*phase1=*/false, max_iterations);
    refactor();  // fresh factorization for accurate reported values
    if (infeasibility() > options.feas_tol * 10.0) {
      // Accumulated error surfaced at the end; one clean retry from scratch.
      if (warm_ok) {
        return solve(lb_in, ub_in, nullptr, basis_out);
      }
      int extra = run_phase(/*phase1=*/true, max_iterations);
      if (extra == 0) extra = run_phase(/*phase1=*/false, max_iterations);
      refactor();
      if (extra == 2 || infeasibility() > options.feas_tol * 10.0) {
        result.status = extra == 2 ? LpStatus::IterationLimit
                                   : LpStatus::Infeasible;
        result.iterations = iterations;
        return result;
      }
      rc = 0;
    }
    if (rc == 2) {
      result.status = LpStatus::IterationLimit;
      result.iterations = iterations;
      return result;
    }

    // Snap basic values sitting within snapping distance of a bound.
    for (int i = 0; i < m; ++i) {
      const int j = basic[static_cast<size_t>(i)];
      if (std::fabs(xB(i) - lb[static_cast<size_t>(j)]) <= 1e-8) {
        xB(i) = lb[static_cast<size_t>(j)];
      } else if (std::fabs(xB(i) - ub[static_cast<size_t>(j)]) <= 1e-8) {
        xB(i) = ub[static_cast<size_t>(j)];
      }
    }

    result.status = LpStatus::Optimal;
    result.x.assign(static_cast<size_t>(n_struct), 0.0);
    for (int j = 0; j < n_struct; ++j) {
      if (status[static_cast<size_t>(j)] != kBasic) {
        result.x[static_cast<size_t>(j)] = nb_value(j);
      }
    }
    for (int i = 0; i < m; ++i) {
      const int j = basic[static_cast<size_t>(i)];
      if (j < n_struct) result.x[static_cast<size_t>(j)] = xB(i);
    }
    result.objective = 0.0;
    for (int j = 0; j < n_struct; ++j) {
      result.objective += cost[static_cast<size_t>(j)] *
                          result.x[static_cast<size_t>(j)];
    }
    result.iterations = iterations;
    if (basis_out != nullptr) {
      basis_out->status = status;
      basis_out->basic = basic;
    }
    return result;
  }
};

SimplexEngine::SimplexEngine(const MblpModel& m, const LpOptions& options)
    : impl_(std::make_unique<Impl>(m, options)) {}

SimplexEngine::~SimplexEngine() = default;
SimplexEngine::SimplexEngine(SimplexEngine&&) noexcept = default;

LpSolution SimplexEngine::solve(const std::vector<double>& lb,
                                const std::vector<double>& ub,
                                const SimplexBasis* warm,
                                SimplexBasis* basis_out) {
  return impl_->solve(lb, ub, warm, basis_out);
}

int SimplexEngine::num_rows() const { return impl_->m; }

const std::vector<double>& SimplexEngine::base_lb() const {
  return impl_->base_lb;
}

const std::vector<double>& SimplexEngine::base_ub() const {
  return impl_->base_ub;
}

LpSolution solve_lp(const MblpModel& m, const LpOptions& options) {
  SimplexEngine engine(m, options);
  std::vector<double> lb(engine.base_lb().begin(),
                         engine.base_lb().begin() + m.num_vars());
  std::vector<double> ub(engine.base_ub().begin(),
                         engine.base_ub().begin() + m.num_vars());
  return engine.solve(lb, ub);
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

struct FixChain {
  int var;
  double value;
  std::shared_ptr<const FixChain> parent;
};

struct Node {
  double bound;
  long seq;
  std::shared_ptr<const FixChain> fixes;
  std::shared_ptr<const SimplexBasis> warm;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // then FIFO
  }
};

}  // namespace

BnbResult branch_and_bound(const MblpModel& m, const BnbParams& params) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  auto elapsed_ms = [&t0]() {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0)
        .count();
  };

  SimplexEngine engine(m, params.lp);
  const int n = m.num_vars();
  std::vector<double> base_lb(engine.base_lb().begin(),
                              engine.base_lb().begin() + n);
  std::vector<double> base_ub(engine.base_ub().begin(),
                              engine.base_ub().begin() + n);
  std::vector<int> binary_vars;
  for (int j = 0; j < n; ++j) {
    if (m.vars()[static_cast<size_t>(j)].kind == VarKind::Binary) {
      binary_vars.push_back(j);
    }
  }

  BnbResult result;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long seq = 0;
  open.push(Node{-kInf, seq++, nullptr, nullptr});

  double ub_value = kInf;
  double lb_report = -kInf;
  long nodes_explored = 0;
  bool limit_hit = false;

  auto emit = [&](double lb, double ub) {
    if (!result.trace.empty() && result.trace.back().lb == lb &&
        result.trace.back().ub == ub) {
      return;
    }
    result.trace.push_back(TraceEvent{nodes_explored, lb, ub, elapsed_ms()});
  };

  auto current_lb = [&]() {
    double lb = open.empty() ? ub_value : std::min(open.top().bound, ub_value);
    return std::max(lb, lb_report);
  };

  auto gap_closed = [&]() {
    if (ub_value == kInf) return false;
    const double gap = ub_value - lb_report;
    const double denom = std::fabs(ub_value);
    if (denom < 1e-12) return gap <= params.gap_tol;
    return gap / denom <= params.gap_tol;
  };

  std::vector<double> lb_work, ub_work;
  while (!open.empty()) {
    if (nodes_explored >= params.node_limit ||
        elapsed_ms() / 1000.0 > params.time_limit_s) {
      limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= ub_value - params.prune_slack) {
      continue;
    }
    lb_work = base_lb;
    ub_work = base_ub;
    for (const FixChain* fix = node.fixes.get(); fix != nullptr;
         fix = fix->parent.get()) {
      lb_work[static_cast<size_t>(fix->var)] = fix->value;
      ub_work[static_cast<size_t>(fix->var)] = fix->value;
    }
    auto basis = std::make_shared<SimplexBasis>();
    LpSolution lp = engine.solve(lb_work, ub_work, node.warm.get(), basis.get());
    ++nodes_explored;

    if (nodes_explored == 1) {
      result.root_bound =
          lp.status == LpStatus::Optimal ? lp.objective : kInf;
    }

    if (lp.status == LpStatus::IterationLimit) {
      open.push(node);  // keep its bound visible to the reported best bound
      limit_hit = true;
      break;
    }
    if (lp.status == LpStatus::Infeasible) {
      lb_report = std::max(lb_report, std::min(current_lb(), ub_value));
      emit(current_lb(), ub_value);
      continue;
    }

    const double bound = std::max(lp.objective, node.bound);
    if (bound >= ub_value - params.prune_slack) {
      lb_report = std::max(lb_report, std::min(current_lb(), ub_value));
      emit(current_lb(), ub_value);
      continue;
    }

    // Fractional binary closest to one half; ties to the lowest index.
    int branch_var = -1;
    double best_dist = kInf;
    for (int j : binary_vars) {
      const double v = lp.x[static_cast<size_t>(j)];
      const double frac = v - std::floor(v);
      if (frac > params.int_tol && frac < 1.0 - params.int_tol) {
        const double dist = std::fabs(frac - 0.5);
        if (dist < best_dist - 1e-15) {
          best_dist = dist;
          branch_var = j;
        }
      }
    }

    if (branch_var == -1) {
      // Integral within tolerance: candidate incumbent.
      if (lp.objective < ub_value - params.prune_slack) {
        ub_value = lp.objective;
        result.incumbent = lp.x;
        result.nodes_to_incumbent = nodes_explored;
        result.t_find_ms = elapsed_ms();
        if (nodes_explored == 1) result.root_integral = true;
      }
      lb_report = std::max(lb_report, std::min(current_lb(), ub_value));
      emit(current_lb(), ub_value);
      if (gap_closed()) break;
      continue;
    }

    for (double value : {0.0, 1.0}) {
      auto fixes = std::make_shared<FixChain>(
          FixChain{branch_var, value, node.fixes});
      open.push(Node{bound, seq++, std::move(fixes), basis});
    }
    lb_report = std::max(lb_report, std::min(current_lb(), ub_value));
    emit(current_lb(), ub_value);
    if (gap_closed()) break;
  }

  result.nodes_to_proof = nodes_explored;
  result.t_prove_ms = elapsed_ms();
  if (limit_hit) {
    result.status = BnbStatus::Limit;
    result.objective = ub_value;
    result.best_bound = current_lb();
  } else if (result.incumbent.empty()) {
    result.status = BnbStatus::Infeasible;
    result.objective = kInf;
    result.best_bound = kInf;
  } else {
    result.status = BnbStatus::Optimal;
    result.objective = ub_value;
    result.best_bound = gap_closed() && !open.empty() ? lb_report : ub_value;
    emit(result.best_bound, ub_value);
  }
  return result;
}

RootGap compute_root_gap(const BnbResult& result) {
  if (result.status != BnbStatus::Optimal) {
    throw SolveError("root gap requires a proven optimum");
  }
  const double optimum = result.objective;
  const double diff = std::fabs(optimum - result.root_bound);
  if (std::fabs(optimum) < 1e-12) {
    return RootGap{diff, true};
  }
  return RootGap{diff / std::fabs(optimum), false};
}

std::string trace_to_jsonl(const std::vector<TraceEvent>& trace) {
  std::string out;
  char buf[160];
  for (const auto& event : trace) {
    std::string lb = std::isfinite(event.lb)
                         ? (std::snprintf(buf, sizeof(buf), "%.12g", event.lb),
                            std::string(buf))
                         : "null";
    std::string ub = std::isfinite(event.ub)
                         ? (std::snprintf(buf, sizeof(buf), "%.12g", event.ub),
                            std::string(buf))
                         : "null";
    std::snprintf(buf, sizeof(buf), "{\"nodes\":%ld,\"lb\":%s,\"ub\":%s,\"t_ms\":%.3f}\n",
                  event.nodes, lb.c_str(), ub.c_str(), event.t_ms);
    out += buf;
  }
  return out;
}

}  // namespace stlflow
