#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stlflow/dynflow.hpp"
#include "stlflow/fragment.hpp"

namespace stlflow {

/// Resolution of a robot-indexed atom to the robot's map location.
struct AtomBinding {
  int robot_id = 0;
  std::string site;
};

/// Mixed-binary linear program in indexed form. Variables and constraints
/// keep the declaration order of the fragments they came from, so identical
/// inputs produce identical models.
class MblpModel {
 public:
  struct Var {
    std::string name;
    double lb = 0.0;
    double ub = 1.0;
    VarKind kind = VarKind::Continuous;
  };
  struct Row {
    std::vector<std::pair<int, double>> terms;  // (variable index, coef)
    Rel rel = Rel::Eq;
    double rhs = 0.0;
    std::string family;
  };

  int add_variable(const VarDef& def);
  void add_row(const LinearConstraint& c);
  void set_objective_term(const std::string& name, double coef);

  int var_index(const std::string& name) const;
  bool has_var(const std::string& name) const;
  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<Var>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }

  double objective_value(const std::vector<double>& x) const;

 private:
  std::vector<Var> vars_;
  std::vector<Row> rows_;
  std::vector<double> objective_;
  std::unordered_map<std::string, int> index_;
};

/// Ties each timed predicate to the in-flow of its robot's map vertex:
/// z = sum of in-edge flows of vertex (site, t). Valid as an equality
/// because per-robot in-flow never exceeds one unit. Family: "couple".
ConstraintFragment couple_predicates(
    const std::vector<std::pair<std::string, int>>& pi,
    const std::map<std::string, AtomBinding>& bindings,
    const std::map<int, const TimeExpandedGraph*>& graphs);

/// Fuses the specification fragment, the per-robot dynamics fragments, and
/// the coupling into one model with the given objective. Identical duplicate
/// declarations (the shared z vector) merge; conflicting ones throw.
MblpModel assemble(const ConstraintFragment& spec_fragment,
                   const std::vector<ConstraintFragment>& dyn_fragments,
                   const ConstraintFragment& coupling,
                   const std::vector<std::pair<std::string, double>>& objective);

/// Standard LP-format text: objective, constraint rows, bounds, binaries.
/// Deterministic variable ordering (model order).
std::string export_lp(const MblpModel& m);

struct ModelStats {
  int n_binary = 0;
  int n_continuous = 0;
  int n_constraints = 0;
  /// Binary count excluding edge indicators (names starting with "y"),
  /// i.e. the shared predicate vector alone.
  int n_binary_z = 0;
};

ModelStats model_stats(const MblpModel& m);
nlohmann::json stats_to_json(const ModelStats& s);

}  // namespace stlflow
