#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stlflow/errors.hpp"

namespace stlflow {

enum class VarKind { Continuous, Binary };

struct VarDef {
  std::string name;
  double lb = 0.0;
  double ub = 1.0;
  VarKind kind = VarKind::Continuous;

  bool operator==(const VarDef& other) const = default;
};

enum class Rel { Le, Eq, Ge };

/// One linear row: sum of terms `rel` rhs. Terms reference variables by
/// name; a name may be declared in another fragment of the same model.
/// `family` is an encoder-assigned group label used by golden tests and
/// debug dumps.
struct LinearConstraint {
  std::vector<std::pair<std::string, double>> terms;
  Rel rel = Rel::Eq;
  double rhs = 0.0;
  std::string family;
};

/// A bundle of variable declarations and constraints emitted by one encoder.
struct ConstraintFragment {
  std::vector<VarDef> vars;
  std::vector<LinearConstraint> constraints;

  void declare(std::string name, double lb, double ub, VarKind kind) {
    vars.push_back(VarDef{std::move(name), lb, ub, kind});
  }

  void add(std::vector<std::pair<std::string, double>> terms, Rel rel,
           double rhs, std::string family) {
    constraints.push_back(
        LinearConstraint{std::move(terms), rel, rhs, std::move(family)});
  }

  std::vector<const LinearConstraint*> family_rows(
      const std::string& family) const {
    std::vector<const LinearConstraint*> rows;
    for (const auto& c : constraints) {
      if (c.family == family) rows.push_back(&c);
    }
    return rows;
  }
};

/// Canonical name of the binary variable for a positive timed predicate.
inline std::string z_var_name(const std::string& predicate, int time) {
  return "z_" + predicate + "_t" + std::to_string(time);
}

}  // namespace stlflow
