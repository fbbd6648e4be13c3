#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlflow/errors.hpp"

namespace stlflow {

/// Closed integer timestep window [lo, hi] attached to a temporal operator.
struct TimeInterval {
  int lo = 0;
  int hi = 0;

  TimeInterval() = default;
  TimeInterval(int lo_in, int hi_in) : lo(lo_in), hi(hi_in) {
    if (lo < 0 || hi < lo) {
      throw SemanticError("malformed interval [" + std::to_string(lo) + "," +
                          std::to_string(hi) + "]: need 0 <= lo <= hi");
    }
  }

  bool operator==(const TimeInterval& other) const = default;
};

/// A named linear predicate a'x + b >= 0 over the scenario state space.
/// The coefficients are scenario metadata; the encodings only use the name.
struct PredicateDef {
  std::string name;
  std::vector<double> a;
  double b = 0.0;
};

/// Checks dimensions and name uniqueness of a predicate table.
void validate_predicate_table(const std::vector<PredicateDef>& table,
                              int state_dim);

/// A predicate instantiated at a concrete timestep, with polarity.
struct TimedLiteral {
  std::string predicate;
  int time = 0;
  bool positive = true;

  bool operator==(const TimedLiteral& other) const = default;
  auto operator<=>(const TimedLiteral& other) const = default;
};

/// Immutable STL abstract syntax tree. Conjunction/disjunction nodes are
/// n-ary; nested same-kind nodes are flattened on construction, so
/// And(And(a,b),c) and And(a,b,c) are the same value.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or, Eventually, Always, Until };

  static Formula atom(std::string name);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula eventually(TimeInterval window, Formula f);
  static Formula always(TimeInterval window, Formula f);
  static Formula until(TimeInterval window, Formula lhs, Formula rhs);

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->atom; }
  const TimeInterval& window() const { return node_->window; }
  const std::vector<Formula>& children() const { return node_->children; }

  /// Structural equality on the flattened form.
  bool operator==(const Formula& other) const;

 private:
  struct Node {
    Kind kind;
    std::string atom;
    TimeInterval window;
    std::vector<Formula> children;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Parses the STL text grammar:
///
///   formula := atom
///            | "!" formula
///            | "(" formula ")"
///            | "(" formula op formula { op formula } ")"   (single op per group)
///            | "F[" int "," int "]" formula
///            | "G[" int "," int "]" formula
///            | "(" formula "U[" int "," int "]" formula ")"
///   op      := "&" | "|"
///
/// Every atom must appear in `predicate_table`. Whitespace is insignificant.
Formula parse_stl(const std::string& text,
                  const std::set<std::string>& predicate_table);

/// Prints a formula in the grammar above; parse_stl(to_string(f)) == f.
std::string to_string(const Formula& f);

/// Negation normal form: pushes Not down so it wraps only atoms. Rejects
/// negation over Until (the semantics table defines no dual for it).
Formula to_nnf(const Formula& f);

/// Pure AND/OR tree over timed literals, produced by grounding. Nodes are
/// stored in a flat vector; children refer to nodes by index.
struct GroundedFormula {
  enum class Kind { Literal, And, Or };

  struct Node {
    Kind kind = Kind::Literal;
    TimedLiteral literal;       // valid when kind == Literal
    std::vector<int> children;  // valid otherwise; nonempty, size >= 2
  };

  std::vector<Node> nodes;
  int root = -1;

  const Node& at(int id) const { return nodes.at(static_cast<size_t>(id)); }
  /// Number of literal leaves, counting repeated occurrences.
  int literal_count() const;
  /// Unique positive (predicate, time) pairs over all leaves, sorted.
  std::vector<std::pair<std::string, int>> unique_timed_predicates() const;
};

/// Expands temporal operators over the finite horizon, starting at t0.
/// Requires `f` in NNF. Eventually becomes a disjunction over its window,
/// Always a conjunction, and Until a disjunction over the witness time of
/// the right operand conjoined with the left operand on every step from the
/// window start up to the witness. Throws SemanticError when an operator
/// window reaches past `horizon`.
GroundedFormula ground(const Formula& f, int t0, int horizon);

/// Truth assignment for positive timed predicates.
using SignalMap = std::map<std::pair<std::string, int>, bool>;

/// Evaluates the grounded tree; negative literals read the complement.
/// The callback form receives the positive (predicate, time) query.
bool evaluate(const GroundedFormula& g,
              const std::function<bool(const std::string&, int)>& truth);

/// Map form; throws SemanticError when a literal is missing from the signal.
bool evaluate(const GroundedFormula& g, const SignalMap& signal);

}  // namespace stlflow
