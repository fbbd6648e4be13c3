#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stlflow/formula.hpp"
#include "stlflow/fragment.hpp"

namespace stlflow {

/// AND/OR tree over timed predicate leaves. Leaf nodes are kept one per
/// literal occurrence, but all occurrences of the same (predicate, time)
/// share a single binary variable; negative polarity lives on the leaf and
/// is encoded as 1 - z. The root is always an internal node (a bare literal
/// is wrapped in a single-child AND).
struct LogicTree {
  enum class Combo { And, Or };

  struct Node {
    bool is_leaf = false;
    Combo combo = Combo::And;    // internal nodes
    std::vector<int> children;   // internal nodes
    TimedLiteral literal;        // leaves
    int pi_index = -1;           // leaves: index into `pi`
  };

  std::vector<Node> nodes;
  int root = -1;
  /// Unique positive timed predicates, sorted by (name, time). This is the
  /// shared binary variable vector of the encoding.
  std::vector<std::pair<std::string, int>> pi;

  const Node& at(int id) const { return nodes.at(static_cast<size_t>(id)); }
  int node_count() const { return static_cast<int>(nodes.size()); }
  int leaf_count() const;
  int internal_count() const;
  int pi_index_of(const std::string& predicate, int time) const;
};

LogicTree build_logic_tree(const GroundedFormula& g);

struct TreeEncodeOptions {
  /// Emit the root pinning row (root variable = 1). Disabled by tests that
  /// probe the feasible set without forcing satisfaction.
  bool pin_root = true;
};

/// Emits the mixed-binary constraints of the tree: per AND node with p
/// children, z <= z_i for each child and z >= 1 - p + sum z_i; per OR node
/// with q children, z >= z_i and z <= sum z_i. Internal variables are
/// continuous in [0,1]; leaf variables are binary. A negative leaf
/// contributes (1 - z) wherever its variable appears.
///
/// Families: "and_upper", "and_lower", "or_lower", "or_upper", "root".
ConstraintFragment encode_tree(const LogicTree& t,
                               const TreeEncodeOptions& options = {});

/// Name of the continuous variable attached to internal node `id`.
std::string lt_var_name(int id);

nlohmann::json tree_to_json(const LogicTree& t);

}  // namespace stlflow
