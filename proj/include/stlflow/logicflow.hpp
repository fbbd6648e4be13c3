#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stlflow/fragment.hpp"
#include "stlflow/logictree.hpp"

namespace stlflow {

/// Source-target DAG whose edges carry signed timed-literal sets. A unit of
/// flow from source to target selects one edge per branch point; the literal
/// set of every traversed edge must hold.
struct Lnf {
  struct Edge {
    int tail = -1;
    int head = -1;
    std::vector<TimedLiteral> literals;
  };

  int num_vertices = 0;
  int source = 0;
  int target = -1;
  std::vector<Edge> edges;
  /// Shared with the originating tree: unique positive timed predicates,
  /// sorted by (name, time).
  std::vector<std::pair<std::string, int>> pi;

  std::vector<int> in_edges(int vertex) const;
  std::vector<int> out_edges(int vertex) const;
  int pi_index_of(const std::string& predicate, int time) const;
  /// Vertex ids in topological order; throws EncodeError on a cycle.
  std::vector<int> topological_order() const;
};

struct LnfBuildOptions {
  /// Keep the final dangling edge even when its literal set is empty,
  /// attaching it to a fresh target vertex. By default an empty trailing
  /// edge is elided and its tail vertex becomes the target, which matches
  /// the worked four-edge/three-vertex example this encoding is tested
  /// against.
  bool keep_trailing_edge = false;
};

/// Translates a logic tree into a logic network flow. Conjunctions thread
/// the current dangling edge through their children in order; a disjunction
/// with n children duplicates the dangling edge and its literal set n times,
/// recurses on each copy, then creates a merge vertex receiving all returned
/// edges and a fresh empty outgoing edge.
Lnf build_lnf(const LogicTree& t, const LnfBuildOptions& options = {});

struct LnfEncodeOptions {
  /// Emit sum(in-flow y) <= 1 per non-source vertex. The graph is acyclic by
  /// construction, so these rows are redundant and off by default.
  bool cycle_inequalities = false;
  /// Declare edge indicators y_e continuous in [0,1] instead of binary.
  bool relax_y = false;
  /// For every component that appears with negative polarity on some edge,
  /// emit w_e[i] <= y_e on every edge. Without these rows a predicate mass
  /// can bypass a negated edge through an inactive parallel edge, making the
  /// encoding accept assignments the formula rejects. Off reproduces the
  /// plain edge/conservation/source system exactly.
  bool negation_guards = true;
};

/// Emits the flow constraint system:
///   family "edge":       w_e[i] >= y_e per positive literal,
///                        1 - w_e[i] >= y_e per negative literal;
///   family "conserve_y": sum(in y) = sum(out y) per interior vertex;
///   family "conserve_w": same per component;
///   family "source_y":   sum(out-of-source y) = 1;
///   family "source_w":   sum(out-of-source w[i]) = z_i per component;
///   family "cycle":      optional in-flow caps;
///   family "neg_guard":  optional w_e[i] <= y_e rows (see options).
ConstraintFragment encode_lnf(const Lnf& f, const LnfEncodeOptions& options = {});

std::string y_var_name(int edge);
std::string w_var_name(int edge, int component);

nlohmann::json lnf_to_json(const Lnf& f);

}  // namespace stlflow
