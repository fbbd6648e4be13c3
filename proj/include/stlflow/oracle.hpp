#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stlflow/dynflow.hpp"
#include "stlflow/formula.hpp"
#include "stlflow/fragment.hpp"
#include "stlflow/logicflow.hpp"
#include "stlflow/model.hpp"

namespace stlflow {

/// One joint assignment of robots to paths through their time-expanded
/// graphs. `visits[robot]` lists the (site index, time) vertices touched in
/// order, starting with (initial, 0); with multi-step arcs the sequence can
/// skip slices while the robot is in transit.
struct JointPlan {
  std::vector<std::vector<std::pair<int, int>>> visits;
  double cost = 0.0;
};

/// Exhaustively enumerates joint plans, the Cartesian product of all
/// source-to-sink paths per robot. Refuses when the product exceeds `cap`;
/// the oracle is for tiny instances only.
std::vector<JointPlan> enumerate_plans(
    const std::vector<const TimeExpandedGraph*>& graphs, std::int64_t cap);

/// Minimum plan cost whose induced signal satisfies the grounded spec, or
/// nullopt when no plan does. `bindings` maps each atom to its robot index
/// within `graphs` (position, not id) and site.
std::optional<double> brute_force_optimum(
    const GroundedFormula& grounded,
    const std::map<std::string, std::pair<int, std::string>>& atom_to_robot_site,
    const std::vector<const TimeExpandedGraph*>& graphs, std::int64_t cap);

/// All z vectors (bit k of the returned masks = pi[k]) for which the tree
/// fragment is feasible with z fixed. The tree's interior variables are
/// continuous, so plain LP feasibility decides each z.
std::set<std::uint64_t> feasible_z_tree(
    const ConstraintFragment& fragment,
    const std::vector<std::pair<std::string, int>>& pi);

/// Same for the flow fragment. The unit y-flow makes integral y supports
/// exactly the source-target paths, so each z is checked by enumerating
/// paths of the graph and testing the residual LP with y fixed to the path.
std::set<std::uint64_t> feasible_z_flow(
    const Lnf& f, const ConstraintFragment& fragment,
    const std::vector<std::pair<std::string, int>>& pi);

/// Reference set from direct semantics: all z masks whose induced signal
/// satisfies the grounded formula.
std::set<std::uint64_t> satisfying_z_set(
    const GroundedFormula& g,
    const std::vector<std::pair<std::string, int>>& pi);

}  // namespace stlflow
