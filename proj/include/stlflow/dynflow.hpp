#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stlflow/fragment.hpp"

namespace stlflow {

/// Static site map: named points and directed travel arcs between them.
/// An arc with travel_slots = K takes K timesteps to traverse. Costs are
/// either fixed per arc or drawn per time-expanded edge from a seed.
struct SiteGraph {
  struct Site {
    std::string name;
    std::optional<std::array<double, 2>> coords;
  };
  struct Arc {
    std::string from;
    std::string to;
    int travel_slots = 1;
    std::optional<double> cost;
  };

  std::vector<Site> sites;
  std::vector<Arc> arcs;

  int site_index(const std::string& name) const;
  void validate() const;
};

/// Parses {"sites":[{"name",...}], "arcs":[{"from","to","k","both"?,"cost"?}]}.
/// Arcs with "both": true expand into both directions.
SiteGraph site_graph_from_json(const nlohmann::json& j);

/// Per-robot time-expanded flow graph. Base vertices are (site, t) for
/// t in [0, N); a super-source feeds the initial site at t = 0 and a
/// super-sink drains every site at t = N-1 through zero-cost edges.
struct TimeExpandedGraph {
  enum class EdgeKind { Source, Stay, Move, Sink };

  struct Edge {
    int tail = -1;
    int head = -1;
    double cost = 0.0;
    EdgeKind kind = EdgeKind::Stay;
  };

  std::string label;  // variable prefix, unique per robot
  int num_sites = 0;
  int horizon = 0;  // N
  std::vector<std::string> site_names;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> in_by_vertex;
  std::vector<std::vector<int>> out_by_vertex;

  int base_vertex_count() const { return num_sites * horizon; }
  int base_vertex(int site, int t) const { return t * num_sites + site; }
  int super_source() const { return base_vertex_count(); }
  int super_sink() const { return base_vertex_count() + 1; }
  int site_of(int base_vertex) const { return base_vertex % num_sites; }
  int time_of(int base_vertex) const { return base_vertex / num_sites; }
  int site_index(const std::string& name) const;

  const std::vector<int>& in_edges(int vertex) const {
    return in_by_vertex.at(static_cast<size_t>(vertex));
  }
  const std::vector<int>& out_edges(int vertex) const {
    return out_by_vertex.at(static_cast<size_t>(vertex));
  }
};

/// Builds the time-expanded graph. When `seed` is set, every stay/move edge
/// cost is drawn uniformly from [0,1) in construction order with a
/// deterministic generator; otherwise move edges use the arc's fixed cost
/// (default 0) and stay edges cost 0. Super-source/sink edges always cost 0.
TimeExpandedGraph build_dnf(const SiteGraph& map, int horizon,
                            const std::string& initial_site,
                            std::optional<std::uint64_t> seed,
                            std::string label = "d0");

/// Flow variable name for edge `e` of graph `g`.
std::string r_var_name(const TimeExpandedGraph& g, int edge);

/// Conservation at every base vertex plus the unit in-flow at the
/// super-source. Families: "dnf_conserve", "dnf_source".
ConstraintFragment encode_dnf(const TimeExpandedGraph& g);

/// Objective contribution sum(c_e * r_e) of this graph.
std::vector<std::pair<std::string, double>> edge_cost_terms(
    const TimeExpandedGraph& g);

/// Deterministic stream mix for per-robot cost draws.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace stlflow
