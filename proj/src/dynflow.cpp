#include "stlflow/dynflow.hpp"

#include <set>

#include <nlohmann/json.hpp>

namespace stlflow {

int SiteGraph::site_index(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
    if (sites[static_cast<size_t>(i)].name == name) return i;
  }
  throw EncodeError("unknown site: " + name);
}

void SiteGraph::validate() const {
  std::set<std::string> names;
  for (const auto& site : sites) {
    if (site.name.empty()) throw EncodeError("site with empty name");
    if (!names.insert(site.name).second) {
      throw EncodeError("duplicate site name: " + site.name);
    }
  }
  for (const auto& arc : arcs) {
    if (arc.travel_slots < 1) {
      throw EncodeError("arc " + arc.from + "->" + arc.to +
                        " has travel_slots < 1");
    }
    site_index(arc.from);
    site_index(arc.to);
  }
}

SiteGraph site_graph_from_json(const nlohmann::json& j) {
  SiteGraph map;
  for (const auto& js : j.at("sites")) {
    SiteGraph::Site site;
    site.name = js.at("name").get<std::string>();
    if (js.contains("coords")) {
      site.coords = {{js["coords"][0].get<double>(),
                      js["coords"][1].get<double>()}};
    }
    map.sites.push_back(std::move(site));
  }
  for (const auto& ja : j.at("arcs")) {
    SiteGraph::Arc arc;
    arc.from = ja.at("from").get<std::string>();
    arc.to = ja.at("to").get<std::string>();
    arc.travel_slots = ja.value("k", 1);
    if (ja.contains("cost")) arc.cost = ja["cost"].get<double>();
    const bool both = ja.value("both", false);
    map.arcs.push_back(arc);
    if (both) {
      std::swap(arc.from, arc.to);
      map.arcs.push_back(std::move(arc));
    }
  }
  map.validate();
  return map;
}

int TimeExpandedGraph::site_index(const std::string& name) const {
  for (int i = 0; i < num_sites; ++i) {
    if (site_names[static_cast<size_t>(i)] == name) return i;
  }
  throw EncodeError("unknown site: " + name);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 over the combined word.
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

namespace {

// Deterministic uniform [0,1) draw independent of the standard library's
// distribution implementation.
class CostStream {
 public:
  explicit CostStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    state_ = mix_seed(state_, 0x5851f42d4c957f2dULL);
    return static_cast<double>(state_ >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace

TimeExpandedGraph build_dnf(const SiteGraph& map, int horizon,
                            const std::string& initial_site,
                            std::optional<std::uint64_t> seed,
                            std::string label) {
  map.validate();
  if (horizon < 1) {
    throw EncodeError("horizon must be at least 1");
  }
  const int initial = map.site_index(initial_site);

  TimeExpandedGraph g;
  g.label = std::move(label);
  g.num_sites = static_cast<int>(map.sites.size());
  g.horizon = horizon;
  for (const auto& site : map.sites) g.site_names.push_back(site.name);

  std::optional<CostStream> stream;
  if (seed) stream.emplace(*seed);
  auto draw = [&stream](double fixed) {
    return stream ? stream->next() : fixed;
  };

  // Super-source edge into the initial site at t = 0.
  g.edges.push_back({g.super_source(), g.base_vertex(initial, 0), 0.0,
                     TimeExpandedGraph::EdgeKind::Source});

  // Per slice: stay edges for every site, then movement edges per arc.
  for (int t = 0; t + 1 <= horizon - 1; ++t) {
    for (int s = 0; s < g.num_sites; ++s) {
      g.edges.push_back({g.base_vertex(s, t), g.base_vertex(s, t + 1),
                         draw(0.0), TimeExpandedGraph::EdgeKind::Stay});
    }
    for (const auto& arc : map.arcs) {
      if (t + arc.travel_slots > horizon - 1) continue;
      g.edges.push_back({g.base_vertex(map.site_index(arc.from), t),
                         g.base_vertex(map.site_index(arc.to),
                                       t + arc.travel_slots),
                         draw(arc.cost.value_or(0.0)),
                         TimeExpandedGraph::EdgeKind::Move});
    }
  }
  // Super-sink edges from every site at the last slice.
  for (int s = 0; s < g.num_sites; ++s) {
    g.edges.push_back({g.base_vertex(s, horizon - 1), g.super_sink(), 0.0,
                       TimeExpandedGraph::EdgeKind::Sink});
  }

  const int num_vertices = g.base_vertex_count() + 2;
  g.in_by_vertex.assign(static_cast<size_t>(num_vertices), {});
  g.out_by_vertex.assign(static_cast<size_t>(num_vertices), {});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    g.out_by_vertex[static_cast<size_t>(g.edges[static_cast<size_t>(e)].tail)]
        .push_back(e);
    g.in_by_vertex[static_cast<size_t>(g.edges[static_cast<size_t>(e)].head)]
        .push_back(e);
  }
  return g;
}

std::string r_var_name(const TimeExpandedGraph& g, int edge) {
  return g.label + "_e" + std::to_string(edge);
}

ConstraintFragment encode_dnf(const TimeExpandedGraph& g) {
  ConstraintFragment frag;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    frag.declare(r_var_name(g, e), 0.0, 1.0, VarKind::Continuous);
  }
  for (int v = 0; v < g.base_vertex_count(); ++v) {
    std::vector<std::pair<std::string, double>> terms;
    for (int e : g.in_edges(v)) terms.emplace_back(r_var_name(g, e), 1.0);
    for (int e : g.out_edges(v)) terms.emplace_back(r_var_name(g, e), -1.0);
    frag.add(std::move(terms), Rel::Eq, 0.0, "dnf_conserve");
  }
  std::vector<std::pair<std::string, double>> source_terms;
  for (int e : g.out_edges(g.super_source())) {
    source_terms.emplace_back(r_var_name(g, e), 1.0);
  }
  frag.add(std::move(source_terms), Rel::Eq, 1.0, "dnf_source");
  return frag;
}

std::vector<std::pair<std::string, double>> edge_cost_terms(
    const TimeExpandedGraph& g) {
  std::vector<std::pair<std::string, double>> terms;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const double c = g.edges[static_cast<size_t>(e)].cost;
    if (c != 0.0) terms.emplace_back(r_var_name(g, e), c);
  }
  return terms;
}

}  // namespace stlflow
