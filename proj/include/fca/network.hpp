#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fca/cost_matrix.hpp"
#include "fca/errors.hpp"
#include "fca/geo.hpp"
#include "fca/model.hpp"
#include "fca/polygon.hpp"
#include "fca/spatial_index.hpp"

namespace fca {

inline constexpr double kDefaultSnapToleranceMeters = 500.0;

struct RoadEdge {
  std::string from_id;
  std::string to_id;
  double cost_s = 0.0;
  bool bidirectional = true;
};

// Directed road graph. Nodes are sorted by id at build time; bidirectional
// edges are expanded into two arcs. Immutable after build.
class RoadNetwork {
public:
  struct Arc {
    std::uint32_t to = 0;
    double cost_s = 0.0;
  };

  static RoadNetwork build(std::vector<std::pair<std::string, GeoPoint>> nodes,
                           std::span<const RoadEdge> edges) {
    RoadNetwork net;
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (i > 0 && nodes[i].first == nodes[i - 1].first) {
        throw ValidationError("road network: duplicate node id \"" + nodes[i].first + "\"");
      }
      validate_point(nodes[i].second, "road node \"" + nodes[i].first + "\"");
      if (i > 0 && nodes[i].second.crs != nodes[0].second.crs) {
        throw ValidationError("road network: mixed CRS between nodes");
      }
    }
    net.ids_.reserve(nodes.size());
    net.locations_.reserve(nodes.size());
    for (auto& [id, location] : nodes) {
      net.ids_.push_back(std::move(id));
      net.locations_.push_back(location);
    }

    std::vector<std::pair<std::uint32_t, Arc>> arcs;
    arcs.reserve(edges.size() * 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const RoadEdge& e = edges[i];
      if (!std::isfinite(e.cost_s) || e.cost_s <= 0.0) {
        throw ValidationError("road edge " + std::to_string(i) + " (" + e.from_id + " -> " +
                              e.to_id + "): cost_s must be finite and > 0");
      }
      const auto from = net.find_node(e.from_id);
      const auto to = net.find_node(e.to_id);
      if (!from || !to) {
        throw ValidationError("road edge " + std::to_string(i) + ": endpoint \"" +
                              (from ? e.to_id : e.from_id) + "\" is not a known node");
      }
      arcs.emplace_back(*from, Arc{static_cast<std::uint32_t>(*to), e.cost_s});
      if (e.bidirectional) {
        arcs.emplace_back(*to, Arc{static_cast<std::uint32_t>(*from), e.cost_s});
      }
    }
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      if (a.second.to != b.second.to) return a.second.to < b.second.to;
      return a.second.cost_s < b.second.cost_s;
    });
    net.arc_offsets_.assign(net.ids_.size() + 1, 0);
    net.arcs_.reserve(arcs.size());
    for (const auto& [from, arc] : arcs) {
      ++net.arc_offsets_[from + 1];
      net.arcs_.push_back(arc);
    }
    for (std::size_t i = 1; i < net.arc_offsets_.size(); ++i) {
      net.arc_offsets_[i] += net.arc_offsets_[i - 1];
    }
    return net;
  }

  std::size_t node_count() const { return ids_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  bool empty() const { return ids_.empty(); }
  Crs crs() const { return ids_.empty() ? Crs::LonLatDegrees : locations_[0].crs; }

  const std::string& node_id(std::size_t index) const { return ids_[index]; }
  const GeoPoint& node_location(std::size_t index) const { return locations_[index]; }

  std::optional<std::uint32_t> find_node(const std::string& id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::uint32_t>(it - ids_.begin());
  }

  std::span<const Arc> arcs_from(std::uint32_t node) const {
    return {arcs_.data() + arc_offsets_[node], arc_offsets_[node + 1] - arc_offsets_[node]};
  }

  // Dijkstra from `origin`, pruned at `cutoff_s`. Fills `dist` (sized to the
  // node count, infinity = unreached) and appends every reached node index
  // to `reached`. Exposed for reuse by the matrix builder.
  void shortest_paths(std::uint32_t origin, double cutoff_s, std::vector<double>& dist,
                      std::vector<std::uint32_t>& reached) const {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    for (const std::uint32_t n : reached) dist[n] = kInf;
    reached.clear();
    dist.resize(ids_.size(), kInf);

    using QueueItem = std::pair<double, std::uint32_t>;
    std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>> queue;
    dist[origin] = 0.0;
    reached.push_back(origin);
    queue.emplace(0.0, origin);
    while (!queue.empty()) {
      const auto [d, node] = queue.top();
      queue.pop();
      if (d > dist[node]) continue;  // stale entry
      for (const Arc& arc : arcs_from(node)) {
        const double nd = d + arc.cost_s;
        if (nd > cutoff_s) continue;
        if (nd < dist[arc.to]) {
          if (dist[arc.to] == kInf) reached.push_back(arc.to);
          dist[arc.to] = nd;
          queue.emplace(nd, arc.to);
        }
      }
    }
  }

private:
  std::vector<std::string> ids_;        // sorted
  std::vector<GeoPoint> locations_;     // parallel to ids_
  std::vector<std::uint32_t> arc_offsets_;
  std::vector<Arc> arcs_;
};

// Exact shortest-path cost to every node within `cutoff_s` of `origin_id`.
// The origin itself appears with cost 0; nodes beyond the cutoff are absent.
inline std::map<std::string, double> shortest_path_times(const RoadNetwork& network,
                                                         const std::string& origin_id,
                                                         double cutoff_s) {
  if (!(cutoff_s > 0.0)) {
    throw ContractError("shortest_path_times: cutoff must be > 0");
  }
  const auto origin = network.find_node(origin_id);
  if (!origin) {
    throw ContractError("shortest_path_times: unknown origin node \"" + origin_id + "\"");
  }
  std::vector<double> dist;
  std::vector<std::uint32_t> reached;
  network.shortest_paths(*origin, cutoff_s, dist, reached);
  std::map<std::string, double> times;
  for (const std::uint32_t node : reached) {
    times.emplace(network.node_id(node), dist[node]);
  }
  return times;
}

struct Snap {
  std::string node_id;
  double distance_m = 0.0;
};

// Site-id -> snapped node, for sites that landed within tolerance.
using SnapResult = std::map<std::string, Snap>;

// Nearest network node by the CRS-implied metric; exact distance ties go to
// the smallest node id. Throws SnapError (carrying the distance found) when
// the nearest node is farther than `tolerance_m`.
inline Snap snap(const GeoPoint& point, const RoadNetwork& network, double tolerance_m) {
  if (!(tolerance_m > 0.0)) {
    throw ContractError("snap: tolerance must be > 0");
  }
  if (network.empty()) {
    throw ContractError("snap: empty road network");
  }
  const DistanceMetric metric = metric_for(network.crs());
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < network.node_count(); ++i) {
    const double d = distance(point, network.node_location(i), metric);
    if (d < best) {  // ids are sorted, so strict < keeps the smallest id on ties
      best = d;
      best_index = i;
    }
  }
  if (best > tolerance_m) {
    throw SnapError("snap: nearest node \"" + network.node_id(best_index) + "\" is " +
                        std::to_string(best) + " m away (tolerance " +
                        std::to_string(tolerance_m) + " m)",
                    best);
  }
  return Snap{network.node_id(best_index), best};
}

namespace detail {

struct SnappedSites {
  // Parallel arrays over the sites that snapped, sorted by site id.
  std::vector<std::string> ids;
  std::vector<std::uint32_t> nodes;
  std::vector<std::string> failed;  // sorted site ids
};

inline SnappedSites snap_all(const std::vector<std::pair<std::string, GeoPoint>>& sites,
                             const RoadNetwork& network, const SpatialIndex& node_index,
                             double tolerance_m) {
  SnappedSites out;
  for (const auto& [id, point] : sites) {
    const auto hit = node_index.nearest(point);
    if (hit && hit->distance_m <= tolerance_m) {
      out.ids.push_back(id);
      out.nodes.push_back(*network.find_node(hit->id));
    } else {
      out.failed.push_back(id);
    }
  }
  return out;
}

}  // namespace detail

// Sparse travel-time matrix between zones and providers over the road graph.
//
// Sites snap to their nearest node within `tolerance_m`; sites that fail are
// excluded and reported in unreached_zones / unreached_providers. Costs are
// snapped-node to snapped-node shortest paths, kept when <= cutoff_s.
// DemandToProvider measures zone -> provider travel; ProviderToDemand runs
// the searches from the provider side instead, which is the same as
// reversing every edge. Results are assembled in sorted id order and do not
// depend on `threads`.
inline CostMatrix build_cost_matrix(const RoadNetwork& network, std::span<const DemandZone> zones,
                                    std::span<const ProviderSite> providers, double cutoff_s,
                                    Direction direction = Direction::DemandToProvider,
                                    double tolerance_m = kDefaultSnapToleranceMeters,
                                    unsigned threads = 1) {
  if (network.empty()) {
    throw ContractError("build_cost_matrix: empty road network");
  }
  if (!(cutoff_s > 0.0)) {
    throw ContractError("build_cost_matrix: cutoff must be > 0");
  }
  if (!(tolerance_m > 0.0)) {
    throw ContractError("build_cost_matrix: tolerance must be > 0");
  }

  std::vector<SpatialIndex::Entry> node_entries;
  node_entries.reserve(network.node_count());
  for (std::size_t i = 0; i < network.node_count(); ++i) {
    node_entries.push_back({network.node_id(i), network.node_location(i)});
  }
  const SpatialIndex node_index(std::move(node_entries), metric_for(network.crs()));

  std::vector<std::pair<std::string, GeoPoint>> zone_sites, provider_sites;
  zone_sites.reserve(zones.size());
  for (const auto& zone : zones) {
    zone_sites.emplace_back(zone.id, representative_point(zone.geometry));
  }
  provider_sites.reserve(providers.size());
  for (const auto& p : providers) {
    provider_sites.emplace_back(p.id, p.location);
  }
  std::sort(zone_sites.begin(), zone_sites.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(provider_sites.begin(), provider_sites.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  const auto snapped_zones = detail::snap_all(zone_sites, network, node_index, tolerance_m);
  const auto snapped_providers = detail::snap_all(provider_sites, network, node_index, tolerance_m);

  // Searches start from the travel side named by `direction`; the other side
  // is read off each result.
  const auto& origin_side = direction == Direction::DemandToProvider ? snapped_zones
                                                                     : snapped_providers;
  const auto& target_side = direction == Direction::DemandToProvider ? snapped_providers
                                                                     : snapped_zones;

  std::vector<std::uint32_t> origin_nodes(origin_side.nodes);
  std::sort(origin_nodes.begin(), origin_nodes.end());
  origin_nodes.erase(std::unique(origin_nodes.begin(), origin_nodes.end()), origin_nodes.end());

  std::vector<std::uint32_t> target_nodes(target_side.nodes);
  std::sort(target_nodes.begin(), target_nodes.end());
  target_nodes.erase(std::unique(target_nodes.begin(), target_nodes.end()), target_nodes.end());

  // target_costs[origin slot][target slot]; infinity = beyond cutoff.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> target_costs(origin_nodes.size());

  const unsigned worker_count =
      std::max(1u, std::min<unsigned>(threads == 0 ? 1 : threads,
                                      static_cast<unsigned>(std::max<std::size_t>(
                                          origin_nodes.size(), 1))));
  std::atomic<std::size_t> next_origin{0};
  auto work = [&]() {
    std::vector<double> dist;
    std::vector<std::uint32_t> reached;
    for (;;) {
      const std::size_t slot = next_origin.fetch_add(1);
      if (slot >= origin_nodes.size()) break;
      network.shortest_paths(origin_nodes[slot], cutoff_s, dist, reached);
      std::vector<double>& row = target_costs[slot];
      row.resize(target_nodes.size(), kInf);
      for (std::size_t t = 0; t < target_nodes.size(); ++t) {
        const double d = dist[target_nodes[t]];
        if (d <= cutoff_s) row[t] = d;
      }
    }
  };
  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) workers.emplace_back(work);
    for (auto& worker : workers) worker.join();
  }

  const auto origin_slot = [&](std::uint32_t node) {
    return static_cast<std::size_t>(
        std::lower_bound(origin_nodes.begin(), origin_nodes.end(), node) - origin_nodes.begin());
  };
  const auto target_slot = [&](std::uint32_t node) {
    return static_cast<std::size_t>(
        std::lower_bound(target_nodes.begin(), target_nodes.end(), node) - target_nodes.begin());
  };

  CostMatrix matrix;
  matrix.direction = direction;
  matrix.cutoff = cutoff_s;
  matrix.unreached_zones = snapped_zones.failed;
  matrix.unreached_providers = snapped_providers.failed;

  // Zone-major assembly in sorted id order gives the canonical entry order
  // directly, whichever side the searches ran from.
  for (std::size_t z = 0; z < snapped_zones.ids.size(); ++z) {
    for (std::size_t p = 0; p < snapped_providers.ids.size(); ++p) {
      const double cost =
          direction == Direction::DemandToProvider
              ? target_costs[origin_slot(snapped_zones.nodes[z])][target_slot(
                    snapped_providers.nodes[p])]
              : target_costs[origin_slot(snapped_providers.nodes[p])][target_slot(
                    snapped_zones.nodes[z])];
      if (cost <= cutoff_s) {
        matrix.entries.push_back(
            CostEntry{snapped_zones.ids[z], snapped_providers.ids[p], cost});
      }
    }
  }
  return matrix;
}

}  // namespace fca
