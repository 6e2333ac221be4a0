#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fca/errors.hpp"
#include "fca/geo.hpp"
#include "fca/model.hpp"
#include "fca/polygon.hpp"
#include "fca/spatial_index.hpp"

namespace fca {

// Which way travel cost was measured. Both directions key entries the same
// way, (zone, provider); only the underlying path direction differs.
enum class Direction {
  DemandToProvider,
  ProviderToDemand,
};

inline std::string to_string(Direction d) {
  return d == Direction::DemandToProvider ? "demand-to-provider" : "provider-to-demand";
}

struct CostEntry {
  std::string zone_id;
  std::string provider_id;
  double cost = 0.0;  // seconds (network) or meters (buffer)

  friend bool operator==(const CostEntry& a, const CostEntry& b) {
    return a.zone_id == b.zone_id && a.provider_id == b.provider_id && a.cost == b.cost;
  }
};

// Sparse zone -> provider travel costs, truncated at a cutoff. Entries are
// kept sorted by (zone_id, provider_id) so every consumer iterates in one
// deterministic order.
struct CostMatrix {
  Direction direction = Direction::DemandToProvider;
  double cutoff = std::numeric_limits<double>::infinity();
  std::vector<CostEntry> entries;
  std::vector<std::string> unreached_zones;     // ids that failed snapping
  std::vector<std::string> unreached_providers;

  void canonicalize() {
    std::sort(entries.begin(), entries.end(), [](const CostEntry& a, const CostEntry& b) {
      if (a.zone_id != b.zone_id) return a.zone_id < b.zone_id;
      return a.provider_id < b.provider_id;
    });
    std::sort(unreached_zones.begin(), unreached_zones.end());
    std::sort(unreached_providers.begin(), unreached_providers.end());
  }

  std::optional<double> cost(const std::string& zone_id, const std::string& provider_id) const {
    const auto it = std::lower_bound(
        entries.begin(), entries.end(), std::pair(zone_id, provider_id),
        [](const CostEntry& e, const std::pair<std::string, std::string>& key) {
          if (e.zone_id != key.first) return e.zone_id < key.first;
          return e.provider_id < key.second;
        });
    if (it == entries.end() || it->zone_id != zone_id || it->provider_id != provider_id) {
      return std::nullopt;
    }
    return it->cost;
  }
};

inline void validate_cost_matrix(const CostMatrix& matrix) {
  for (const auto& e : matrix.entries) {
    if (!std::isfinite(e.cost) || e.cost < 0.0) {
      throw ValidationError("cost matrix entry (" + e.zone_id + ", " + e.provider_id +
                            "): cost must be finite and >= 0");
    }
    if (e.cost > matrix.cutoff) {
      throw ValidationError("cost matrix entry (" + e.zone_id + ", " + e.provider_id +
                            ") exceeds cutoff");
    }
  }
}

// Distance-buffer mobility: straight-line (or great-circle) distances from
// each zone's representative point to each provider, kept when <= radius.
inline CostMatrix buffer_cost_matrix(std::span<const ProviderSite> providers,
                                     std::span<const DemandZone> zones, double radius_m,
                                     DistanceMetric metric) {
  if (!(radius_m > 0.0)) {
    throw ContractError("buffer_cost_matrix: radius must be > 0");
  }
  std::vector<SpatialIndex::Entry> points;
  points.reserve(zones.size());
  for (const auto& zone : zones) {
    points.push_back({zone.id, representative_point(zone.geometry)});
  }
  const SpatialIndex index(std::move(points), metric);

  CostMatrix matrix;
  matrix.direction = Direction::DemandToProvider;
  matrix.cutoff = radius_m;
  for (const auto& provider : providers) {
    for (const auto& hit : index.radius_query(provider.location, radius_m)) {
      matrix.entries.push_back(CostEntry{hit.id, provider.id, hit.distance_m});
    }
  }
  matrix.canonicalize();
  return matrix;
}

}  // namespace fca
