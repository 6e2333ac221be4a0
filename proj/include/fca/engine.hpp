#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "fca/cost_matrix.hpp"
#include "fca/errors.hpp"
#include "fca/model.hpp"

namespace fca {

// Ordered catchment thresholds with distance-decay weights. Thresholds and
// costs share a unit (meters for buffers, seconds for travel time). One ring
// with weight 1 is the classic dichotomous catchment; up to three rings with
// decaying weights is the enhanced form.
class RingScheme {
public:
  static RingScheme make(std::vector<double> thresholds, std::vector<double> weights) {
    if (thresholds.empty() || thresholds.size() > 3) {
      throw ContractError("RingScheme: 1 to 3 thresholds required, got " +
                          std::to_string(thresholds.size()));
    }
    if (weights.size() != thresholds.size()) {
      throw ContractError("RingScheme: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(thresholds.size()) + " thresholds");
    }
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      if (!std::isfinite(thresholds[i]) || thresholds[i] <= 0.0) {
        throw ContractError("RingScheme: thresholds must be positive and finite");
      }
      if (i > 0 && thresholds[i] <= thresholds[i - 1]) {
        throw ContractError("RingScheme: thresholds must be strictly ascending");
      }
      if (!std::isfinite(weights[i]) || weights[i] <= 0.0 || weights[i] > 1.0) {
        throw ContractError("RingScheme: weights must lie in (0, 1]");
      }
    }
    RingScheme scheme;
    scheme.thresholds_ = std::move(thresholds);
    scheme.weights_ = std::move(weights);
    return scheme;
  }

  static RingScheme single(double threshold) { return make({threshold}, {1.0}); }

  const std::vector<double>& thresholds() const { return thresholds_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t ring_count() const { return thresholds_.size(); }
  double max_threshold() const { return thresholds_.back(); }

private:
  std::vector<double> thresholds_;
  std::vector<double> weights_;
};

// Ring index (0-based) for a cost, or nullopt beyond the outermost threshold.
// Ring r covers (t_{r-1}, t_r]; the innermost ring starts closed at 0, so a
// cost exactly on a threshold belongs to the inner ring.
inline std::optional<std::size_t> assign_ring(double cost, const RingScheme& scheme) {
  if (!(cost >= 0.0) || !std::isfinite(cost)) {
    throw ContractError("assign_ring: cost must be finite and >= 0");
  }
  const auto& thresholds = scheme.thresholds();
  const auto it = std::lower_bound(thresholds.begin(), thresholds.end(), cost);
  if (it == thresholds.end()) return std::nullopt;
  return static_cast<std::size_t>(it - thresholds.begin());
}

// Distance-decay weights from a Gaussian over ring midpoints, normalized so
// the innermost ring carries weight 1. Strictly decreasing.
inline std::vector<double> gaussian_ring_weights(std::span<const double> thresholds,
                                                 double bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ContractError("gaussian_ring_weights: bandwidth must be > 0");
  }
  if (thresholds.empty()) {
    throw ContractError("gaussian_ring_weights: no thresholds");
  }
  std::vector<double> weights;
  weights.reserve(thresholds.size());
  const double first_mid = thresholds[0] / 2.0;
  double previous = 0.0;
  for (std::size_t r = 0; r < thresholds.size(); ++r) {
    if (!(thresholds[r] > previous)) {
      throw ContractError("gaussian_ring_weights: thresholds must be strictly ascending and > 0");
    }
    const double mid = (previous + thresholds[r]) / 2.0;
    weights.push_back(std::exp((first_mid * first_mid - mid * mid) / (2.0 * bandwidth * bandwidth)));
    previous = thresholds[r];
  }
  return weights;
}

// Step-1 output: one provider's supply-to-weighted-demand ratio.
struct ProviderRatio {
  std::string provider_id;
  double ratio = 0.0;
  double weighted_demand = 0.0;
  bool served = false;  // false iff no weighted demand fell in any ring
};

struct ZoneAccess {
  std::string zone_id;
  double final_index = 0.0;
  std::vector<double> ring_values;  // per-ring sums, before the per-capita scale
};

struct AccessResult {
  double per_capita = 1.0;
  std::size_t ring_count = 1;
  std::vector<ZoneAccess> zones;  // sorted by zone_id; every input zone appears

  const ZoneAccess* find(const std::string& zone_id) const {
    const auto it = std::lower_bound(
        zones.begin(), zones.end(), zone_id,
        [](const ZoneAccess& z, const std::string& id) { return z.zone_id < id; });
    return (it != zones.end() && it->zone_id == zone_id) ? &*it : nullptr;
  }
};

namespace detail {

struct EngineIndex {
  std::vector<std::size_t> providers_by_id;       // provider indices sorted by id
  std::vector<std::size_t> zones_by_id;           // zone indices sorted by id
  std::unordered_map<std::string, std::size_t> provider_slot;  // id -> rank in sorted order
  std::unordered_map<std::string, std::size_t> zone_slot;
  std::vector<std::uint32_t> entry_order;         // entries sorted (provider, zone)
};

inline EngineIndex make_engine_index(std::span<const ProviderSite> providers,
                                     std::span<const DemandZone> zones,
                                     const CostMatrix& costs) {
  EngineIndex index;
  index.providers_by_id.resize(providers.size());
  std::iota(index.providers_by_id.begin(), index.providers_by_id.end(), std::size_t{0});
  std::sort(index.providers_by_id.begin(), index.providers_by_id.end(),
            [&](std::size_t a, std::size_t b) { return providers[a].id < providers[b].id; });
  index.zones_by_id.resize(zones.size());
  std::iota(index.zones_by_id.begin(), index.zones_by_id.end(), std::size_t{0});
  std::sort(index.zones_by_id.begin(), index.zones_by_id.end(),
            [&](std::size_t a, std::size_t b) { return zones[a].id < zones[b].id; });

  for (std::size_t rank = 0; rank < index.providers_by_id.size(); ++rank) {
    index.provider_slot.emplace(providers[index.providers_by_id[rank]].id, rank);
  }
  for (std::size_t rank = 0; rank < index.zones_by_id.size(); ++rank) {
    const DemandZone& zone = zones[index.zones_by_id[rank]];
    index.zone_slot.emplace(zone.id, rank);
    if (!zone.demand) {
      throw ContractError("zone \"" + zone.id +
                          "\" has no demand value (age counts not yet weighted?)");
    }
  }
  for (const auto& entry : costs.entries) {
    if (!index.zone_slot.contains(entry.zone_id)) {
      throw ContractError("cost matrix references unknown zone \"" + entry.zone_id + "\"");
    }
    if (!index.provider_slot.contains(entry.provider_id)) {
      throw ContractError("cost matrix references unknown provider \"" + entry.provider_id +
                          "\"");
    }
  }
  index.entry_order.resize(costs.entries.size());
  std::iota(index.entry_order.begin(), index.entry_order.end(), std::uint32_t{0});
  std::sort(index.entry_order.begin(), index.entry_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              const CostEntry& ea = costs.entries[a];
              const CostEntry& eb = costs.entries[b];
              if (ea.provider_id != eb.provider_id) return ea.provider_id < eb.provider_id;
              return ea.zone_id < eb.zone_id;
            });
  return index;
}

// Weighted demand per provider, accumulated over entries sorted by
// (provider, zone) so results do not depend on input entry order.
inline std::vector<double> weighted_demand_by_provider(std::span<const ProviderSite> providers,
                                                       std::span<const DemandZone> zones,
                                                       const CostMatrix& costs,
                                                       const RingScheme& scheme,
                                                       const EngineIndex& index) {
  std::vector<double> weighted(providers.size(), 0.0);
  for (const std::uint32_t e : index.entry_order) {
    const CostEntry& entry = costs.entries[e];
    const auto ring = assign_ring(entry.cost, scheme);
    if (!ring) continue;
    const std::size_t provider_rank = index.provider_slot.at(entry.provider_id);
    const std::size_t zone_rank = index.zone_slot.at(entry.zone_id);
    const DemandZone& zone = zones[index.zones_by_id[zone_rank]];
    weighted[provider_rank] += *zone.demand * scheme.weights()[*ring];
  }
  return weighted;
}

}  // namespace detail

// Step 1: each provider's capacity divided by the decay-weighted demand
// inside its catchment. Providers whose catchment holds no weighted demand
// get ratio 0 and served = false instead of a division by zero.
inline std::vector<ProviderRatio> step1_ratios(std::span<const ProviderSite> providers,
                                               std::span<const DemandZone> zones,
                                               const CostMatrix& costs,
                                               const RingScheme& scheme) {
  const auto index = detail::make_engine_index(providers, zones, costs);
  const auto weighted = detail::weighted_demand_by_provider(providers, zones, costs, scheme, index);

  std::vector<ProviderRatio> ratios;
  ratios.reserve(providers.size());
  for (std::size_t rank = 0; rank < index.providers_by_id.size(); ++rank) {
    const ProviderSite& provider = providers[index.providers_by_id[rank]];
    ProviderRatio r;
    r.provider_id = provider.id;
    r.weighted_demand = weighted[rank];
    if (weighted[rank] > 0.0) {
      r.ratio = provider.capacity / weighted[rank];
      r.served = true;
    }
    ratios.push_back(std::move(r));
  }
  return ratios;
}

// Step 2 on top of step 1: per zone, the decay-weighted sum of reachable
// provider ratios, scaled by per_capita. Both steps share the one cost
// matrix and ring scheme. Accumulation runs in sorted-id order, so results
// are bit-identical regardless of input ordering or parallelism upstream.
inline AccessResult accessibility(std::span<const ProviderSite> providers,
                                  std::span<const DemandZone> zones, const CostMatrix& costs,
                                  const RingScheme& scheme, double per_capita = 1.0) {
  if (!(per_capita > 0.0) || !std::isfinite(per_capita)) {
    throw ContractError("accessibility: per_capita must be > 0");
  }
  const auto index = detail::make_engine_index(providers, zones, costs);
  const auto weighted = detail::weighted_demand_by_provider(providers, zones, costs, scheme, index);

  std::vector<double> ratio(providers.size(), 0.0);
  for (std::size_t rank = 0; rank < index.providers_by_id.size(); ++rank) {
    if (weighted[rank] > 0.0) {
      ratio[rank] = providers[index.providers_by_id[rank]].capacity / weighted[rank];
    }
  }

  AccessResult result;
  result.per_capita = per_capita;
  result.ring_count = scheme.ring_count();
  result.zones.reserve(zones.size());
  for (const std::size_t zone_index : index.zones_by_id) {
    ZoneAccess access;
    access.zone_id = zones[zone_index].id;
    access.ring_values.assign(scheme.ring_count(), 0.0);
    result.zones.push_back(std::move(access));
  }

  // Entries are visited in (zone, provider) order.
  std::vector<std::uint32_t> by_zone(costs.entries.size());
  std::iota(by_zone.begin(), by_zone.end(), std::uint32_t{0});
  std::sort(by_zone.begin(), by_zone.end(), [&](std::uint32_t a, std::uint32_t b) {
    const CostEntry& ea = costs.entries[a];
    const CostEntry& eb = costs.entries[b];
    if (ea.zone_id != eb.zone_id) return ea.zone_id < eb.zone_id;
    return ea.provider_id < eb.provider_id;
  });

  std::vector<double> sums(zones.size(), 0.0);
  for (const std::uint32_t e : by_zone) {
    const CostEntry& entry = costs.entries[e];
    const auto ring = assign_ring(entry.cost, scheme);
    if (!ring) continue;
    const std::size_t zone_rank = index.zone_slot.at(entry.zone_id);
    const std::size_t provider_rank = index.provider_slot.at(entry.provider_id);
    const double term = ratio[provider_rank] * scheme.weights()[*ring];
    sums[zone_rank] += term;
    result.zones[zone_rank].ring_values[*ring] += term;
  }
  for (std::size_t rank = 0; rank < result.zones.size(); ++rank) {
    result.zones[rank].final_index = per_capita * sums[rank];
  }
  return result;
}

}  // namespace fca
