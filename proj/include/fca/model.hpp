#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fca/errors.hpp"
#include "fca/geo.hpp"
#include "fca/polygon.hpp"

namespace fca {

// A supply point: one facility with a capacity (providers, machines, beds).
struct ProviderSite {
  std::string id;
  GeoPoint location;
  double capacity = 0.0;

  friend bool operator==(const ProviderSite& a, const ProviderSite& b) {
    return a.id == b.id && a.location == b.location && a.capacity == b.capacity;
  }
};

// A demand area (or point). `demand` stays unset when the zone was loaded
// with age-band counts and still awaits weighting.
struct DemandZone {
  std::string id;
  ZoneGeometry geometry;
  std::optional<double> demand;
  std::vector<double> age_counts;          // ordered as the declared band fields
  nlohmann::ordered_json properties;       // original feature properties, passed through

  friend bool operator==(const DemandZone& a, const DemandZone& b) {
    return a.id == b.id && a.geometry == b.geometry && a.demand == b.demand &&
           a.age_counts == b.age_counts;
  }
};

namespace detail {

inline void check_unique_ids(std::span<const std::string> ids, const std::string& what,
                             std::vector<std::string>& problems) {
  std::map<std::string, int> seen;
  for (const auto& id : ids) ++seen[id];
  for (const auto& [id, count] : seen) {
    if (count > 1) {
      problems.push_back(what + ": duplicate id \"" + id + "\" appears " +
                         std::to_string(count) + " times");
    }
  }
}

}  // namespace detail

// All-or-nothing: throws ValidationError listing every violation.
inline void validate_providers(std::span<const ProviderSite> sites) {
  std::vector<std::string> problems;
  std::vector<std::string> ids;
  ids.reserve(sites.size());
  for (const auto& site : sites) {
    ids.push_back(site.id);
    if (site.id.empty()) problems.push_back("provider: empty id");
    if (!(site.capacity >= 0.0) || !std::isfinite(site.capacity)) {
      problems.push_back("provider \"" + site.id + "\": capacity must be finite and >= 0");
    }
    try {
      validate_point(site.location, "provider \"" + site.id + "\"");
    } catch (const ContractError& e) {
      problems.emplace_back(e.what());
    }
  }
  detail::check_unique_ids(ids, "provider", problems);
  if (!problems.empty()) {
    std::string message = "provider validation failed:";
    for (const auto& p : problems) message += "\n  " + p;
    throw ValidationError(message);
  }
}

inline void validate_zones(std::span<const DemandZone> zones) {
  std::vector<std::string> problems;
  std::vector<std::string> ids;
  ids.reserve(zones.size());
  for (const auto& zone : zones) {
    ids.push_back(zone.id);
    if (zone.id.empty()) problems.push_back("zone: empty id");
    if (zone.demand && (!(*zone.demand >= 0.0) || !std::isfinite(*zone.demand))) {
      problems.push_back("zone \"" + zone.id + "\": demand must be finite and >= 0");
    }
    for (double count : zone.age_counts) {
      if (!(count >= 0.0) || !std::isfinite(count)) {
        problems.push_back("zone \"" + zone.id + "\": age count must be finite and >= 0");
        break;
      }
    }
    if (zone.geometry.is_point()) {
      const auto& p = std::get<std::array<double, 2>>(zone.geometry.shape);
      try {
        validate_point(GeoPoint{p[0], p[1], zone.geometry.crs}, "zone \"" + zone.id + "\"");
      } catch (const ContractError& e) {
        problems.emplace_back(e.what());
      }
    } else {
      try {
        validate_rings(std::get<std::vector<Polygon>>(zone.geometry.shape),
                       "zone \"" + zone.id + "\"");
      } catch (const GeometryError& e) {
        problems.emplace_back(e.what());
      }
    }
  }
  detail::check_unique_ids(ids, "zone", problems);
  if (!problems.empty()) {
    std::string message = "zone validation failed:";
    for (const auto& p : problems) message += "\n  " + p;
    throw ValidationError(message);
  }
}

}  // namespace fca
