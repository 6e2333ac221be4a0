#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fca/errors.hpp"

namespace fca {

// Mean Earth radius. All geodesic math in the library is spherical.
inline constexpr double kEarthRadiusMeters = 6'371'000.0;

inline constexpr double kMetersPerMile = 1'609.344;
inline constexpr double kMetersPerKilometer = 1'000.0;
inline constexpr double kSecondsPerMinute = 60.0;

inline constexpr double miles_to_meters(double miles) { return miles * kMetersPerMile; }
inline constexpr double kilometers_to_meters(double km) { return km * kMetersPerKilometer; }
inline constexpr double minutes_to_seconds(double minutes) { return minutes * kSecondsPerMinute; }

enum class Crs {
  LonLatDegrees,  // x = longitude, y = latitude
  PlanarMeters,   // projected coordinates, meters on both axes
};

inline std::string to_string(Crs crs) {
  return crs == Crs::LonLatDegrees ? "lonlat-degrees" : "planar-meters";
}

struct GeoPoint {
  double x = 0.0;
  double y = 0.0;
  Crs crs = Crs::LonLatDegrees;

  friend bool operator==(const GeoPoint& a, const GeoPoint& b) {
    return a.x == b.x && a.y == b.y && a.crs == b.crs;
  }
};

// Throws ContractError unless the point is finite and, for lonlat, inside
// [-180,180] x [-90,90].
inline void validate_point(const GeoPoint& p, const std::string& context) {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
    throw ContractError(context + ": non-finite coordinates");
  }
  if (p.crs == Crs::LonLatDegrees) {
    if (p.x < -180.0 || p.x > 180.0 || p.y < -90.0 || p.y > 90.0) {
      throw ContractError(context + ": lonlat coordinates out of range (" +
                          std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
    }
  }
}

enum class DistanceMetric {
  EuclideanPlanar,
  HaversineGeodesic,
};

inline std::string to_string(DistanceMetric m) {
  return m == DistanceMetric::EuclideanPlanar ? "euclidean-planar" : "haversine-geodesic";
}

// The metric a CRS implies. Planar coordinates get straight-line distance,
// geographic coordinates get great-circle distance.
inline DistanceMetric metric_for(Crs crs) {
  return crs == Crs::PlanarMeters ? DistanceMetric::EuclideanPlanar
                                  : DistanceMetric::HaversineGeodesic;
}

inline Crs crs_for(DistanceMetric metric) {
  return metric == DistanceMetric::EuclideanPlanar ? Crs::PlanarMeters : Crs::LonLatDegrees;
}

namespace detail {

inline double degrees_to_radians(double deg) { return deg * (std::numbers::pi / 180.0); }

inline double haversine_meters(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = degrees_to_radians(a.y);
  const double phi2 = degrees_to_radians(b.y);
  const double dphi = degrees_to_radians(b.y - a.y);
  const double dlam = degrees_to_radians(b.x - a.x);
  const double sin_dphi = std::sin(dphi / 2.0);
  const double sin_dlam = std::sin(dlam / 2.0);
  const double h = sin_dphi * sin_dphi + std::cos(phi1) * std::cos(phi2) * sin_dlam * sin_dlam;
  return 2.0 * kEarthRadiusMeters * std::asin(std::min(1.0, std::sqrt(h)));
}

inline double euclidean_meters(const GeoPoint& a, const GeoPoint& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

}  // namespace detail

// Distance in meters between two points sharing a CRS compatible with the
// metric. Symmetric, non-negative, zero iff the coordinates are identical.
inline double distance(const GeoPoint& a, const GeoPoint& b, DistanceMetric metric) {
  if (a.crs != b.crs) {
    throw ContractError("distance: points use different CRS (" + to_string(a.crs) + " vs " +
                        to_string(b.crs) + ")");
  }
  if (a.crs != crs_for(metric)) {
    throw ContractError("distance: metric " + to_string(metric) + " is incompatible with CRS " +
                        to_string(a.crs));
  }
  if (a.x == b.x && a.y == b.y) {
    return 0.0;
  }
  return metric == DistanceMetric::EuclideanPlanar ? detail::euclidean_meters(a, b)
                                                   : detail::haversine_meters(a, b);
}

namespace detail {

// Embedding used by the spatial index. Lonlat points go onto the sphere of
// radius kEarthRadiusMeters so that great-circle order matches 3D chord
// order and longitude wrap needs no special casing; planar points keep z = 0.
inline std::array<double, 3> embed(const GeoPoint& p) {
  if (p.crs == Crs::PlanarMeters) {
    return {p.x, p.y, 0.0};
  }
  const double phi = degrees_to_radians(p.y);
  const double lam = degrees_to_radians(p.x);
  return {kEarthRadiusMeters * std::cos(phi) * std::cos(lam),
          kEarthRadiusMeters * std::cos(phi) * std::sin(lam),
          kEarthRadiusMeters * std::sin(phi)};
}

// Chord length subtended by a great-circle distance of r meters.
inline double chord_for_distance(double r, DistanceMetric metric) {
  if (metric == DistanceMetric::EuclideanPlanar) {
    return r;
  }
  const double capped = std::min(r, std::numbers::pi * kEarthRadiusMeters);
  return 2.0 * kEarthRadiusMeters * std::sin(capped / (2.0 * kEarthRadiusMeters));
}

}  // namespace detail

}  // namespace fca
