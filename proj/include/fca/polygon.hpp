#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fca/errors.hpp"
#include "fca/geo.hpp"

namespace fca {

// A closed linear ring: first vertex equals the last, at least 4 vertices
// including the closing one. Coordinates are (x, y) in the zone CRS.
using Ring = std::vector<std::array<double, 2>>;

// One polygon: outer ring first, then any holes.
struct Polygon {
  std::vector<Ring> rings;
};

// Zone geometry is either a single point or one-or-more polygons.
struct ZoneGeometry {
  Crs crs = Crs::LonLatDegrees;
  std::variant<std::array<double, 2>, std::vector<Polygon>> shape;

  bool is_point() const { return std::holds_alternative<std::array<double, 2>>(shape); }

  static ZoneGeometry from_point(const GeoPoint& p) {
    return ZoneGeometry{p.crs, std::array<double, 2>{p.x, p.y}};
  }
  static ZoneGeometry from_polygons(std::vector<Polygon> polys, Crs crs) {
    return ZoneGeometry{crs, std::move(polys)};
  }

  friend bool operator==(const ZoneGeometry& a, const ZoneGeometry& b) {
    if (a.crs != b.crs || a.is_point() != b.is_point()) return false;
    if (a.is_point()) {
      return std::get<std::array<double, 2>>(a.shape) == std::get<std::array<double, 2>>(b.shape);
    }
    const auto& pa = std::get<std::vector<Polygon>>(a.shape);
    const auto& pb = std::get<std::vector<Polygon>>(b.shape);
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i].rings != pb[i].rings) return false;
    }
    return true;
  }
};

// Throws GeometryError unless every ring is closed with >= 4 vertices.
inline void validate_rings(const std::vector<Polygon>& polygons, const std::string& context) {
  for (const auto& polygon : polygons) {
    if (polygon.rings.empty()) {
      throw GeometryError(context + ": polygon with no rings");
    }
    for (const auto& ring : polygon.rings) {
      if (ring.size() < 4) {
        throw GeometryError(context + ": ring has fewer than 4 vertices");
      }
      if (ring.front() != ring.back()) {
        throw GeometryError(context + ": ring is not closed (first vertex != last)");
      }
      for (const auto& v : ring) {
        if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
          throw GeometryError(context + ": non-finite ring coordinate");
        }
      }
    }
  }
}

namespace detail {

inline double ring_signed_area(const Ring& ring) {
  double twice_area = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice_area += ring[i][0] * ring[i + 1][1] - ring[i + 1][0] * ring[i][1];
  }
  return twice_area / 2.0;
}

// Area-weighted centroid accumulator for one ring (shoelace form).
// Returns {weighted_x, weighted_y, signed_area}.
inline std::array<double, 3> ring_centroid_terms(const Ring& ring) {
  double cx = 0.0, cy = 0.0, twice_area = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double cross = ring[i][0] * ring[i + 1][1] - ring[i + 1][0] * ring[i][1];
    cx += (ring[i][0] + ring[i + 1][0]) * cross;
    cy += (ring[i][1] + ring[i + 1][1]) * cross;
    twice_area += cross;
  }
  const double area = twice_area / 2.0;
  return {cx / 6.0, cy / 6.0, area};
}

// Even-odd rule with the usual half-open edge treatment, so a ray through a
// vertex is counted once.
inline bool ring_crossings_odd(const Ring& ring, double x, double y) {
  bool odd = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const double x1 = ring[i][0], y1 = ring[i][1];
    const double x2 = ring[i + 1][0], y2 = ring[i + 1][1];
    if ((y1 <= y && y < y2) || (y2 <= y && y < y1)) {
      const double x_at = x1 + (y - y1) / (y2 - y1) * (x2 - x1);
      if (x < x_at) odd = !odd;
    }
  }
  return odd;
}

}  // namespace detail

inline bool point_in_polygons(const std::vector<Polygon>& polygons, double x, double y) {
  bool inside = false;
  for (const auto& polygon : polygons) {
    for (const auto& ring : polygon.rings) {
      if (detail::ring_crossings_odd(ring, x, y)) inside = !inside;
    }
  }
  return inside;
}

namespace detail {

// Midpoint of the widest interior chord along the horizontal line y.
inline std::optional<std::array<double, 2>> widest_chord_midpoint(
    const std::vector<Polygon>& polygons, double y) {
  std::vector<double> xs;
  for (const auto& polygon : polygons) {
    for (const auto& ring : polygon.rings) {
      for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        const double y1 = ring[i][1], y2 = ring[i + 1][1];
        if ((y1 <= y && y < y2) || (y2 <= y && y < y1)) {
          xs.push_back(ring[i][0] + (y - y1) / (y2 - y1) * (ring[i + 1][0] - ring[i][0]));
        }
      }
    }
  }
  if (xs.size() < 2) return std::nullopt;
  std::sort(xs.begin(), xs.end());
  double best_width = 0.0;
  std::optional<std::array<double, 2>> best;
  for (std::size_t i = 0; i + 1 < xs.size(); i += 2) {
    const double width = xs[i + 1] - xs[i];
    if (width > best_width) {
      best_width = width;
      best = std::array<double, 2>{(xs[i] + xs[i + 1]) / 2.0, y};
    }
  }
  return best;
}

}  // namespace detail

// Area-weighted centroid over all polygons; holes subtract. Throws
// GeometryError when the total area vanishes.
inline GeoPoint polygon_centroid(const std::vector<Polygon>& polygons, Crs crs) {
  double sum_x = 0.0, sum_y = 0.0, sum_area = 0.0;
  for (const auto& polygon : polygons) {
    for (std::size_t r = 0; r < polygon.rings.size(); ++r) {
      auto [wx, wy, area] = detail::ring_centroid_terms(polygon.rings[r]);
      // Normalize orientation: outer ring counts positive, holes negative.
      const double sign = (r == 0) ? 1.0 : -1.0;
      const double flip = (area < 0.0) ? -1.0 : 1.0;
      sum_x += sign * flip * wx;
      sum_y += sign * flip * wy;
      sum_area += sign * std::abs(area);
    }
  }
  if (!(sum_area > 0.0)) {
    throw GeometryError("polygon_centroid: zero-area polygon");
  }
  return GeoPoint{sum_x / sum_area, sum_y / sum_area, crs};
}

// The point standing in for a zone. Polygons get their centroid unless it
// falls outside (concave shapes, holes), in which case the midpoint of the
// widest interior horizontal chord through the vertical midpoint is used.
// Point zones pass through unchanged.
inline GeoPoint representative_point(const ZoneGeometry& geometry) {
  if (geometry.is_point()) {
    const auto& p = std::get<std::array<double, 2>>(geometry.shape);
    return GeoPoint{p[0], p[1], geometry.crs};
  }
  const auto& polygons = std::get<std::vector<Polygon>>(geometry.shape);
  validate_rings(polygons, "representative_point");
  const GeoPoint centroid = polygon_centroid(polygons, geometry.crs);
  if (point_in_polygons(polygons, centroid.x, centroid.y)) {
    return centroid;
  }

  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();
  for (const auto& polygon : polygons) {
    for (const auto& v : polygon.rings.front()) {
      min_y = std::min(min_y, v[1]);
      max_y = std::max(max_y, v[1]);
    }
  }
  double y = (min_y + max_y) / 2.0;
  // A midline exactly through vertices can yield no interior chord; nudge.
  const double step = (max_y - min_y) * 1e-7;
  for (int attempt = 0; attempt < 32; ++attempt) {
    if (auto mid = detail::widest_chord_midpoint(polygons, y)) {
      return GeoPoint{(*mid)[0], (*mid)[1], geometry.crs};
    }
    y += (attempt % 2 == 0 ? 1.0 : -1.0) * step * static_cast<double>(attempt + 1);
  }
  throw GeometryError("representative_point: no interior point found (degenerate polygon)");
}

}  // namespace fca
