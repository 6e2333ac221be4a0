#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fca/errors.hpp"
#include "fca/geo.hpp"

namespace fca {

// Static KD-tree over point sites, queried by radius or nearest neighbor.
//
// Points are embedded in 3D before indexing: planar coordinates as (x, y, 0),
// geographic coordinates on the mean-Earth sphere. Great-circle distance is
// monotone in 3D chord length, so tree pruning works on chords and the exact
// metric check at the leaves restores scan-identical results.
class SpatialIndex {
public:
  struct Entry {
    std::string id;
    GeoPoint point;
  };

  struct Hit {
    std::string id;
    double distance_m = 0.0;

    friend bool operator==(const Hit& a, const Hit& b) {
      return a.id == b.id && a.distance_m == b.distance_m;
    }
  };

  SpatialIndex(std::vector<Entry> entries, DistanceMetric metric) : metric_(metric) {
    items_.reserve(entries.size());
    for (auto& e : entries) {
      validate_point(e.point, "spatial index entry \"" + e.id + "\"");
      if (e.point.crs != crs_for(metric)) {
        throw ContractError("spatial index entry \"" + e.id + "\" CRS does not match metric " +
                            to_string(metric));
      }
      items_.push_back(Item{detail::embed(e.point), e.point, std::move(e.id), 0});
    }
    build(0, items_.size());
  }

  std::size_t size() const { return items_.size(); }
  DistanceMetric metric() const { return metric_; }

  // Every entry with distance(center, entry) <= radius, boundary inclusive,
  // sorted by id.
  std::vector<Hit> radius_query(const GeoPoint& center, double radius_m) const {
    if (!(radius_m >= 0.0)) {
      throw ContractError("radius_query: radius must be >= 0");
    }
    check_center(center);
    std::vector<Hit> hits;
    if (items_.empty()) return hits;
    const auto c = detail::embed(center);
    // Slightly inflated chord bound; the exact metric check filters it back.
    const double chord = detail::chord_for_distance(radius_m, metric_) * (1.0 + 1e-12) + 1e-9;
    collect(0, items_.size(), c, chord * chord, center, radius_m, hits);
    std::sort(hits.begin(), hits.end(),
              [](const Hit& a, const Hit& b) { return a.id < b.id; });
    return hits;
  }

  // Closest entry to center; exact ties go to the smallest id.
  std::optional<Hit> nearest(const GeoPoint& center) const {
    check_center(center);
    if (items_.empty()) return std::nullopt;
    const auto c = detail::embed(center);
    Best best;
    find_nearest(0, items_.size(), c, best);
    return Hit{items_[best.index].id, distance(center, items_[best.index].point, metric_)};
  }

private:
  struct Item {
    std::array<double, 3> xyz;
    GeoPoint point;
    std::string id;
    std::uint8_t axis;
  };

  struct Best {
    double chord_sq = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
  };

  void check_center(const GeoPoint& center) const {
    validate_point(center, "query center");
    if (center.crs != crs_for(metric_)) {
      throw ContractError("query center CRS does not match index metric " + to_string(metric_));
    }
  }

  void build(std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    // Split on the widest axis of this subset.
    std::array<double, 3> min{items_[lo].xyz}, max{items_[lo].xyz};
    for (std::size_t i = lo; i < hi; ++i) {
      for (int a = 0; a < 3; ++a) {
        min[a] = std::min(min[a], items_[i].xyz[a]);
        max[a] = std::max(max[a], items_[i].xyz[a]);
      }
    }
    std::uint8_t axis = 0;
    for (std::uint8_t a = 1; a < 3; ++a) {
      if (max[a] - min[a] > max[axis] - min[axis]) axis = a;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(items_.begin() + lo, items_.begin() + mid, items_.begin() + hi,
                     [axis](const Item& a, const Item& b) {
                       if (a.xyz[axis] != b.xyz[axis]) return a.xyz[axis] < b.xyz[axis];
                       return a.id < b.id;
                     });
    items_[mid].axis = axis;
    build(lo, mid);
    build(mid + 1, hi);
  }

  static double dist3_sq(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
  }

  void collect(std::size_t lo, std::size_t hi, const std::array<double, 3>& c, double chord_sq,
               const GeoPoint& center, double radius_m, std::vector<Hit>& hits) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Item& item = items_[mid];
    if (dist3_sq(c, item.xyz) <= chord_sq) {
      const double d = distance(center, item.point, metric_);
      if (d <= radius_m) hits.push_back(Hit{item.id, d});
    }
    const double gap = c[item.axis] - item.xyz[item.axis];
    if (gap * gap <= chord_sq || gap < 0.0) collect(lo, mid, c, chord_sq, center, radius_m, hits);
    if (gap * gap <= chord_sq || gap > 0.0) collect(mid + 1, hi, c, chord_sq, center, radius_m, hits);
  }

  void find_nearest(std::size_t lo, std::size_t hi, const std::array<double, 3>& c,
                    Best& best) const {
    if (lo >= hi) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Item& item = items_[mid];
    const double d_sq = dist3_sq(c, item.xyz);
    if (d_sq < best.chord_sq ||
        (d_sq == best.chord_sq && item.id < items_[best.index].id)) {
      best = Best{d_sq, mid};
    }
    const double gap = c[item.axis] - item.xyz[item.axis];
    const std::size_t near_lo = gap <= 0.0 ? lo : mid + 1;
    const std::size_t near_hi = gap <= 0.0 ? mid : hi;
    const std::size_t far_lo = gap <= 0.0 ? mid + 1 : lo;
    const std::size_t far_hi = gap <= 0.0 ? hi : mid;
    find_nearest(near_lo, near_hi, c, best);
    if (gap * gap <= best.chord_sq) {
      find_nearest(far_lo, far_hi, c, best);
    }
  }

  DistanceMetric metric_;
  std::vector<Item> items_;
};

}  // namespace fca
