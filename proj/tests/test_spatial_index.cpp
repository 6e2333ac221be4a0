#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>
#include <vector>

#include "fca/spatial_index.hpp"
#include "support/oracles.hpp"

using fca::Crs;
using fca::DistanceMetric;
using fca::GeoPoint;
using fca::SpatialIndex;

namespace {

std::string padded(int i) {
  std::string s = std::to_string(i);
  return std::string(4 - s.size(), '0') + s;
}

std::vector<SpatialIndex::Entry> random_lonlat_cloud(std::mt19937_64& gen, int n, double lon0,
                                                     double lat0, double spread) {
  std::uniform_real_distribution<double> dlon(-spread, spread);
  std::uniform_real_distribution<double> dlat(-spread, spread);
  std::vector<SpatialIndex::Entry> entries;
  entries.reserve(n);
  for (int i = 0; i < n; ++i) {
    entries.push_back({"p" + padded(i), {lon0 + dlon(gen), lat0 + dlat(gen), Crs::LonLatDegrees}});
  }
  return entries;
}

}  // namespace

TEST_CASE("radius query on a small fixed layout", "[spatial]") {
  std::vector<SpatialIndex::Entry> entries = {
      {"a", {-86.70, 36.10, Crs::LonLatDegrees}},
      {"b", {-86.70, 36.20, Crs::LonLatDegrees}},  // ~11.1 km north of a
      {"c", {-86.60, 36.10, Crs::LonLatDegrees}},  // ~9.0 km east of a
      {"d", {-87.80, 36.10, Crs::LonLatDegrees}},  // ~99 km west of a
  };
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);
  REQUIRE(index.size() == 4);

  const GeoPoint center{-86.70, 36.10, Crs::LonLatDegrees};
  const auto near = index.radius_query(center, 10'000.0);
  REQUIRE(near.size() == 2);
  CHECK(near[0].id == "a");
  CHECK(near[0].distance_m == 0.0);
  CHECK(near[1].id == "c");
  CHECK(near[1].distance_m > 8'900.0);
  CHECK(near[1].distance_m < 9'100.0);

  CHECK(index.radius_query(center, 12'000.0).size() == 3);
  CHECK(index.radius_query(center, 100'000.0).size() == 4);
  CHECK(index.radius_query(center, 0.0).size() == 1);  // the coincident point
}

TEST_CASE("radius boundary is inclusive", "[spatial]") {
  std::vector<SpatialIndex::Entry> entries = {
      {"x", {0.0, 1.0, Crs::LonLatDegrees}},
  };
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);
  const GeoPoint center{0.0, 0.0, Crs::LonLatDegrees};
  const double d = fca::distance(center, entries[0].point, DistanceMetric::HaversineGeodesic);
  CHECK(index.radius_query(center, d).size() == 1);
  CHECK(index.radius_query(center, std::nextafter(d, 0.0)).empty());
}

TEST_CASE("radius query matches a linear scan", "[spatial]") {
  auto gen = oracle::rng(31337);
  const auto entries = random_lonlat_cloud(gen, 1000, -86.7, 36.1, 1.5);
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);

  std::uniform_real_distribution<double> dlon(-1.7, 1.7);
  std::uniform_real_distribution<double> radius(0.0, 200'000.0);
  for (int q = 0; q < 100; ++q) {
    const GeoPoint center{-86.7 + dlon(gen), 36.1 + dlon(gen), Crs::LonLatDegrees};
    const double r = radius(gen);
    const auto got = index.radius_query(center, r);
    const auto want = oracle::radius_scan(entries, center, r, DistanceMetric::HaversineGeodesic);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == want[i].id);
      CHECK(got[i].distance_m == want[i].distance_m);
    }
  }
}

TEST_CASE("radius query matches a linear scan on planar points", "[spatial]") {
  auto gen = oracle::rng(77);
  std::uniform_real_distribution<double> coord(-50'000.0, 50'000.0);
  std::vector<SpatialIndex::Entry> entries;
  for (int i = 0; i < 800; ++i) {
    entries.push_back({"n" + padded(i), {coord(gen), coord(gen), Crs::PlanarMeters}});
  }
  const SpatialIndex index(entries, DistanceMetric::EuclideanPlanar);
  std::uniform_real_distribution<double> radius(0.0, 60'000.0);
  for (int q = 0; q < 100; ++q) {
    const GeoPoint center{coord(gen), coord(gen), Crs::PlanarMeters};
    const double r = radius(gen);
    const auto got = index.radius_query(center, r);
    const auto want = oracle::radius_scan(entries, center, r, DistanceMetric::EuclideanPlanar);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].id == want[i].id);
      CHECK(got[i].distance_m == want[i].distance_m);
    }
  }
}

TEST_CASE("queries spanning the antimeridian", "[spatial]") {
  std::vector<SpatialIndex::Entry> entries = {
      {"east", {179.95, 10.0, Crs::LonLatDegrees}},
      {"west", {-179.95, 10.0, Crs::LonLatDegrees}},
      {"far", {150.0, 10.0, Crs::LonLatDegrees}},
  };
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);
  // The two near-dateline points are ~11 km apart even though their
  // longitudes differ by ~360.
  const auto hits = index.radius_query({179.99, 10.0, Crs::LonLatDegrees}, 15'000.0);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].id == "east");
  CHECK(hits[1].id == "west");
  const auto nearest = index.nearest({-179.99, 10.0, Crs::LonLatDegrees});
  REQUIRE(nearest.has_value());
  CHECK(nearest->id == "west");
}

TEST_CASE("nearest matches a linear scan and breaks ties by id", "[spatial]") {
  auto gen = oracle::rng(55);
  auto entries = random_lonlat_cloud(gen, 500, 10.0, 50.0, 2.0);
  // Duplicate coordinates with competing ids.
  entries.push_back({"dup_b", entries[17].point});
  entries.push_back({"dup_a", entries[17].point});
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);

  std::uniform_real_distribution<double> jitter(-2.2, 2.2);
  for (int q = 0; q < 200; ++q) {
    const GeoPoint center{10.0 + jitter(gen), 50.0 + jitter(gen), Crs::LonLatDegrees};
    const auto got = index.nearest(center);
    const auto want = oracle::nearest_scan(entries, center, DistanceMetric::HaversineGeodesic);
    REQUIRE(got.has_value());
    CHECK(got->id == *want);
  }
  // Query exactly on the duplicated point: smallest id wins.
  const auto tie = index.nearest(entries[17].point);
  REQUIRE(tie.has_value());
  CHECK(tie->id == "dup_a");
  CHECK(tie->distance_m == 0.0);
}

TEST_CASE("index rejects inconsistent inputs", "[spatial]") {
  std::vector<SpatialIndex::Entry> mixed = {
      {"a", {0.0, 0.0, Crs::LonLatDegrees}},
      {"b", {0.0, 0.0, Crs::PlanarMeters}},
  };
  CHECK_THROWS_AS(SpatialIndex(mixed, DistanceMetric::HaversineGeodesic), fca::ContractError);

  std::vector<SpatialIndex::Entry> ok = {{"a", {0.0, 0.0, Crs::LonLatDegrees}}};
  const SpatialIndex index(ok, DistanceMetric::HaversineGeodesic);
  CHECK_THROWS_AS(index.radius_query({0.0, 0.0, Crs::PlanarMeters}, 10.0), fca::ContractError);
  CHECK_THROWS_AS(index.radius_query({0.0, 0.0, Crs::LonLatDegrees}, -1.0), fca::ContractError);
  CHECK_THROWS_AS(index.nearest({0.0, 0.0, Crs::PlanarMeters}), fca::ContractError);

  const SpatialIndex empty(std::vector<SpatialIndex::Entry>{},
                           DistanceMetric::HaversineGeodesic);
  CHECK(empty.radius_query({0.0, 0.0, Crs::LonLatDegrees}, 1000.0).empty());
  CHECK_FALSE(empty.nearest({0.0, 0.0, Crs::LonLatDegrees}).has_value());
}

TEST_CASE("polar point clouds keep scan parity", "[spatial]") {
  auto gen = oracle::rng(271828);
  std::uniform_real_distribution<double> lon(-180.0, 180.0);
  std::uniform_real_distribution<double> lat(88.5, 90.0);
  std::vector<SpatialIndex::Entry> entries;
  for (int i = 0; i < 400; ++i) {
    entries.push_back({"n" + padded(i), {lon(gen), lat(gen), Crs::LonLatDegrees}});
  }
  const SpatialIndex index(entries, DistanceMetric::HaversineGeodesic);
  std::uniform_real_distribution<double> radius(0.0, 120'000.0);
  for (int q = 0; q < 60; ++q) {
    const GeoPoint center{lon(gen), lat(gen), Crs::LonLatDegrees};
    const double r = radius(gen);
    const auto got = index.radius_query(center, r);
    const auto want = oracle::radius_scan(entries, center, r, DistanceMetric::HaversineGeodesic);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].id == want[i].id);
  }
}
