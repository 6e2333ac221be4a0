// Acceptance gate for the accessibility toolkit. Each criterion prints one
// PASS/FAIL line; the exit code is the number of failures.
//
// Usage: fca_acceptance <path-to-fca-binary> <data-dir>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fca/fca.hpp"
#include "support/oracles.hpp"

namespace {

std::string g_cli;
std::string g_data;
std::filesystem::path g_tmp;

int run_cli(const std::string& args, const std::string& env = "") {
  const std::string command =
      (env.empty() ? "" : env + " ") + g_cli + " " + args + " > /dev/null 2>&1";
  return std::system(command.c_str());
}

bool close_rel(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= tol * scale;
}

// ---------------------------------------------------------------------------
// Random engine instances shared by the first three criteria.

struct Instance {
  std::vector<fca::ProviderSite> providers;
  std::vector<fca::DemandZone> zones;
  fca::CostMatrix costs;
  std::vector<double> thresholds;
  std::vector<double> weights;
};

Instance random_instance(std::mt19937_64& gen) {
  Instance inst;
  std::uniform_int_distribution<int> provider_count(1, 30), zone_count(1, 200), rings(1, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const int rs = rings(gen);
  double bound = 0.0;
  for (int r = 0; r < rs; ++r) {
    bound += 50.0 + 2000.0 * unit(gen);
    inst.thresholds.push_back(bound);
  }
  double weight = 1.0;
  for (int r = 0; r < rs; ++r) {
    inst.weights.push_back(weight);
    weight *= 0.2 + 0.75 * unit(gen);
  }

  const int np = provider_count(gen), nz = zone_count(gen);
  for (int p = 0; p < np; ++p) {
    fca::ProviderSite site;
    site.id = "p" + std::to_string(gen() % 10'000) + "_" + std::to_string(p);
    site.capacity = 1.0 + 50.0 * unit(gen);
    inst.providers.push_back(site);
  }
  for (int z = 0; z < nz; ++z) {
    fca::DemandZone zone;
    zone.id = "z" + std::to_string(gen() % 10'000) + "_" + std::to_string(z);
    zone.demand = unit(gen) < 0.1 ? 0.0 : std::floor(5000.0 * unit(gen));
    inst.zones.push_back(zone);
  }
  for (const auto& zone : inst.zones) {
    for (const auto& provider : inst.providers) {
      if (unit(gen) < 0.6) {
        inst.costs.entries.push_back(
            {zone.id, provider.id, inst.thresholds.back() * 1.3 * unit(gen)});
      }
    }
  }
  inst.costs.canonicalize();
  return inst;
}

// The classic dichotomous two-step form written out directly, no ring
// machinery involved.
oracle::TwoStepResult dichotomous_two_step(const Instance& inst, double d0) {
  std::vector<std::string> zone_ids, provider_ids;
  std::map<std::string, double> demand_of, capacity_of;
  for (const auto& zone : inst.zones) {
    zone_ids.push_back(zone.id);
    demand_of[zone.id] = *zone.demand;
  }
  for (const auto& provider : inst.providers) {
    provider_ids.push_back(provider.id);
    capacity_of[provider.id] = provider.capacity;
  }
  std::sort(zone_ids.begin(), zone_ids.end());
  std::sort(provider_ids.begin(), provider_ids.end());

  oracle::TwoStepResult out;
  for (const auto& provider_id : provider_ids) {
    double weighted = 0.0;
    for (const auto& zone_id : zone_ids) {
      const auto cost = inst.costs.cost(zone_id, provider_id);
      if (cost && *cost <= d0) weighted += demand_of[zone_id];
    }
    out.weighted_demand[provider_id] = weighted;
    out.ratio[provider_id] = weighted > 0.0 ? capacity_of[provider_id] / weighted : 0.0;
  }
  for (const auto& zone_id : zone_ids) {
    double sum = 0.0;
    for (const auto& provider_id : provider_ids) {
      const auto cost = inst.costs.cost(zone_id, provider_id);
      if (cost && *cost <= d0) sum += out.ratio[provider_id];
    }
    out.final_index[zone_id] = sum;
  }
  return out;
}

std::vector<Instance>& instances() {
  static std::vector<Instance> all = [] {
    auto gen = oracle::rng(20250817);
    std::vector<Instance> v;
    for (int i = 0; i < 100; ++i) v.push_back(random_instance(gen));
    return v;
  }();
  return all;
}

// ---------------------------------------------------------------------------
// Criteria

bool oracle_equivalence(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& inst : instances()) {
    const auto scheme = fca::RingScheme::make(inst.thresholds, inst.weights);
    const auto got = fca::accessibility(inst.providers, inst.zones, inst.costs, scheme, 1.0);
    const auto want = oracle::two_step(inst.providers, inst.zones, inst.costs,
                                       inst.thresholds, inst.weights, 1.0);
    for (const auto& zone : got.zones) {
      const double expected = want.final_index.at(zone.zone_id);
      if (!close_rel(zone.final_index, expected, 1e-9)) {
        detail = "zone " + zone.zone_id + ": " + fca::format_double(zone.final_index) +
                 " vs " + fca::format_double(expected);
        return false;
      }
      worst = std::max(worst, std::abs(zone.final_index - expected));
    }
    for (const auto& [provider_id, expected] : want.ratio) {
      bool found = false;
      const auto ratios = fca::step1_ratios(inst.providers, inst.zones, inst.costs, scheme);
      for (const auto& r : ratios) {
        if (r.provider_id == provider_id) {
          found = r.ratio == expected;
          break;
        }
      }
      if (!found) {
        detail = "ratio mismatch at provider " + provider_id;
        return false;
      }
      break;  // spot-check one provider per instance; zones covered all sums
    }
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
  std::ostringstream note;
  note << "100 instances, worst |diff| " << worst << ", " << elapsed.count() << " s";
  detail = note.str();
  if (elapsed.count() >= 10.0) {
    detail += " (over the 10 s budget)";
    return false;
  }
  return true;
}

bool supply_conservation(std::string& detail) {
  for (const auto& inst : instances()) {
    const auto scheme = fca::RingScheme::make(inst.thresholds, inst.weights);
    const auto result = fca::accessibility(inst.providers, inst.zones, inst.costs, scheme, 1.0);
    const auto ratios = fca::step1_ratios(inst.providers, inst.zones, inst.costs, scheme);

    std::map<std::string, double> demand_of, capacity_of;
    for (const auto& zone : inst.zones) demand_of[zone.id] = *zone.demand;
    for (const auto& provider : inst.providers) capacity_of[provider.id] = provider.capacity;
    double lhs = 0.0, rhs = 0.0;
    for (const auto& zone : result.zones) lhs += demand_of[zone.zone_id] * zone.final_index;
    for (const auto& ratio : ratios) {
      if (ratio.served) rhs += capacity_of[ratio.provider_id];
    }
    if (!close_rel(lhs, rhs, 1e-9)) {
      detail = fca::format_double(lhs) + " vs " + fca::format_double(rhs);
      return false;
    }
  }
  detail = "sum(P_i * A_i) = sum(served S_j) on all 100 instances";
  return true;
}

bool reduction_law(std::string& detail) {
  for (const auto& inst : instances()) {
    const double d0 = inst.thresholds.back();
    const auto got = fca::accessibility(inst.providers, inst.zones, inst.costs,
                                        fca::RingScheme::single(d0), 1.0);
    const auto want = dichotomous_two_step(inst, d0);
    for (const auto& zone : got.zones) {
      if (zone.final_index != want.final_index.at(zone.zone_id)) {
        detail = "zone " + zone.zone_id + " differs";
        return false;
      }
    }
  }
  detail = "single-ring runs are bit-identical to the dichotomous form";
  return true;
}

bool table1_reproduction(std::string& detail) {
  const std::vector<fca::AgeBandRate> rates = {
      {"0-14", 11.0}, {"15-29", 77.0}, {"30-44", 561.0}, {"45-59", 1171.0}, {"60+", 2080.0}};
  const auto weights = fca::derive_age_weights(rates);
  const std::vector<double> expected = {1.0, 7.0, 51.0, 106.0, 189.0};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (weights.bands[i].weight != expected[i]) {
      detail = "band " + std::to_string(i) + " weight " +
               fca::format_double(weights.bands[i].weight);
      return false;
    }
  }
  const std::vector<double> counts = {100.0, 200.0, 100.0, 50.0, 50.0};
  const double demand = fca::age_adjusted_demand(counts, weights);
  if (demand != 21'350.0) {
    detail = "adjusted demand " + fca::format_double(demand);
    return false;
  }
  detail = "weights 1,7,51,106,189; example demand 21350";
  return true;
}

bool routing_correctness(std::string& detail) {
  auto gen = oracle::rng(404);
  std::uniform_int_distribution<int> node_count(2, 60), cost(1, 2000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int trial = 0; trial < 50; ++trial) {
    const int n = node_count(gen);
    std::vector<std::pair<std::string, fca::GeoPoint>> nodes;
    for (int i = 0; i < n; ++i) {
      nodes.emplace_back("n" + std::to_string(100 + i),
                         fca::GeoPoint{unit(gen), unit(gen), fca::Crs::PlanarMeters});
    }
    std::vector<fca::RoadEdge> edges;
    std::vector<std::tuple<std::size_t, std::size_t, double>> arcs;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && unit(gen) < 0.15) {
          const double c = cost(gen);
          edges.push_back({nodes[i].first, nodes[j].first, c, false});
          arcs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j), c);
        }
      }
    }
    if (edges.empty()) {
      edges.push_back({nodes[0].first, nodes[1].first, 7.0, false});
      arcs.emplace_back(0, 1, 7.0);
    }
    const auto network = fca::RoadNetwork::build(nodes, edges);
    const auto dense = oracle::floyd_warshall(static_cast<std::size_t>(n), arcs);
    for (int i = 0; i < n; ++i) {
      const auto times = fca::shortest_path_times(network, nodes[i].first, 1e18);
      for (int j = 0; j < n; ++j) {
        const auto it = times.find(nodes[j].first);
        const bool reachable = std::isfinite(dense[i][j]);
        if (reachable != (it != times.end()) ||
            (reachable && it->second != dense[i][j])) {
          detail = "trial " + std::to_string(trial) + ": " + nodes[i].first + " -> " +
                   nodes[j].first;
          return false;
        }
      }
    }
  }

  // On a bidirectional network, reversing the travel direction transposes
  // the matrix, which keys entries identically.
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 20;
    std::vector<std::pair<std::string, fca::GeoPoint>> nodes;
    for (int i = 0; i < n; ++i) {
      nodes.emplace_back("m" + std::to_string(100 + i),
                         fca::GeoPoint{unit(gen) * 100.0, unit(gen) * 100.0,
                                       fca::Crs::PlanarMeters});
    }
    std::vector<fca::RoadEdge> edges;
    for (int i = 1; i < n; ++i) {
      edges.push_back({nodes[i - 1].first, nodes[i].first, double(cost(gen)), true});
      if (unit(gen) < 0.3) {
        edges.push_back({nodes[i].first, nodes[gen() % i].first, double(cost(gen)), true});
      }
    }
    const auto network = fca::RoadNetwork::build(nodes, edges);
    std::vector<fca::DemandZone> zones(3);
    std::vector<fca::ProviderSite> providers(3);
    for (int i = 0; i < 3; ++i) {
      zones[i].id = "z" + std::to_string(i);
      zones[i].geometry.shape = std::array<double, 2>{nodes[i * 2].second.x,
                                                      nodes[i * 2].second.y};
      zones[i].geometry.crs = fca::Crs::PlanarMeters;
      providers[i].id = "p" + std::to_string(i);
      providers[i].location = nodes[i * 2 + 1].second;
      providers[i].capacity = 1.0;
    }
    const auto forward = fca::build_cost_matrix(network, zones, providers, 1e17,
                                                fca::Direction::DemandToProvider);
    const auto reverse = fca::build_cost_matrix(network, zones, providers, 1e17,
                                                fca::Direction::ProviderToDemand);
    if (forward.entries != reverse.entries) {
      detail = "direction reversal changed a bidirectional matrix";
      return false;
    }
  }
  detail = "50 graphs equal Floyd-Warshall exactly; reversal is a transpose";
  return true;
}

bool geometry_correctness(std::string& detail) {
  const double d = fca::distance(fca::GeoPoint{0.0, 0.0, fca::Crs::LonLatDegrees},
                                 fca::GeoPoint{0.0, 1.0, fca::Crs::LonLatDegrees},
                                 fca::DistanceMetric::HaversineGeodesic);
  if (std::abs(d - 111'194.93) > 0.01) {
    detail = "one degree of latitude measured " + fca::format_double(d);
    return false;
  }

  auto gen = oracle::rng(606);
  std::uniform_real_distribution<double> lon(-180.0, 180.0), lat(-85.0, 85.0);
  std::uniform_real_distribution<double> radius(1'000.0, 2'000'000.0);
  std::vector<fca::SpatialIndex::Entry> entries;
  for (int i = 0; i < 1000; ++i) {
    entries.push_back({"pt" + std::to_string(i),
                       fca::GeoPoint{lon(gen), lat(gen), fca::Crs::LonLatDegrees}});
  }
  const fca::SpatialIndex index(entries, fca::DistanceMetric::HaversineGeodesic);
  for (int q = 0; q < 100; ++q) {
    const fca::GeoPoint center{lon(gen), lat(gen), fca::Crs::LonLatDegrees};
    const double r = radius(gen);
    const auto got = index.radius_query(center, r);
    const auto want =
        oracle::radius_scan(entries, center, r, fca::DistanceMetric::HaversineGeodesic);
    if (got.size() != want.size()) {
      detail = "query " + std::to_string(q) + ": " + std::to_string(got.size()) + " vs " +
               std::to_string(want.size()) + " hits";
      return false;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].id != want[i].id || got[i].distance_m != want[i].distance_m) {
        detail = "query " + std::to_string(q) + " differs at hit " + std::to_string(i);
        return false;
      }
    }
  }
  detail = "haversine within 0.01 m; 100 radius queries match the scan";
  return true;
}

bool jenks_optimality(std::string& detail) {
  std::size_t cases = 0;
  // Every multiset over {0..4} up to size 8, then random real-valued inputs
  // up to the n = 12 bound.
  std::vector<double> values;
  std::function<bool(double)> enumerate = [&](double min_next) {
    if (!values.empty()) {
      std::vector<std::pair<std::string, double>> labeled;
      for (std::size_t i = 0; i < values.size(); ++i) {
        labeled.emplace_back("v" + std::to_string(i), values[i]);
      }
      std::size_t distinct = 1;
      for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] != values[i - 1]) ++distinct;
      }
      for (std::size_t k = 1; k <= std::min<std::size_t>(4, distinct); ++k) {
        const auto got = fca::jenks_breaks(labeled, k);
        const auto want = oracle::jenks_exhaustive(labeled, k);
        if (got.breaks != want.breaks) return false;
        ++cases;
      }
    }
    if (values.size() == 8) return true;
    for (double v = min_next; v <= 4.0; v += 1.0) {
      values.push_back(v);
      if (!enumerate(v)) return false;
      values.pop_back();
    }
    return true;
  };
  if (!enumerate(0.0)) {
    detail = "breaks diverge on a small integer multiset";
    return false;
  }

  auto gen = oracle::rng(707);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(gen);
    std::vector<std::pair<std::string, double>> labeled;
    for (int i = 0; i < n; ++i) {
      labeled.emplace_back("r" + std::to_string(i), value(gen));
    }
    std::size_t distinct = 0;
    {
      std::vector<double> sorted;
      for (const auto& [id, v] : labeled) sorted.push_back(v);
      std::sort(sorted.begin(), sorted.end());
      distinct = static_cast<std::size_t>(
          std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    }
    for (std::size_t k = 1; k <= std::min<std::size_t>(4, distinct); ++k) {
      const auto got = fca::jenks_breaks(labeled, k);
      const auto want = oracle::jenks_exhaustive(labeled, k);
      if (got.breaks != want.breaks) {
        detail = "trial " + std::to_string(trial) + ", k = " + std::to_string(k);
        return false;
      }
      ++cases;
    }
  }
  detail = std::to_string(cases) + " inputs match the exhaustive search";
  return true;
}

struct CaseConfig {
  std::string name;
  std::string flags;                // access flags after the common inputs
  std::vector<double> thresholds;   // oracle-side scheme
  std::vector<double> weights;
  bool network = false;
};

bool case_study(std::string& detail) {
  const std::string fixture = g_data + "/fixture";
  const std::string sites = "--providers " + fixture + "/providers.geojson --zones " +
                            fixture + "/zones.geojson";
  const std::string common = sites + " --demand-field pop";
  const std::string matrix = (g_tmp / "case_matrix.csv").string();
  if (run_cli("catchment --network " + fixture + "/roads.csv " + sites +
              " --cutoff 30min -o " + matrix) != 0) {
    detail = "catchment run failed";
    return false;
  }

  fca::ZoneLoadOptions zone_load;
  zone_load.demand_field = "pop";
  const auto providers = fca::load_providers(fixture + "/providers.geojson", {});
  const auto zones = fca::load_zones(fixture + "/zones.geojson", zone_load);

  // Independent travel times: the star layout makes the zone -> provider
  // time the sum of the two spoke costs from roads.csv.
  std::map<std::string, double> spoke;
  {
    const auto roads = fca::parse_csv(fca::read_file(fixture + "/roads.csv"));
    for (const auto& row : roads.rows) {
      spoke[row[0].substr(2)] = fca::parse_double(row[6], "spoke");
    }
  }

  const std::vector<CaseConfig> configs = {
      {"2sfca-buffer", "--model 2sfca", {fca::miles_to_meters(15.0)}, {1.0}, false},
      {"e2sfca-buffer",
       "--model e2sfca",
       {fca::miles_to_meters(5.0), fca::miles_to_meters(10.0), fca::miles_to_meters(15.0)},
       {1.0, 0.68, 0.22},
       false},
      {"2sfca-network", "--model 2sfca --cost-matrix " + matrix + " --times 30",
       {1800.0},
       {1.0},
       true},
      {"e2sfca-network", "--model e2sfca --cost-matrix " + matrix + " --times 10,20,30",
       {600.0, 1200.0, 1800.0},
       {1.0, 0.68, 0.22},
       true},
  };

  for (const auto& config : configs) {
    const std::string out = (g_tmp / ("case_" + config.name + ".csv")).string();
    if (run_cli("access " + config.flags + " " + common + " -o " + out) != 0) {
      detail = config.name + ": access run failed";
      return false;
    }
    const auto table = fca::parse_csv(fca::read_file(out));
    std::map<std::string, std::vector<std::string>> row_of;
    for (const auto& row : table.rows) row_of[row[0]] = row;

    // Brute-force golden scores. Straight-line costs come from an
    // independent haversine; network costs from the spoke sums.
    fca::CostMatrix costs;
    for (const auto& zone : zones) {
      const auto& p = std::get<std::array<double, 2>>(zone.geometry.shape);
      for (const auto& provider : providers) {
        double cost = 0.0;
        if (config.network) {
          cost = spoke.at(zone.id) + spoke.at(provider.id);
        } else {
          cost = oracle::haversine(p[0], p[1], provider.location.x, provider.location.y);
        }
        if (cost <= config.thresholds.back()) {
          costs.entries.push_back({zone.id, provider.id, cost});
        }
      }
    }
    costs.canonicalize();
    const auto golden = oracle::two_step(providers, zones, costs, config.thresholds,
                                         config.weights, 100'000.0);

    double min_urban = std::numeric_limits<double>::infinity();
    for (const auto& zone : zones) {
      const auto it = row_of.find(zone.id);
      if (it == row_of.end()) {
        detail = config.name + ": zone " + zone.id + " missing from the output";
        return false;
      }
      const std::string& got = it->second[1];
      if (got != fca::format_double(golden.final_index.at(zone.id))) {
        detail = config.name + ": zone " + zone.id + " scored " + got + ", oracle " +
                 fca::format_double(golden.final_index.at(zone.id));
        return false;
      }
      const std::string group = zone.properties.at("group");
      if (group == "urban") {
        min_urban = std::min(min_urban, fca::parse_double(got, "urban"));
      } else if (group == "rural" && got != "0") {
        detail = config.name + ": rural zone " + zone.id + " scored " + got;
        return false;
      }
    }
    if (!(min_urban > 0.0)) {
      detail = config.name + ": an urban zone scored 0";
      return false;
    }
  }
  detail = "4 configurations match the oracle bit-exactly; urban > rural = 0";
  return true;
}

bool determinism(std::string& detail) {
  const std::string fixture = g_data + "/fixture";
  const std::string sites = "--providers " + fixture + "/providers.geojson --zones " +
                            fixture + "/zones.geojson";
  const std::string common = sites + " --demand-field pop";

  // Full pipeline: catchment, scores with classes, age adjustment.
  const auto pipeline = [&](const std::string& tag,
                            const std::string& env) -> std::string {
    const std::string matrix = (g_tmp / ("det_matrix_" + tag + ".csv")).string();
    const std::string scores = (g_tmp / ("det_scores_" + tag + ".csv")).string();
    const std::string adjusted = (g_tmp / ("det_adjusted_" + tag + ".csv")).string();
    if (run_cli("catchment --network " + fixture + "/roads.csv " + sites +
                " --cutoff 30min -o " + matrix, env) != 0 ||
        run_cli("access --model e2sfca " + common + " --cost-matrix " + matrix +
                " --classes 3 -o " + scores, env) != 0 ||
        run_cli("demand --zones " + fixture + "/ages.csv --age-fields p0,p1,p2,p3,p4" +
                " --rates-file " + g_data + "/eskd_rates.csv -o " + adjusted, env) != 0) {
      return "";
    }
    return fca::read_file(matrix) + "\x1e" + fca::read_file(scores) + "\x1e" +
           fca::read_file(adjusted);
  };

  const auto base = pipeline("a", "");
  if (base.empty()) {
    detail = "pipeline run failed";
    return false;
  }
  if (pipeline("b", "") != base) {
    detail = "two identical runs differ";
    return false;
  }
  if (pipeline("t1", "FCA_THREADS=1") != base || pipeline("t4", "FCA_THREADS=4") != base) {
    detail = "thread count changed the output";
    return false;
  }
  detail = "byte-identical across repeat runs and 1 vs 4 threads";
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: fca_acceptance <fca-binary> <data-dir>\n";
    return 64;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_tmp = std::filesystem::temp_directory_path() / "fca_acceptance";
  std::filesystem::remove_all(g_tmp);
  std::filesystem::create_directories(g_tmp);

  const std::vector<std::pair<std::string, bool (*)(std::string&)>> criteria = {
      {"oracle equivalence", oracle_equivalence},
      {"supply conservation", supply_conservation},
      {"reduction law", reduction_law},
      {"age-weight table reproduction", table1_reproduction},
      {"routing correctness", routing_correctness},
      {"geometry correctness", geometry_correctness},
      {"natural-breaks optimality", jenks_optimality},
      {"synthetic case study", case_study},
      {"end-to-end determinism", determinism},
  };

  int failures = 0;
  for (const auto& [name, check] : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << ": " << name
              << (detail.empty() ? "" : " - " + detail) << "\n";
    if (!ok) ++failures;
  }
  return failures;
}
