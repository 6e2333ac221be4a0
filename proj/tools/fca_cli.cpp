// fca: floating catchment area accessibility scores for health services.
//
// Subcommands:
//   catchment  travel-time cost matrix from a road network
//   access     2SFCA / E2SFCA accessibility scores
//   demand     age-adjusted demand for zone files
//   classify   natural-breaks classes for a scored file
//
// Exit codes: 0 success, 1 invalid data, 2 file I/O, 3 usage.

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fca/fca.hpp"

namespace {

// Bad flag values and flag combinations; exits with code 3.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned threads_from_env() {
  const char* raw = std::getenv("FCA_THREADS");
  if (raw == nullptr || *raw == '\0') return 1;
  unsigned value = 0;
  const auto [ptr, ec] = std::from_chars(raw, raw + std::string_view(raw).size(), value);
  if (ec != std::errc() || *ptr != '\0' || value == 0) {
    throw UsageError("FCA_THREADS must be a positive integer, got \"" + std::string(raw) +
                     "\"");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& text, const std::string& flag) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    std::string token = text.substr(start, end - start);
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    token = first == std::string::npos ? "" : token.substr(first, last - first + 1);
    if (token.empty()) {
      throw UsageError(flag + ": empty entry in list \"" + text + "\"");
    }
    out.push_back(std::move(token));
    start = end + 1;
  }
  return out;
}

double number_or_usage(const std::string& token, const std::string& flag) {
  try {
    return fca::parse_double(token, flag);
  } catch (const fca::ValidationError& e) {
    throw UsageError(e.what());
  }
}

// Length with a required unit suffix: "5mi", "24km", "500m".
double parse_length_m(const std::string& token, const std::string& flag) {
  const auto value_of = [&](std::size_t suffix_len) {
    return number_or_usage(token.substr(0, token.size() - suffix_len), flag);
  };
  if (token.ends_with("mi")) return fca::miles_to_meters(value_of(2));
  if (token.ends_with("km")) return fca::kilometers_to_meters(value_of(2));
  if (token.ends_with("m")) return value_of(1);
  throw UsageError(flag + ": \"" + token + "\" needs a unit suffix (mi, km, or m)");
}

// Time in minutes unless suffixed: "10", "10min", "45s".
double parse_time_s(const std::string& token, const std::string& flag) {
  const auto value_of = [&](std::size_t suffix_len) {
    return number_or_usage(token.substr(0, token.size() - suffix_len), flag);
  };
  if (token.ends_with("min")) return value_of(3) * fca::kSecondsPerMinute;
  if (token.ends_with("s")) return value_of(1);
  return number_or_usage(token, flag) * fca::kSecondsPerMinute;
}

std::string join_doubles(std::span<const double> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += fca::format_double(values[i]);
  }
  return out;
}

std::string join_strings(std::span<const std::string> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += values[i];
  }
  return out;
}

// Output format: explicit flag wins, then the file extension.
fca::FileFormat output_format(const std::string& flag, const std::string& path) {
  if (flag == "csv") return fca::FileFormat::Csv;
  if (flag == "geojson") return fca::FileFormat::GeoJson;
  if (path.ends_with(".csv")) return fca::FileFormat::Csv;
  if (path.ends_with(".geojson") || path.ends_with(".json")) return fca::FileFormat::GeoJson;
  throw UsageError("cannot infer the output format of \"" + path +
                   "\"; pass --format csv|geojson");
}

// ---------------------------------------------------------------------------
// Shared input flags

struct ProviderFlags {
  std::string path;
  std::string id_field = "id";
  std::string capacity_field = "capacity";
};

struct ZoneFlags {
  std::string path;
  std::string id_field = "id";
};

struct CoordFlags {
  std::string x_field = "lon";
  std::string y_field = "lat";
  bool planar = false;

  fca::Crs crs() const { return planar ? fca::Crs::PlanarMeters : fca::Crs::LonLatDegrees; }
};

void add_provider_flags(CLI::App* cmd, ProviderFlags& flags) {
  cmd->add_option("--providers", flags.path, "Provider sites (GeoJSON or CSV)")->required();
  cmd->add_option("--provider-id-field", flags.id_field, "Provider id property")
      ->capture_default_str();
  cmd->add_option("--capacity-field", flags.capacity_field, "Provider capacity property")
      ->capture_default_str();
}

void add_zone_flags(CLI::App* cmd, ZoneFlags& flags) {
  cmd->add_option("--zones", flags.path, "Demand zones (GeoJSON or CSV)")->required();
  cmd->add_option("--zone-id-field", flags.id_field, "Zone id property")->capture_default_str();
}

void add_coord_flags(CLI::App* cmd, CoordFlags& flags) {
  cmd->add_option("--x-field", flags.x_field, "X/longitude column in CSV inputs")
      ->capture_default_str();
  cmd->add_option("--y-field", flags.y_field, "Y/latitude column in CSV inputs")
      ->capture_default_str();
  cmd->add_flag("--planar", flags.planar,
                "Coordinates are planar meters (default: lon/lat degrees)");
}

fca::ProviderLoadOptions provider_options(const ProviderFlags& p, const CoordFlags& c) {
  fca::ProviderLoadOptions options;
  options.id_field = p.id_field;
  options.capacity_field = p.capacity_field;
  options.x_field = c.x_field;
  options.y_field = c.y_field;
  options.crs = c.crs();
  return options;
}

fca::ZoneLoadOptions zone_options(const ZoneFlags& z, const CoordFlags& c) {
  fca::ZoneLoadOptions options;
  options.id_field = z.id_field;
  options.x_field = c.x_field;
  options.y_field = c.y_field;
  options.crs = c.crs();
  return options;
}

// ---------------------------------------------------------------------------
// catchment

struct CatchmentOptions {
  std::string network_path;
  ProviderFlags providers;
  ZoneFlags zones;
  CoordFlags coords;
  std::string cutoff = "10min";
  std::string direction = "demand-to-provider";
  double snap_tolerance_m = fca::kDefaultSnapToleranceMeters;
  bool strict = false;
  std::string output;
};

int run_catchment(const CatchmentOptions& opt, unsigned threads) {
  fca::RoadLoadOptions road_options;
  road_options.crs = opt.coords.crs();
  const auto network = fca::load_road_network(opt.network_path, road_options);
  const auto providers = fca::load_providers(opt.providers.path,
                                             provider_options(opt.providers, opt.coords));
  auto zone_opts = zone_options(opt.zones, opt.coords);
  zone_opts.geometry_only = true;
  const auto zones = fca::load_zones(opt.zones.path, zone_opts);

  const double cutoff_s = parse_time_s(opt.cutoff, "--cutoff");
  const auto direction = opt.direction == "provider-to-demand"
                             ? fca::Direction::ProviderToDemand
                             : fca::Direction::DemandToProvider;
  std::cout << "parameters: command=catchment network=" << opt.network_path
            << " providers=" << opt.providers.path << " zones=" << opt.zones.path
            << " cutoff_s=" << fca::format_double(cutoff_s)
            << " direction=" << fca::to_string(direction)
            << " snap_tolerance_m=" << fca::format_double(opt.snap_tolerance_m)
            << " strict=" << (opt.strict ? "true" : "false") << " threads=" << threads
            << " output=" << opt.output << "\n";

  const auto matrix = fca::build_cost_matrix(network, zones, providers, cutoff_s, direction,
                                             opt.snap_tolerance_m, threads);
  std::cout << "matrix: " << matrix.entries.size() << " entries, "
            << zones.size() - matrix.unreached_zones.size() << "/" << zones.size()
            << " zones snapped, "
            << providers.size() - matrix.unreached_providers.size() << "/" << providers.size()
            << " providers snapped\n";
  if (!matrix.unreached_zones.empty()) {
    std::cerr << "unreached zones: " << join_strings(matrix.unreached_zones) << "\n";
  }
  if (!matrix.unreached_providers.empty()) {
    std::cerr << "unreached providers: " << join_strings(matrix.unreached_providers) << "\n";
  }
  if (opt.strict &&
      (!matrix.unreached_zones.empty() || !matrix.unreached_providers.empty())) {
    std::cerr << "error: sites failed to snap and --strict is set\n";
    return 1;
  }
  if (matrix.entries.empty()) {
    std::cerr << "warning: no zone reaches any provider within the cutoff\n";
  }
  fca::write_cost_matrix(opt.output, matrix);
  return 0;
}

// ---------------------------------------------------------------------------
// demand adjustment shared by `access --age-fields` and `demand`

fca::AgeWeights resolve_age_weights(const std::vector<std::string>& bands,
                                    const std::string& rates_inline,
                                    const std::string& rates_path) {
  std::vector<fca::AgeBandRate> rates;
  if (!rates_path.empty()) {
    rates = fca::load_age_rates(rates_path);
  } else {
    const auto tokens = split_list(rates_inline, "--rates");
    rates.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      rates.push_back(fca::AgeBandRate{bands[std::min(i, bands.size() - 1)],
                                       number_or_usage(tokens[i], "--rates")});
    }
  }
  if (rates.size() != bands.size()) {
    throw fca::SchemaError("age rates carry " + std::to_string(rates.size()) +
                           " bands but --age-fields names " + std::to_string(bands.size()));
  }
  return fca::derive_age_weights(rates);
}

void apply_age_adjustment(std::vector<fca::DemandZone>& zones, const fca::AgeWeights& weights) {
  for (auto& zone : zones) {
    zone.demand = fca::age_adjusted_demand(zone.age_counts, weights);
  }
}

// ---------------------------------------------------------------------------
// access

struct AccessOptions {
  std::string model;
  ProviderFlags providers;
  ZoneFlags zones;
  CoordFlags coords;
  std::string demand_field = "demand";
  std::string buffer;
  std::string cost_matrix_path;
  std::string times;
  std::string weights;
  double gaussian_bandwidth = 0.0;
  double per_capita = 100'000.0;
  std::string age_fields;
  std::string rates;
  std::string rates_file;
  std::size_t classes = 0;
  std::string emit_step1;
  std::string format;
  std::string output;
};

std::vector<double> resolve_weights(const AccessOptions& opt,
                                    std::span<const double> thresholds) {
  if (opt.model == "2sfca") {
    if (!opt.weights.empty() || opt.gaussian_bandwidth > 0.0) {
      throw UsageError("--weights and --gaussian-bandwidth apply to --model e2sfca");
    }
    return {1.0};
  }
  if (opt.gaussian_bandwidth > 0.0) {
    if (!opt.weights.empty()) {
      throw UsageError("--weights and --gaussian-bandwidth are mutually exclusive");
    }
    return fca::gaussian_ring_weights(thresholds, opt.gaussian_bandwidth);
  }
  if (!opt.weights.empty()) {
    const auto tokens = split_list(opt.weights, "--weights");
    if (tokens.size() != thresholds.size()) {
      throw UsageError("--weights lists " + std::to_string(tokens.size()) + " values for " +
                       std::to_string(thresholds.size()) + " rings");
    }
    std::vector<double> weights;
    weights.reserve(tokens.size());
    for (const auto& token : tokens) weights.push_back(number_or_usage(token, "--weights"));
    return weights;
  }
  if (thresholds.size() == 3) return {1.0, 0.68, 0.22};
  if (thresholds.size() == 1) return {1.0};
  throw UsageError("no default weights for " + std::to_string(thresholds.size()) +
                   " rings; pass --weights");
}

int run_access(const AccessOptions& opt, unsigned threads) {
  (void)threads;  // scoring is a single deterministic pass
  const auto providers = fca::load_providers(opt.providers.path,
                                             provider_options(opt.providers, opt.coords));

  const bool age_mode = !opt.age_fields.empty();
  auto zone_opts = zone_options(opt.zones, opt.coords);
  std::vector<std::string> bands;
  if (age_mode) {
    if (opt.rates.empty() == opt.rates_file.empty()) {
      throw UsageError("--age-fields needs exactly one of --rates or --rates-file");
    }
    bands = split_list(opt.age_fields, "--age-fields");
    zone_opts.age_fields = bands;
  } else {
    zone_opts.demand_field = opt.demand_field;
  }
  auto zones = fca::load_zones(opt.zones.path, zone_opts);

  fca::AgeWeights age_weights;
  if (age_mode) {
    age_weights = resolve_age_weights(bands, opt.rates, opt.rates_file);
    apply_age_adjustment(zones, age_weights);
  }

  // Mobility source: straight-line buffers unless a cost matrix is given.
  const bool network_mode = !opt.cost_matrix_path.empty();
  std::vector<double> thresholds;
  if (network_mode) {
    auto tokens = opt.times.empty()
                      ? (opt.model == "e2sfca" ? std::vector<std::string>{"10", "20", "30"}
                                               : std::vector<std::string>{"30"})
                      : split_list(opt.times, "--times");
    for (const auto& token : tokens) thresholds.push_back(parse_time_s(token, "--times"));
  } else {
    auto tokens = opt.buffer.empty()
                      ? (opt.model == "e2sfca" ? std::vector<std::string>{"5mi", "10mi", "15mi"}
                                               : std::vector<std::string>{"15mi"})
                      : split_list(opt.buffer, "--buffer");
    for (const auto& token : tokens) thresholds.push_back(parse_length_m(token, "--buffer"));
  }
  if (opt.model == "2sfca" && thresholds.size() != 1) {
    throw UsageError("--model 2sfca takes a single threshold, got " +
                     std::to_string(thresholds.size()));
  }
  const auto weights = resolve_weights(opt, thresholds);
  if (weights.size() != thresholds.size()) {
    throw UsageError("--weights lists " + std::to_string(weights.size()) + " values for " +
                     std::to_string(thresholds.size()) + " rings");
  }
  const auto scheme = fca::RingScheme::make(thresholds, weights);

  fca::CostMatrix costs;
  std::string mobility;
  if (network_mode) {
    costs = fca::load_cost_matrix(opt.cost_matrix_path);
    std::set<std::string> zone_ids, provider_ids;
    for (const auto& zone : zones) zone_ids.insert(zone.id);
    for (const auto& provider : providers) provider_ids.insert(provider.id);
    for (const auto& entry : costs.entries) {
      if (!zone_ids.contains(entry.zone_id)) {
        throw fca::ValidationError("cost matrix references unknown zone \"" + entry.zone_id +
                                   "\"");
      }
      if (!provider_ids.contains(entry.provider_id)) {
        throw fca::ValidationError("cost matrix references unknown provider \"" +
                                   entry.provider_id + "\"");
      }
    }
    mobility = "network cost_matrix=" + opt.cost_matrix_path +
               " thresholds_s=" + join_doubles(scheme.thresholds());
  } else {
    const auto metric = fca::metric_for(opt.coords.crs());
    costs = fca::buffer_cost_matrix(providers, zones, scheme.max_threshold(), metric);
    mobility = "buffer metric=" + fca::to_string(metric) +
               " thresholds_m=" + join_doubles(scheme.thresholds());
  }

  std::cout << "parameters: command=access model=" << opt.model << " mobility=" << mobility
            << " weights=" << join_doubles(scheme.weights())
            << " per_capita=" << fca::format_double(opt.per_capita) << " demand="
            << (age_mode ? "age-adjusted bands=" + join_strings(bands) +
                               " band_weights=" +
                               [&] {
                                 std::vector<double> w;
                                 for (const auto& band : age_weights.bands)
                                   w.push_back(band.weight);
                                 return join_doubles(w);
                               }()
                         : "field:" + opt.demand_field)
            << " classes=" << opt.classes << " output=" << opt.output << "\n";

  const auto result = fca::accessibility(providers, zones, costs, scheme, opt.per_capita);

  if (!opt.emit_step1.empty()) {
    const auto ratios = fca::step1_ratios(providers, zones, costs, scheme);
    fca::write_file(opt.emit_step1, fca::serialize_step1_csv(ratios));
  }

  std::optional<fca::Classification> classification;
  if (opt.classes > 0) {
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(result.zones.size());
    for (const auto& zone : result.zones) scored.emplace_back(zone.zone_id, zone.final_index);
    classification = fca::jenks_breaks(scored, opt.classes);
    std::cout << "classes: breaks=" << join_doubles(classification->breaks)
              << " gvf=" << fca::format_double(classification->gvf) << "\n";
  }

  fca::write_results(opt.output, zones, result,
                     classification ? &*classification : nullptr,
                     output_format(opt.format, opt.output));

  const auto stats = fca::summary_stats(result);
  std::cout << "scored " << stats.count << " zones: min=" << fca::format_double(stats.min)
            << " max=" << fca::format_double(stats.max)
            << " mean=" << fca::format_double(stats.mean)
            << " median=" << fca::format_double(stats.median)
            << " zero_access=" << stats.zero_access_ids.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// demand

struct DemandOptions {
  ZoneFlags zones;
  CoordFlags coords;
  std::string age_fields;
  std::string rates;
  std::string rates_file;
  std::string out_field = "demand";
  std::string format;
  std::string output;
};

int run_demand(const DemandOptions& opt) {
  if (opt.rates.empty() == opt.rates_file.empty()) {
    throw UsageError("exactly one of --rates or --rates-file is required");
  }
  const auto bands = split_list(opt.age_fields, "--age-fields");
  auto zone_opts = zone_options(opt.zones, opt.coords);
  zone_opts.age_fields = bands;
  auto zones = fca::load_zones(opt.zones.path, zone_opts);

  const auto weights = resolve_age_weights(bands, opt.rates, opt.rates_file);
  apply_age_adjustment(zones, weights);

  std::vector<double> weight_values;
  double total = 0.0;
  for (const auto& band : weights.bands) weight_values.push_back(band.weight);
  for (const auto& zone : zones) total += *zone.demand;
  std::cout << "parameters: command=demand zones=" << opt.zones.path
            << " bands=" << join_strings(bands) << " weights=" << join_doubles(weight_values)
            << " out_field=" << opt.out_field << " output=" << opt.output << "\n";
  std::cout << "adjusted " << zones.size()
            << " zones: total_demand=" << fca::format_double(total) << "\n";

  fca::ZoneWriteOptions write;
  write.id_field = opt.zones.id_field;
  write.demand_field = opt.out_field;
  write.age_fields = bands;
  const auto format = output_format(opt.format, opt.output);
  fca::write_file(opt.output, format == fca::FileFormat::GeoJson
                                  ? fca::serialize_zones_geojson(zones, write)
                                  : fca::serialize_zones_csv(zones, write));
  return 0;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyOptions {
  std::string input;
  std::string id_field;  // empty: zone_id for csv, id for geojson
  std::string field = "final_index";
  std::size_t classes = 5;
  std::string output;
};

// Class of a value given ascending break upper bounds, 1-based.
std::size_t class_of(double value, std::span<const double> breaks) {
  const auto it = std::lower_bound(breaks.begin(), breaks.end(), value);
  return static_cast<std::size_t>(it - breaks.begin()) + 1;
}

int run_classify(const ClassifyOptions& opt) {
  const auto content = fca::read_file(opt.input);
  const auto format = fca::detect_format(opt.input, content);

  std::vector<std::pair<std::string, double>> scored;
  if (format == fca::FileFormat::Csv) {
    const auto table = fca::parse_csv(content);
    const std::string id_field = opt.id_field.empty() ? "zone_id" : opt.id_field;
    const int id_col = table.column(id_field);
    const int value_col = table.column(opt.field);
    if (id_col < 0) throw fca::SchemaError("classify: missing column \"" + id_field + "\"");
    if (value_col < 0) throw fca::SchemaError("classify: missing column \"" + opt.field + "\"");
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
      scored.emplace_back(table.rows[i][static_cast<std::size_t>(id_col)],
                          fca::parse_double(table.rows[i][static_cast<std::size_t>(value_col)],
                                            "classify row " + std::to_string(i)));
    }
    const auto classification = fca::jenks_breaks(scored, opt.classes);
    std::cout << "parameters: command=classify input=" << opt.input << " field=" << opt.field
              << " classes=" << opt.classes << "\n";
    std::cout << "breaks: " << join_doubles(classification.breaks)
              << " gvf=" << fca::format_double(classification.gvf) << "\n";
    if (!opt.output.empty()) {
      auto out_table = table;
      int class_col = out_table.column("access_class");
      if (class_col < 0) {
        out_table.header.push_back("access_class");
        class_col = static_cast<int>(out_table.header.size()) - 1;
        for (auto& row : out_table.rows) row.emplace_back();
      }
      for (std::size_t i = 0; i < out_table.rows.size(); ++i) {
        out_table.rows[i][static_cast<std::size_t>(class_col)] =
            std::to_string(class_of(scored[i].second, classification.breaks));
      }
      std::string text = join_strings(out_table.header) + "\n";
      for (const auto& row : out_table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i > 0) text += ",";
          text += fca::csv_escape(row[i]);
        }
        text += "\n";
      }
      fca::write_file(opt.output, text);
    }
    return 0;
  }

  auto doc = fca::detail::parse_json(content, opt.input);
  const auto& features = fca::detail::feature_collection(doc, opt.input);
  const std::string id_field = opt.id_field.empty() ? "id" : opt.id_field;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::string context = "feature " + std::to_string(i);
    const auto& properties = fca::detail::require_property(features[i], "properties", context);
    scored.emplace_back(
        fca::detail::id_from_json(fca::detail::require_property(properties, id_field, context),
                                  context),
        fca::detail::number_from_json(
            fca::detail::require_property(properties, opt.field, context), context));
  }
  const auto classification = fca::jenks_breaks(scored, opt.classes);
  std::cout << "parameters: command=classify input=" << opt.input << " field=" << opt.field
            << " classes=" << opt.classes << "\n";
  std::cout << "breaks: " << join_doubles(classification.breaks)
            << " gvf=" << fca::format_double(classification.gvf) << "\n";
  if (!opt.output.empty()) {
    for (std::size_t i = 0; i < scored.size(); ++i) {
      doc["features"][i]["properties"]["access_class"] =
          class_of(scored[i].second, classification.breaks);
    }
    fca::write_file(opt.output, doc.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floating catchment area accessibility scores for health services"};
  app.set_version_flag("--version", "fca 1.0.0");
  app.set_config("--config", "",
                 "Key=value file with flag defaults, keys under a [subcommand] section");
  app.require_subcommand(1);

  CatchmentOptions catchment_opt;
  auto* catchment = app.add_subcommand(
      "catchment", "Build a travel-time cost matrix over a road network");
  catchment->add_option("--network", catchment_opt.network_path,
                        "Road network (CSV edge list or GeoJSON LineStrings)")
      ->required();
  add_provider_flags(catchment, catchment_opt.providers);
  add_zone_flags(catchment, catchment_opt.zones);
  add_coord_flags(catchment, catchment_opt.coords);
  catchment->add_option("--cutoff", catchment_opt.cutoff,
                        "Travel-time cutoff, minutes unless suffixed (10min, 45s)")
      ->capture_default_str();
  catchment->add_option("--direction", catchment_opt.direction, "Travel direction")
      ->check(CLI::IsMember({"demand-to-provider", "provider-to-demand"}))
      ->capture_default_str();
  catchment->add_option("--snap-tolerance", catchment_opt.snap_tolerance_m,
                        "Max site-to-node snap distance in meters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  catchment->add_flag("--strict", catchment_opt.strict, "Fail when any site does not snap");
  catchment->add_option("-o,--output", catchment_opt.output, "Cost matrix CSV path")
      ->required();

  AccessOptions access_opt;
  auto* access = app.add_subcommand("access", "Compute 2SFCA or E2SFCA accessibility scores");
  access->add_option("--model", access_opt.model, "Accessibility model")
      ->check(CLI::IsMember({"2sfca", "e2sfca"}))
      ->required();
  add_provider_flags(access, access_opt.providers);
  add_zone_flags(access, access_opt.zones);
  add_coord_flags(access, access_opt.coords);
  access->add_option("--demand-field", access_opt.demand_field, "Zone demand property")
      ->capture_default_str();
  auto* buffer_opt = access->add_option(
      "--buffer", access_opt.buffer,
      "Straight-line ring radii with units, e.g. 5mi,10mi,15mi (default for this mode)");
  auto* matrix_opt = access->add_option("--cost-matrix", access_opt.cost_matrix_path,
                                        "Travel-time matrix from `fca catchment`");
  buffer_opt->excludes(matrix_opt);
  access->add_option("--times", access_opt.times,
                     "Travel-time rings in minutes, e.g. 10,20,30 (default for this mode)")
      ->needs(matrix_opt);
  access->add_option("--weights", access_opt.weights, "Ring decay weights (default 1,0.68,0.22)");
  access->add_option("--gaussian-bandwidth", access_opt.gaussian_bandwidth,
                     "Derive ring weights from a Gaussian with this bandwidth")
      ->check(CLI::PositiveNumber);
  access->add_option("--per-capita", access_opt.per_capita,
                     "Report scores per this many people")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  access->add_option("--age-fields", access_opt.age_fields,
                     "Age-band count properties; demand becomes age-adjusted");
  access->add_option("--rates", access_opt.rates,
                     "Demand rates per million per band, baseline first");
  access->add_option("--rates-file", access_opt.rates_file,
                     "CSV with band,rate_per_million rows");
  access->add_option("--classes", access_opt.classes,
                     "Append natural-breaks classes (0: none)")
      ->capture_default_str();
  access->add_option("--emit-step1", access_opt.emit_step1,
                     "Also write per-provider ratios to this CSV");
  access->add_option("--format", access_opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "geojson"}));
  access->add_option("-o,--output", access_opt.output, "Scored zone file")->required();

  DemandOptions demand_opt;
  auto* demand = app.add_subcommand("demand", "Write zones with age-adjusted demand");
  add_zone_flags(demand, demand_opt.zones);
  add_coord_flags(demand, demand_opt.coords);
  demand->add_option("--age-fields", demand_opt.age_fields, "Age-band count properties")
      ->required();
  demand->add_option("--rates", demand_opt.rates,
                     "Demand rates per million per band, baseline first");
  demand->add_option("--rates-file", demand_opt.rates_file,
                     "CSV with band,rate_per_million rows");
  demand->add_option("--out-field", demand_opt.out_field, "Name of the new demand property")
      ->capture_default_str();
  demand->add_option("--format", demand_opt.format, "Output format")
      ->check(CLI::IsMember({"csv", "geojson"}));
  demand->add_option("-o,--output", demand_opt.output, "Adjusted zone file")->required();

  ClassifyOptions classify_opt;
  auto* classify = app.add_subcommand("classify", "Natural-breaks classes for a scored file");
  classify->add_option("--input", classify_opt.input, "Scored file (CSV or GeoJSON)")
      ->required();
  classify->add_option("--id-field", classify_opt.id_field,
                       "Id column (default zone_id for CSV, id for GeoJSON)");
  classify->add_option("--field", classify_opt.field, "Value column to classify")
      ->capture_default_str();
  classify->add_option("--classes", classify_opt.classes, "Number of classes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  classify->add_option("-o,--output", classify_opt.output,
                       "Input copy with an access_class column (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    const unsigned threads = threads_from_env();
    if (catchment->parsed()) return run_catchment(catchment_opt, threads);
    if (access->parsed()) return run_access(access_opt, threads);
    if (demand->parsed()) return run_demand(demand_opt);
    return run_classify(classify_opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fca::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fca::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
