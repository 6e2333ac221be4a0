#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fca/classify.hpp"
#include "fca/cost_matrix.hpp"
#include "fca/csv.hpp"
#include "fca/demand.hpp"
#include "fca/engine.hpp"
#include "fca/errors.hpp"
#include "fca/model.hpp"
#include "fca/network.hpp"

namespace fca {

using Json = nlohmann::ordered_json;

enum class FileFormat { GeoJson, Csv };

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write file: " + path);
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

// Format from the extension, falling back to content sniffing.
inline FileFormat detect_format(const std::string& path, std::string_view content) {
  std::string ext;
  const auto dot = path.rfind('.');
  if (dot != std::string::npos) {
    ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  }
  if (ext == "json" || ext == "geojson") return FileFormat::GeoJson;
  if (ext == "csv") return FileFormat::Csv;
  const auto first = content.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && (content[first] == '{' || content[first] == '[')) {
    return FileFormat::GeoJson;
  }
  return FileFormat::Csv;
}

namespace detail {

inline Json parse_json(std::string_view text, const std::string& context) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw IoError(context + ": malformed JSON");
  }
  return doc;
}

inline const Json& feature_collection(const Json& doc, const std::string& context) {
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw IoError(context + ": expected a GeoJSON FeatureCollection");
  }
  return doc["features"];
}

inline std::string id_from_json(const Json& value, const std::string& context) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_unsigned()) return std::to_string(value.get<unsigned long long>());
  throw ValidationError(context + ": id must be a string or integer");
}

inline double number_from_json(const Json& value, const std::string& context) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_double(value.get<std::string>(), context);
  throw ValidationError(context + ": expected a number");
}

inline const Json& require_property(const Json& properties, const std::string& field,
                                    const std::string& context) {
  if (!properties.is_object() || !properties.contains(field)) {
    throw SchemaError(context + ": missing field \"" + field + "\"");
  }
  return properties[field];
}

inline std::array<double, 2> position_from_json(const Json& coords, const std::string& context) {
  if (!coords.is_array() || coords.size() < 2 || !coords[0].is_number() ||
      !coords[1].is_number()) {
    throw IoError(context + ": malformed coordinate pair");
  }
  return {coords[0].get<double>(), coords[1].get<double>()};
}

inline Ring ring_from_json(const Json& array, const std::string& context) {
  if (!array.is_array()) {
    throw IoError(context + ": malformed ring");
  }
  Ring ring;
  ring.reserve(array.size());
  for (const auto& position : array) {
    ring.push_back(position_from_json(position, context));
  }
  return ring;
}

inline void throw_if_problems(std::vector<std::string>& problems, const std::string& what) {
  if (problems.empty()) return;
  std::string message = what + ":";
  for (const auto& p : problems) message += "\n  " + p;
  throw ValidationError(message);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Providers

struct ProviderLoadOptions {
  std::string id_field = "id";
  std::string capacity_field = "capacity";
  std::string x_field = "lon";  // CSV inputs only
  std::string y_field = "lat";
  Crs crs = Crs::LonLatDegrees;
};

inline std::vector<ProviderSite> parse_providers_geojson(std::string_view text,
                                                         const ProviderLoadOptions& options) {
  const Json doc = detail::parse_json(text, "providers");
  const Json& features = detail::feature_collection(doc, "providers");
  std::vector<ProviderSite> sites;
  std::vector<std::string> problems;
  sites.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Json& feature = features[i];
    const std::string context = "provider feature " + std::to_string(i);
    const Json& properties = feature.contains("properties") ? feature["properties"] : Json();
    ProviderSite site;
    site.id = detail::id_from_json(
        detail::require_property(properties, options.id_field, context), context);
    if (!feature.contains("geometry") || feature["geometry"].value("type", "") != "Point") {
      throw IoError(context + ": providers must be Point features");
    }
    const auto position =
        detail::position_from_json(feature["geometry"]["coordinates"], context);
    site.location = GeoPoint{position[0], position[1], options.crs};
    try {
      site.capacity = detail::number_from_json(
          detail::require_property(properties, options.capacity_field, context),
          context + " capacity");
    } catch (const ValidationError& e) {
      problems.emplace_back(e.what());
    }
    sites.push_back(std::move(site));
  }
  detail::throw_if_problems(problems, "provider load failed");
  validate_providers(sites);
  return sites;
}

inline std::vector<ProviderSite> parse_providers_csv(std::string_view text,
                                                     const ProviderLoadOptions& options) {
  const CsvTable table = parse_csv(text);
  for (const std::string& field :
       {options.id_field, options.capacity_field, options.x_field, options.y_field}) {
    if (table.column(field) < 0) {
      throw SchemaError("providers: missing column \"" + field + "\"");
    }
  }
  const int id_col = table.column(options.id_field);
  const int cap_col = table.column(options.capacity_field);
  const int x_col = table.column(options.x_field);
  const int y_col = table.column(options.y_field);
  std::vector<ProviderSite> sites;
  std::vector<std::string> problems;
  sites.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = "provider row " + std::to_string(i);
    ProviderSite site;
    site.id = row[id_col];
    try {
      site.location = GeoPoint{parse_double(row[x_col], context + " x"),
                               parse_double(row[y_col], context + " y"), options.crs};
      site.capacity = parse_double(row[cap_col], context + " capacity");
    } catch (const ValidationError& e) {
      problems.emplace_back(e.what());
    }
    sites.push_back(std::move(site));
  }
  detail::throw_if_problems(problems, "provider load failed");
  validate_providers(sites);
  return sites;
}

inline std::vector<ProviderSite> load_providers(const std::string& path,
                                                const ProviderLoadOptions& options = {}) {
  const std::string text = read_file(path);
  return detect_format(path, text) == FileFormat::GeoJson ? parse_providers_geojson(text, options)
                                                          : parse_providers_csv(text, options);
}

inline std::string serialize_providers_geojson(std::span<const ProviderSite> sites,
                                               const ProviderLoadOptions& options = {}) {
  Json features = Json::array();
  for (const auto& site : sites) {
    Json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Point"},
                           {"coordinates", Json::array({site.location.x, site.location.y})}};
    feature["properties"][options.id_field] = site.id;
    feature["properties"][options.capacity_field] = site.capacity;
    features.push_back(std::move(feature));
  }
  Json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Zones

struct ZoneLoadOptions {
  std::string id_field = "id";
  std::string demand_field;             // exactly one of demand_field /
  std::vector<std::string> age_fields;  // age_fields, unless geometry_only
  bool geometry_only = false;           // catchment step: id + shape suffice
  std::string x_field = "lon";          // CSV inputs only
  std::string y_field = "lat";
  Crs crs = Crs::LonLatDegrees;
};

namespace detail {

inline void check_zone_options(const ZoneLoadOptions& options) {
  if (options.geometry_only) return;
  const bool has_demand = !options.demand_field.empty();
  const bool has_ages = !options.age_fields.empty();
  if (has_demand == has_ages) {
    throw ContractError("zone load: exactly one of demand_field / age_fields must be given");
  }
}

inline void read_zone_values(DemandZone& zone, const Json& properties,
                             const ZoneLoadOptions& options, const std::string& context,
                             std::vector<std::string>& problems) {
  if (options.geometry_only) return;
  try {
    if (!options.demand_field.empty()) {
      zone.demand = number_from_json(require_property(properties, options.demand_field, context),
                                     context + " demand");
    } else {
      for (const auto& field : options.age_fields) {
        zone.age_counts.push_back(number_from_json(
            require_property(properties, field, context), context + " age band \"" + field + "\""));
      }
    }
  } catch (const ValidationError& e) {
    problems.emplace_back(e.what());
  }
}

inline std::vector<Polygon> polygons_from_geometry(const Json& geometry,
                                                   const std::string& context) {
  const std::string type = geometry.value("type", "");
  std::vector<Polygon> polygons;
  if (type == "Polygon") {
    Polygon polygon;
    for (const auto& ring : geometry["coordinates"]) {
      polygon.rings.push_back(ring_from_json(ring, context));
    }
    polygons.push_back(std::move(polygon));
  } else if (type == "MultiPolygon") {
    for (const auto& poly : geometry["coordinates"]) {
      Polygon polygon;
      for (const auto& ring : poly) {
        polygon.rings.push_back(ring_from_json(ring, context));
      }
      polygons.push_back(std::move(polygon));
    }
  } else {
    throw IoError(context + ": unsupported geometry type \"" + type + "\"");
  }
  return polygons;
}

}  // namespace detail

inline std::vector<DemandZone> parse_zones_geojson(std::string_view text,
                                                   const ZoneLoadOptions& options) {
  detail::check_zone_options(options);
  const Json doc = detail::parse_json(text, "zones");
  const Json& features = detail::feature_collection(doc, "zones");
  std::vector<DemandZone> zones;
  std::vector<std::string> problems;
  zones.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Json& feature = features[i];
    const std::string context = "zone feature " + std::to_string(i);
    const Json& properties = feature.contains("properties") ? feature["properties"] : Json();
    DemandZone zone;
    zone.id = detail::id_from_json(
        detail::require_property(properties, options.id_field, context), context);
    if (!feature.contains("geometry") || !feature["geometry"].is_object()) {
      throw IoError(context + ": missing geometry");
    }
    const Json& geometry = feature["geometry"];
    if (geometry.value("type", "") == "Point") {
      const auto position = detail::position_from_json(geometry["coordinates"], context);
      zone.geometry = ZoneGeometry::from_point(GeoPoint{position[0], position[1], options.crs});
    } else {
      auto polygons =
          detail::polygons_from_geometry(geometry, context + " (id \"" + zone.id + "\")");
      validate_rings(polygons, "zone \"" + zone.id + "\"");
      zone.geometry = ZoneGeometry::from_polygons(std::move(polygons), options.crs);
    }
    detail::read_zone_values(zone, properties, options, context, problems);
    zone.properties = properties.is_object() ? properties : Json::object();
    zones.push_back(std::move(zone));
  }
  detail::throw_if_problems(problems, "zone load failed");
  validate_zones(zones);
  return zones;
}

inline std::vector<DemandZone> parse_zones_csv(std::string_view text,
                                               const ZoneLoadOptions& options) {
  detail::check_zone_options(options);
  const CsvTable table = parse_csv(text);
  std::vector<std::string> required = {options.id_field, options.x_field, options.y_field};
  if (!options.geometry_only) {
    if (!options.demand_field.empty()) required.push_back(options.demand_field);
    for (const auto& field : options.age_fields) required.push_back(field);
  }
  for (const auto& field : required) {
    if (table.column(field) < 0) {
      throw SchemaError("zones: missing column \"" + field + "\"");
    }
  }
  std::vector<DemandZone> zones;
  std::vector<std::string> problems;
  zones.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = "zone row " + std::to_string(i);
    DemandZone zone;
    zone.id = row[table.column(options.id_field)];
    try {
      zone.geometry = ZoneGeometry::from_point(
          GeoPoint{parse_double(row[table.column(options.x_field)], context + " x"),
                   parse_double(row[table.column(options.y_field)], context + " y"), options.crs});
      if (!options.geometry_only) {
        if (!options.demand_field.empty()) {
          zone.demand = parse_double(row[table.column(options.demand_field)], context + " demand");
        } else {
          for (const auto& field : options.age_fields) {
            zone.age_counts.push_back(
                parse_double(row[table.column(field)], context + " age band \"" + field + "\""));
          }
        }
      }
    } catch (const ValidationError& e) {
      problems.emplace_back(e.what());
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      zone.properties[table.header[c]] = row[c];
    }
    zones.push_back(std::move(zone));
  }
  detail::throw_if_problems(problems, "zone load failed");
  validate_zones(zones);
  return zones;
}

inline std::vector<DemandZone> load_zones(const std::string& path,
                                          const ZoneLoadOptions& options) {
  const std::string text = read_file(path);
  return detect_format(path, text) == FileFormat::GeoJson ? parse_zones_geojson(text, options)
                                                          : parse_zones_csv(text, options);
}

namespace detail {

inline Json geometry_to_json(const ZoneGeometry& geometry) {
  Json out;
  if (geometry.is_point()) {
    const auto& p = std::get<std::array<double, 2>>(geometry.shape);
    out["type"] = "Point";
    out["coordinates"] = Json::array({p[0], p[1]});
    return out;
  }
  const auto& polygons = std::get<std::vector<Polygon>>(geometry.shape);
  auto ring_json = [](const Ring& ring) {
    Json array = Json::array();
    for (const auto& v : ring) array.push_back(Json::array({v[0], v[1]}));
    return array;
  };
  if (polygons.size() == 1) {
    out["type"] = "Polygon";
    Json rings = Json::array();
    for (const auto& ring : polygons[0].rings) rings.push_back(ring_json(ring));
    out["coordinates"] = std::move(rings);
  } else {
    out["type"] = "MultiPolygon";
    Json polys = Json::array();
    for (const auto& polygon : polygons) {
      Json rings = Json::array();
      for (const auto& ring : polygon.rings) rings.push_back(ring_json(ring));
      polys.push_back(std::move(rings));
    }
    out["coordinates"] = std::move(polys);
  }
  return out;
}

}  // namespace detail

struct ZoneWriteOptions {
  std::string id_field = "id";
  std::string demand_field = "demand";  // skipped when empty or demand unset
  std::vector<std::string> age_fields;  // written from age_counts when given
};

inline std::string serialize_zones_geojson(std::span<const DemandZone> zones,
                                           const ZoneWriteOptions& options = {}) {
  Json features = Json::array();
  for (const auto& zone : zones) {
    Json feature;
    feature["type"] = "Feature";
    feature["geometry"] = detail::geometry_to_json(zone.geometry);
    Json properties = zone.properties.is_object() ? zone.properties : Json::object();
    properties[options.id_field] = zone.id;
    if (!options.demand_field.empty() && zone.demand) {
      properties[options.demand_field] = *zone.demand;
    }
    for (std::size_t b = 0; b < options.age_fields.size() && b < zone.age_counts.size(); ++b) {
      properties[options.age_fields[b]] = zone.age_counts[b];
    }
    feature["properties"] = std::move(properties);
    features.push_back(std::move(feature));
  }
  Json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

inline std::string serialize_zones_csv(std::span<const DemandZone> zones,
                                       const ZoneWriteOptions& options = {},
                                       const std::string& x_field = "lon",
                                       const std::string& y_field = "lat") {
  std::string out = csv_escape(options.id_field) + "," + x_field + "," + y_field;
  const bool with_demand = !options.demand_field.empty();
  if (with_demand) out += "," + csv_escape(options.demand_field);
  for (const auto& field : options.age_fields) out += "," + csv_escape(field);
  out += "\n";
  for (const auto& zone : zones) {
    if (!zone.geometry.is_point()) {
      throw IoError("zone \"" + zone.id + "\": polygon zones cannot be written as CSV");
    }
    const auto& p = std::get<std::array<double, 2>>(zone.geometry.shape);
    out += csv_escape(zone.id) + "," + format_double(p[0]) + "," + format_double(p[1]);
    if (with_demand) out += "," + (zone.demand ? format_double(*zone.demand) : std::string());
    for (std::size_t b = 0; b < options.age_fields.size(); ++b) {
      out += "," + (b < zone.age_counts.size() ? format_double(zone.age_counts[b]) : std::string());
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Road network

struct RoadLoadOptions {
  Crs crs = Crs::LonLatDegrees;
};

inline RoadNetwork parse_road_network_csv(std::string_view text,
                                          const RoadLoadOptions& options = {}) {
  const CsvTable table = parse_csv(text);
  for (const std::string field :
       {"from_id", "to_id", "from_x", "from_y", "to_x", "to_y", "cost_s"}) {
    if (table.column(field) < 0) {
      throw SchemaError("road network: missing column \"" + field + "\"");
    }
  }
  const int oneway_col = table.column("oneway");
  std::map<std::string, GeoPoint> nodes;
  std::vector<RoadEdge> edges;
  auto add_node = [&](const std::string& id, double x, double y, std::size_t row) {
    const GeoPoint point{x, y, options.crs};
    const auto [it, inserted] = nodes.emplace(id, point);
    if (!inserted && !(it->second == point)) {
      throw ValidationError("road edge " + std::to_string(row) + ": node \"" + id +
                            "\" re-declared with different coordinates");
    }
  };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string context = "road edge " + std::to_string(i);
    RoadEdge edge;
    edge.from_id = row[table.column("from_id")];
    edge.to_id = row[table.column("to_id")];
    edge.cost_s = parse_double(row[table.column("cost_s")], context + " cost_s");
    if (!std::isfinite(edge.cost_s) || edge.cost_s <= 0.0) {
      throw ValidationError(context + ": cost_s must be > 0");
    }
    if (oneway_col >= 0) {
      const std::string& flag = row[oneway_col];
      if (flag == "true") {
        edge.bidirectional = false;
      } else if (flag != "false" && !flag.empty()) {
        throw ValidationError(context + ": oneway must be true or false, got \"" + flag + "\"");
      }
    }
    add_node(edge.from_id, parse_double(row[table.column("from_x")], context + " from_x"),
             parse_double(row[table.column("from_y")], context + " from_y"), i);
    add_node(edge.to_id, parse_double(row[table.column("to_x")], context + " to_x"),
             parse_double(row[table.column("to_y")], context + " to_y"), i);
    edges.push_back(std::move(edge));
  }
  std::vector<std::pair<std::string, GeoPoint>> node_list(nodes.begin(), nodes.end());
  return RoadNetwork::build(std::move(node_list), edges);
}

inline RoadNetwork parse_road_network_geojson(std::string_view text,
                                              const RoadLoadOptions& options = {}) {
  const Json doc = detail::parse_json(text, "road network");
  const Json& features = detail::feature_collection(doc, "road network");
  std::map<std::string, GeoPoint> nodes;
  std::vector<RoadEdge> edges;
  const DistanceMetric metric = metric_for(options.crs);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Json& feature = features[i];
    const std::string context = "road feature " + std::to_string(i);
    if (!feature.contains("geometry") ||
        feature["geometry"].value("type", "") != "LineString") {
      throw IoError(context + ": expected LineString features");
    }
    const Json& properties = feature.contains("properties") ? feature["properties"] : Json();
    const double cost_s = detail::number_from_json(
        detail::require_property(properties, "cost_s", context), context + " cost_s");
    if (!std::isfinite(cost_s) || cost_s <= 0.0) {
      throw ValidationError(context + ": cost_s must be > 0");
    }
    const bool oneway = properties.is_object() && properties.value("oneway", false);

    const Json& coordinates = feature["geometry"]["coordinates"];
    if (!coordinates.is_array() || coordinates.size() < 2) {
      throw IoError(context + ": LineString needs at least 2 positions");
    }
    std::vector<GeoPoint> vertices;
    vertices.reserve(coordinates.size());
    for (const auto& position : coordinates) {
      const auto p = detail::position_from_json(position, context);
      vertices.push_back(GeoPoint{p[0], p[1], options.crs});
    }
    // Node ids are canonical coordinate strings, so shared endpoints merge.
    auto node_id = [](const GeoPoint& p) {
      return format_double(p.x) + "," + format_double(p.y);
    };
    std::vector<double> lengths;
    double total = 0.0;
    for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
      const double length = distance(vertices[v], vertices[v + 1], metric);
      lengths.push_back(length);
      total += length;
    }
    if (!(total > 0.0)) {
      throw ValidationError(context + ": zero-length LineString");
    }
    for (std::size_t v = 0; v + 1 < vertices.size(); ++v) {
      if (lengths[v] <= 0.0) continue;  // repeated vertex
      const std::string from = node_id(vertices[v]);
      const std::string to = node_id(vertices[v + 1]);
      nodes.emplace(from, vertices[v]);
      nodes.emplace(to, vertices[v + 1]);
      edges.push_back(RoadEdge{from, to, cost_s * (lengths[v] / total), !oneway});
    }
  }
  std::vector<std::pair<std::string, GeoPoint>> node_list(nodes.begin(), nodes.end());
  return RoadNetwork::build(std::move(node_list), edges);
}

inline RoadNetwork load_road_network(const std::string& path, const RoadLoadOptions& options = {}) {
  const std::string text = read_file(path);
  return detect_format(path, text) == FileFormat::GeoJson
             ? parse_road_network_geojson(text, options)
             : parse_road_network_csv(text, options);
}

// ---------------------------------------------------------------------------
// Cost-matrix cache file

inline std::string serialize_cost_matrix(const CostMatrix& matrix) {
  std::string out = "zone_id,provider_id,cost_s\n";
  for (const auto& entry : matrix.entries) {
    out += csv_escape(entry.zone_id) + "," + csv_escape(entry.provider_id) + "," +
           format_double(entry.cost) + "\n";
  }
  return out;
}

inline CostMatrix parse_cost_matrix(std::string_view text) {
  const CsvTable table = parse_csv(text);
  for (const std::string field : {"zone_id", "provider_id", "cost_s"}) {
    if (table.column(field) < 0) {
      throw SchemaError("cost matrix: missing column \"" + field + "\"");
    }
  }
  CostMatrix matrix;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    CostEntry entry;
    entry.zone_id = row[table.column("zone_id")];
    entry.provider_id = row[table.column("provider_id")];
    entry.cost = parse_double(row[table.column("cost_s")],
                              "cost matrix row " + std::to_string(i) + " cost_s");
    if (!std::isfinite(entry.cost) || entry.cost < 0.0) {
      throw ValidationError("cost matrix row " + std::to_string(i) +
                            ": cost_s must be finite and >= 0");
    }
    matrix.entries.push_back(std::move(entry));
  }
  matrix.canonicalize();
  return matrix;
}

inline void write_cost_matrix(const std::string& path, const CostMatrix& matrix) {
  write_file(path, serialize_cost_matrix(matrix));
}

inline CostMatrix load_cost_matrix(const std::string& path) {
  return parse_cost_matrix(read_file(path));
}

// ---------------------------------------------------------------------------
// Age-band rates file (band,rate_per_million)

inline std::vector<AgeBandRate> parse_age_rates_csv(std::string_view text) {
  const CsvTable table = parse_csv(text);
  for (const std::string field : {"band", "rate_per_million"}) {
    if (table.column(field) < 0) {
      throw SchemaError("age rates: missing column \"" + field + "\"");
    }
  }
  std::vector<AgeBandRate> rates;
  rates.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    rates.push_back(AgeBandRate{
        row[table.column("band")],
        parse_double(row[table.column("rate_per_million")],
                     "age rates row " + std::to_string(i))});
  }
  return rates;
}

inline std::vector<AgeBandRate> load_age_rates(const std::string& path) {
  return parse_age_rates_csv(read_file(path));
}

// ---------------------------------------------------------------------------
// Scored outputs

// Scored zone file: the input zones (geometry, ids, original properties)
// plus final_index, per-ring fields when the scheme has several rings, and
// the natural-breaks class when a classification is supplied.
inline std::string serialize_results_geojson(std::span<const DemandZone> zones,
                                             const AccessResult& result,
                                             const Classification* classification = nullptr) {
  if (zones.size() != result.zones.size()) {
    throw ContractError("write_results: result covers " + std::to_string(result.zones.size()) +
                        " zones but " + std::to_string(zones.size()) + " were given");
  }
  Json features = Json::array();
  for (const auto& zone : zones) {
    const ZoneAccess* access = result.find(zone.id);
    if (!access) {
      throw ContractError("write_results: no result for zone \"" + zone.id + "\"");
    }
    Json feature;
    feature["type"] = "Feature";
    feature["geometry"] = detail::geometry_to_json(zone.geometry);
    Json properties = zone.properties.is_object() ? zone.properties : Json::object();
    properties["final_index"] = access->final_index;
    if (result.ring_count >= 2) {
      for (std::size_t r = 0; r < access->ring_values.size(); ++r) {
        properties["ring_" + std::to_string(r + 1)] = access->ring_values[r];
      }
    }
    if (classification) {
      properties["access_class"] = classification->assignment.at(zone.id);
    }
    feature["properties"] = std::move(properties);
    features.push_back(std::move(feature));
  }
  Json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  return doc.dump(2) + "\n";
}

inline std::string serialize_results_csv(std::span<const DemandZone> zones,
                                         const AccessResult& result,
                                         const Classification* classification = nullptr) {
  if (zones.size() != result.zones.size()) {
    throw ContractError("write_results: result covers " + std::to_string(result.zones.size()) +
                        " zones but " + std::to_string(zones.size()) + " were given");
  }
  std::string out = "zone_id,final_index";
  if (result.ring_count >= 2) {
    for (std::size_t r = 1; r <= result.ring_count; ++r) {
      out += ",ring_" + std::to_string(r);
    }
  }
  if (classification) out += ",access_class";
  out += "\n";
  for (const auto& zone : zones) {
    const ZoneAccess* access = result.find(zone.id);
    if (!access) {
      throw ContractError("write_results: no result for zone \"" + zone.id + "\"");
    }
    out += csv_escape(zone.id) + "," + format_double(access->final_index);
    if (result.ring_count >= 2) {
      for (const double v : access->ring_values) out += "," + format_double(v);
    }
    if (classification) out += "," + std::to_string(classification->assignment.at(zone.id));
    out += "\n";
  }
  return out;
}

inline void write_results(const std::string& path, std::span<const DemandZone> zones,
                          const AccessResult& result, const Classification* classification,
                          FileFormat format) {
  write_file(path, format == FileFormat::GeoJson
                       ? serialize_results_geojson(zones, result, classification)
                       : serialize_results_csv(zones, result, classification));
}

// Step-1 side artifact: one row per provider.
inline std::string serialize_step1_csv(std::span<const ProviderRatio> ratios) {
  std::string out = "provider_id,ratio,weighted_demand,served\n";
  for (const auto& r : ratios) {
    out += csv_escape(r.provider_id) + "," + format_double(r.ratio) + "," +
           format_double(r.weighted_demand) + "," + (r.served ? "true" : "false") + "\n";
  }
  return out;
}

}  // namespace fca
