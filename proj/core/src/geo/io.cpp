#include "facadeseg/geo/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "facadeseg/common.hpp"
#include "facadeseg/image_io.hpp"

namespace fseg::geo {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return j;
}

std::string sidecar_path(const std::string& png_path) {
  fs::path p(png_path);
  p.replace_extension(".json");
  return p.string();
}

}  // namespace

std::vector<FootprintPolygon> load_footprints_geojson(const std::string& path) {
  json j = load_json(path);
  if (j.value("type", "") != "FeatureCollection")
    throw ValidationError(path + ": expected a GeoJSON FeatureCollection");
  if (!j.contains("features") || !j["features"].is_array())
    throw ValidationError(path + ": missing features array");

  std::vector<FootprintPolygon> out;
  for (const auto& feat : j["features"]) {
    FootprintPolygon poly;
    if (feat.contains("id")) {
      const auto& id = feat["id"];
      poly.id = id.is_string() ? id.get<std::string>() : id.dump();
    } else if (feat.contains("properties") && feat["properties"].contains("id")) {
      const auto& id = feat["properties"]["id"];
      poly.id = id.is_string() ? id.get<std::string>() : id.dump();
    } else {
      throw ValidationError(path + ": feature without id");
    }

    const auto& geom = feat.value("geometry", json());
    if (geom.value("type", "") != "Polygon")
      throw ValidationError(path + ": feature " + poly.id + " is not a Polygon");
    const auto& rings = geom["coordinates"];
    if (!rings.is_array() || rings.empty())
      throw ValidationError(path + ": feature " + poly.id + " has no rings");
    for (const auto& pt : rings[0]) {
      if (!pt.is_array() || pt.size() < 2)
        throw ValidationError(path + ": feature " + poly.id + " has a malformed coordinate");
      poly.ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    if (poly.ring.size() >= 2 && poly.ring.front().x == poly.ring.back().x &&
        poly.ring.front().y == poly.ring.back().y)
      poly.ring.pop_back();
    if (poly.ring.size() < 3)
      throw ValidationError(path + ": feature " + poly.id + " has fewer than 3 vertices");
    out.push_back(std::move(poly));
  }
  return out;
}

std::vector<SphereRecord> load_sphere_manifest(const std::string& path) {
  json j = load_json(path);
  const json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("spheres"))
      throw ValidationError(path + ": expected an array or an object with 'spheres'");
    arr = &j["spheres"];
  }
  if (!arr->is_array()) throw ValidationError(path + ": sphere manifest must be an array");

  fs::path base = fs::path(path).parent_path();
  std::vector<SphereRecord> out;
  for (const auto& e : *arr) {
    for (const char* field : {"id", "image_path", "x", "y", "heading_deg"})
      if (!e.contains(field))
        throw ValidationError(path + ": sphere record missing '" + std::string(field) + "'");
    SphereRecord rec;
    rec.id = e["id"].get<std::string>();
    std::string img = e["image_path"].get<std::string>();
    rec.image_path = fs::path(img).is_absolute() ? img : (base / img).string();
    rec.x = e["x"].get<double>();
    rec.y = e["y"].get<double>();
    if (e.contains("z")) rec.z = e["z"].get<double>();
    rec.heading_deg = e["heading_deg"].get<double>();
    out.push_back(std::move(rec));
  }
  return out;
}

Photosphere load_photosphere(const SphereRecord& rec) {
  Photosphere s;
  s.id = rec.id;
  s.center = {rec.x, rec.y, rec.z};
  double h = rec.heading_deg * kPi / 180.0;
  h = std::fmod(h, 2.0 * kPi);
  if (h < 0) h += 2.0 * kPi;
  s.heading = h;
  s.image = read_image(rec.image_path);
  return s;
}

void save_facade_image(const FacadeImage& img, const std::string& png_path) {
  write_png_rgb(png_path, img.pixels);
  json side{{"quad_id", img.quad_id},
            {"photosphere_id", img.photosphere_id},
            {"mpp", img.mpp},
            {"width", img.pixels.width},
            {"height", img.pixels.height}};
  std::ofstream out(sidecar_path(png_path));
  if (!out) throw RuntimeFailure("cannot write " + sidecar_path(png_path));
  out << side.dump(2) << "\n";
}

FacadeImage load_facade_image(const std::string& png_path) {
  FacadeImage img;
  img.pixels = read_png_rgb(png_path);
  json side = load_json(sidecar_path(png_path));
  for (const char* field : {"quad_id", "photosphere_id", "mpp"})
    if (!side.contains(field))
      throw ValidationError(sidecar_path(png_path) + ": missing '" + std::string(field) + "'");
  img.quad_id = side["quad_id"].get<std::string>();
  img.photosphere_id = side["photosphere_id"].get<std::string>();
  img.mpp = side["mpp"].get<double>();
  if (side.contains("width") && side["width"].get<int>() != img.pixels.width)
    throw ValidationError(png_path + ": sidecar width does not match image");
  if (side.contains("height") && side["height"].get<int>() != img.pixels.height)
    throw ValidationError(png_path + ": sidecar height does not match image");
  return img;
}

}  // namespace fseg::geo
