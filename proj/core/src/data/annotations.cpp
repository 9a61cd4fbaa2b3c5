#include "facadeseg/data/annotations.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "facadeseg/common.hpp"

namespace fseg::data {

using nlohmann::json;

namespace {

std::vector<geo::Vec2> parse_ring(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where + ": ring must be an array");
  std::vector<geo::Vec2> ring;
  for (const auto& pt : arr) {
    if (!pt.is_array() || pt.size() < 2)
      throw ValidationError(where + ": ring vertex must be [x, y]");
    ring.push_back({pt[0].get<double>(), pt[1].get<double>()});
  }
  return ring;
}

json dump_ring(const std::vector<geo::Vec2>& ring) {
  json arr = json::array();
  for (const auto& v : ring) arr.push_back(json::array({v.x, v.y}));
  return arr;
}

}  // namespace

void validate(const AnnotationSet& ann, const std::vector<std::string>& vocab) {
  if (ann.image_id.empty()) throw ValidationError("annotation has no image_id");
  if (ann.width <= 0 || ann.height <= 0)
    throw ValidationError(ann.image_id + ": image size must be positive");
  if (ann.mpp <= 0) throw ValidationError(ann.image_id + ": mpp must be positive");
  for (const auto& shape : ann.shapes) {
    if (!vocab.empty() &&
        std::find(vocab.begin(), vocab.end(), shape.class_name) == vocab.end())
      throw ValidationError(ann.image_id + ": class '" + shape.class_name +
                            "' not in vocabulary");
    if (shape.ring.size() < 3)
      throw ValidationError(ann.image_id + ": shape of class '" + shape.class_name +
                            "' has fewer than 3 vertices");
  }
  for (const auto& region : ann.unknown_regions)
    if (region.size() < 3)
      throw ValidationError(ann.image_id + ": unknown region has fewer than 3 vertices");
}

AnnotationSet load_annotations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }

  for (const char* field : {"image_id", "width", "height", "mpp"})
    if (!j.contains(field))
      throw ValidationError(path + ": missing '" + std::string(field) + "'");

  AnnotationSet ann;
  ann.image_id = j["image_id"].get<std::string>();
  ann.width = j["width"].get<int>();
  ann.height = j["height"].get<int>();
  ann.mpp = j["mpp"].get<double>();
  for (const auto& s : j.value("shapes", json::array())) {
    if (!s.contains("class") || !s.contains("ring"))
      throw ValidationError(path + ": shape needs 'class' and 'ring'");
    AnnotationShape shape;
    shape.class_name = s["class"].get<std::string>();
    shape.ring = parse_ring(s["ring"], path);
    ann.shapes.push_back(std::move(shape));
  }
  for (const auto& r : j.value("unknown_regions", json::array()))
    ann.unknown_regions.push_back(parse_ring(r, path));
  validate(ann, {});
  return ann;
}

void save_annotations(const AnnotationSet& ann, const std::string& path) {
  json shapes = json::array();
  for (const auto& s : ann.shapes)
    shapes.push_back({{"class", s.class_name}, {"ring", dump_ring(s.ring)}});
  json regions = json::array();
  for (const auto& r : ann.unknown_regions) regions.push_back(dump_ring(r));
  json j{{"image_id", ann.image_id}, {"width", ann.width},   {"height", ann.height},
         {"mpp", ann.mpp},           {"shapes", shapes},     {"unknown_regions", regions}};
  std::ofstream out(path);
  if (!out) throw RuntimeFailure("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace fseg::data
