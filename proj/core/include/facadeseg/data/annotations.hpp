#pragma once

#include <string>
#include <vector>

#include "facadeseg/geo/types.hpp"

namespace fseg::data {

struct AnnotationShape {
  std::string class_name;
  std::vector<geo::Vec2> ring;  // pixel coordinates, >= 3 vertices
};

// Polygon annotations for one image. Shapes of different classes may overlap;
// unknown_regions mark pixels with no reliable label in any class.
struct AnnotationSet {
  std::string image_id;
  int width = 0;
  int height = 0;
  double mpp = 0.0;
  std::vector<AnnotationShape> shapes;
  std::vector<std::vector<geo::Vec2>> unknown_regions;
};

// `vocab` gates class names; pass empty to accept anything.
void validate(const AnnotationSet& ann, const std::vector<std::string>& vocab);

AnnotationSet load_annotations(const std::string& path);
void save_annotations(const AnnotationSet& ann, const std::string& path);

}  // namespace fseg::data
