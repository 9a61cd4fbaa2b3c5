#pragma once

#include <string>
#include <vector>

#include "facadeseg/data/annotations.hpp"
#include "facadeseg/data/mask.hpp"
#include "facadeseg/geo/types.hpp"

namespace fseg::data {

struct EdgeBandConfig {
  double band_m = 0.10;           // edge band half-width, all classes
  double facade_band_m = 0.3048;  // facade class, vertical edges only
  std::string facade_class = "facade";
};

// Even-odd membership test against pixel centers.
bool point_in_polygon(const std::vector<geo::Vec2>& ring, double x, double y);

// Fills pixels whose center lies inside the ring (even-odd rule) with 1.
void fill_polygon(const std::vector<geo::Vec2>& ring, BoolPlane& out);

// Per class: POS inside any polygon of the class, EDG within the metric band
// of any of its polygon edges, UNK inside any unknown region (all classes),
// NEG elsewhere. Precedence NEG < POS < EDG < UNK. The facade class bands
// only its near-vertical edges (|dy| > |dx|), at the wider facade width.
MultiLabelMask rasterize_multilabel(const AnnotationSet& ann,
                                    const std::vector<std::string>& vocab,
                                    const EdgeBandConfig& config = {});

}  // namespace fseg::data
