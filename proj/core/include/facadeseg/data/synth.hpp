#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facadeseg/data/annotations.hpp"
#include "facadeseg/image.hpp"

namespace fseg::data {

// Procedural facade generator: wall-colored canvas, a jittered window grid,
// sills directly below windows, balconies overlapping window bottoms, doors
// on the ground row, optional sill-colored decoy stripes far from windows
// (painted but never annotated).
struct SynthConfig {
  int width = 64, height = 64;
  double mpp = 0.05;
  int min_cols = 2, max_cols = 3;
  int min_rows = 2, max_rows = 2;
  bool doors = true;
  bool balconies = true;
  double balcony_prob = 0.5;  // first window always gets one when enabled
  bool sills = true;
  double sill_prob = 1.0;
  int decoy_stripes = 0;
  int decoy_clearance_px = 16;  // minimum Chebyshev gap between decoy and window
  double noise = 4.0;           // per-pixel uniform color jitter amplitude
};

// Class names emitted by the generator, in annotation order.
const std::vector<std::string>& synth_vocab();

struct SynthSample {
  RgbImage image;
  AnnotationSet annotations;
};

SynthSample synth_facade(const SynthConfig& config, const std::string& image_id,
                         std::uint64_t seed);

}  // namespace fseg::data
