#pragma once

#include <cstdint>

#include "facadeseg/common.hpp"
#include "facadeseg/data/mask.hpp"
#include "facadeseg/homography.hpp"
#include "facadeseg/image.hpp"

namespace fseg::data {

struct WarpSample {
  Mat3 homography;  // maps source corner coords to displaced coords
  bool identity = false;
};

// Displaces the 4 image corners uniformly in [-f*W, +f*W] per axis (W = image
// width for both axes) and fits the homography. Non-convex displaced quads
// are redrawn; after `max_retries` failures the identity is returned.
WarpSample draw_warp(int width, int height, double max_disp_frac, Rng& rng,
                     int max_retries = 100);

struct AugmentResult {
  RgbImage image;
  MultiLabelMask mask;
};

// Image warps bilinearly, labels nearest-neighbor. Pixels pulled from outside
// the source are black in the image and UNK in every class. Deterministic per
// seed; max_disp_frac == 0 returns the inputs unchanged.
AugmentResult augment_perspective(const RgbImage& image, const MultiLabelMask& mask,
                                  double max_disp_frac, std::uint64_t seed);

}  // namespace fseg::data
