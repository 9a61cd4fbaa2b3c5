#pragma once

#include "facadeseg/geo/types.hpp"
#include "facadeseg/homography.hpp"
#include "facadeseg/image.hpp"

namespace fseg::geo {

struct RectifiedImage {
  RgbImage pixels;
  BoolPlane valid;  // 1 where the source quad covered the pixel
};

// Warps `src` by the homography mapping source coordinates to destination
// coordinates. Destination pixels whose preimage falls outside the source
// rectangle are black and flagged invalid in the mask.
RectifiedImage apply_rectification(const RgbImage& src, const Mat3& src_to_dst, int out_w,
                                   int out_h);

}  // namespace fseg::geo
