#include "facadeseg/geo/rectify.hpp"

#include "facadeseg/common.hpp"

namespace fseg::geo {

RectifiedImage apply_rectification(const RgbImage& src, const Mat3& src_to_dst, int out_w,
                                   int out_h) {
  if (src.width <= 0 || src.height <= 0) throw ValidationError("rectify: empty source image");
  if (out_w <= 0 || out_h <= 0) throw ValidationError("rectify: output size must be positive");

  Mat3 inv = src_to_dst.inverse();
  RectifiedImage out;
  out.pixels = RgbImage(out_w, out_h);
  out.valid = BoolPlane(out_w, out_h, 0);

  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double sx, sy;
      try {
        inv.apply(x + 0.5, y + 0.5, sx, sy);
      } catch (const RuntimeFailure&) {
        continue;  // point at infinity, leave invalid
      }
      if (sx < 0.0 || sx >= src.width || sy < 0.0 || sy >= src.height) continue;
      auto rgb = sample_bilinear(src, sx, sy);
      out.pixels.set(x, y, clamp_u8(rgb[0]), clamp_u8(rgb[1]), clamp_u8(rgb[2]));
      out.valid.at(x, y) = 1;
    }
  }
  return out;
}

}  // namespace fseg::geo
