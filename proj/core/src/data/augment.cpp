#include "facadeseg/data/augment.hpp"

#include <array>
#include <cmath>

namespace fseg::data {

namespace {

using Quad = std::array<std::array<double, 2>, 4>;

bool is_convex(const Quad& q) {
  double sign = 0;
  for (int i = 0; i < 4; ++i) {
    int j = (i + 1) % 4, k = (i + 2) % 4;
    double cross = (q[j][0] - q[i][0]) * (q[k][1] - q[j][1]) -
                   (q[j][1] - q[i][1]) * (q[k][0] - q[j][0]);
    if (cross == 0) return false;
    if (sign == 0)
      sign = cross;
    else if ((cross > 0) != (sign > 0))
      return false;
  }
  return true;
}

}  // namespace

WarpSample draw_warp(int width, int height, double max_disp_frac, Rng& rng, int max_retries) {
  if (max_disp_frac < 0) throw ValidationError("max_disp_frac must be >= 0");
  WarpSample sample;
  if (max_disp_frac == 0.0) {
    sample.identity = true;
    return sample;
  }

  double w = width, h = height;
  Quad src{{{0, 0}, {w, 0}, {w, h}, {0, h}}};
  double limit = max_disp_frac * w;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Quad dst;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 2; ++k) dst[i][k] = src[i][k] + rng.uniform(-limit, limit);
    if (!is_convex(dst)) continue;
    try {
      sample.homography = fit_homography(src, dst);
    } catch (const ValidationError&) {
      continue;
    }
    return sample;
  }
  sample.identity = true;
  sample.homography = Mat3::identity();
  return sample;
}

AugmentResult augment_perspective(const RgbImage& image, const MultiLabelMask& mask,
                                  double max_disp_frac, std::uint64_t seed) {
  if (image.width != mask.width || image.height != mask.height)
    throw ValidationError("augment: image and mask sizes differ");
  validate(mask);

  Rng rng(seed);
  WarpSample sample = draw_warp(image.width, image.height, max_disp_frac, rng);
  if (sample.identity) return {image, mask};

  Mat3 inv = sample.homography.inverse();
  AugmentResult out;
  out.image = RgbImage(image.width, image.height);
  out.mask = MultiLabelMask(mask.vocab, mask.width, mask.height);

  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      double sx, sy;
      bool inside = true;
      try {
        inv.apply(x + 0.5, y + 0.5, sx, sy);
      } catch (const ValidationError&) {
        inside = false;
      }
      if (inside && (sx < 0 || sx >= image.width || sy < 0 || sy >= image.height))
        inside = false;

      if (!inside) {
        for (auto& plane : out.mask.planes) plane.at(x, y) = UNK;
        continue;
      }
      auto rgb = sample_bilinear(image, sx, sy);
      out.image.set(x, y, clamp_u8(rgb[0]), clamp_u8(rgb[1]), clamp_u8(rgb[2]));
      int nx = static_cast<int>(std::floor(sx));
      int ny = static_cast<int>(std::floor(sy));
      for (std::size_t c = 0; c < mask.planes.size(); ++c)
        out.mask.planes[c].at(x, y) = mask.planes[c].at(nx, ny);
    }
  }
  return out;
}

}  // namespace fseg::data
