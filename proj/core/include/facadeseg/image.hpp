#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "facadeseg/common.hpp"

namespace fseg {

// Single-channel raster, row-major, origin at the top-left pixel.
template <typename T>
struct Plane {
  int width = 0;
  int height = 0;
  std::vector<T> px;

  Plane() = default;
  Plane(int w, int h, T fill = T()) : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

  T& at(int x, int y) { return px[static_cast<std::size_t>(y) * width + x]; }
  const T& at(int x, int y) const { return px[static_cast<std::size_t>(y) * width + x]; }
  bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
  bool same_size(const Plane& o) const { return width == o.width && height == o.height; }

  bool operator==(const Plane& o) const = default;
};

using GrayImage = Plane<std::uint8_t>;
using FloatPlane = Plane<float>;
using BoolPlane = Plane<std::uint8_t>;  // 0/1

// Interleaved 8-bit RGB raster.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 3 * width * height

  RgbImage() = default;
  RgbImage(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h * 3, 0) {}

  std::uint8_t* pixel(int x, int y) { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }
  const std::uint8_t* pixel(int x, int y) const { return &data[(static_cast<std::size_t>(y) * width + x) * 3]; }

  void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto* p = pixel(x, y);
    p[0] = r;
    p[1] = g;
    p[2] = b;
  }

  bool operator==(const RgbImage& o) const = default;
};

inline std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

// Bilinear fetch at continuous coordinates where pixel (i, j) is centered at
// (i + 0.5, j + 0.5). Coordinates are clamped to the image rectangle.
std::array<double, 3> sample_bilinear(const RgbImage& img, double x, double y);

// Same convention, but the x axis wraps (equirectangular panoramas).
std::array<double, 3> sample_bilinear_wrap_x(const RgbImage& img, double x, double y);

RgbImage resize_bilinear(const RgbImage& src, int out_w, int out_h);
FloatPlane resize_bilinear(const FloatPlane& src, int out_w, int out_h);
GrayImage resize_nearest(const GrayImage& src, int out_w, int out_h);

}  // namespace fseg
