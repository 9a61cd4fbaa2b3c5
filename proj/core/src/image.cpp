#include "facadeseg/image.hpp"

namespace fseg {

namespace {

struct Taps {
  int x0, x1, y0, y1;
  double fx, fy;
};

Taps make_taps(double x, double y, int w, int h, bool wrap_x) {
  double sx = x - 0.5;
  double sy = y - 0.5;
  Taps t{};
  double fx0 = std::floor(sx);
  double fy0 = std::floor(sy);
  t.fx = sx - fx0;
  t.fy = sy - fy0;
  int x0 = static_cast<int>(fx0);
  int y0 = static_cast<int>(fy0);
  if (wrap_x) {
    auto wrap = [w](int v) {
      v %= w;
      return v < 0 ? v + w : v;
    };
    t.x0 = wrap(x0);
    t.x1 = wrap(x0 + 1);
  } else {
    t.x0 = std::clamp(x0, 0, w - 1);
    t.x1 = std::clamp(x0 + 1, 0, w - 1);
  }
  t.y0 = std::clamp(y0, 0, h - 1);
  t.y1 = std::clamp(y0 + 1, 0, h - 1);
  return t;
}

}  // namespace

std::array<double, 3> sample_bilinear(const RgbImage& img, double x, double y) {
  Taps t = make_taps(x, y, img.width, img.height, false);
  std::array<double, 3> out{};
  const std::uint8_t* p00 = img.pixel(t.x0, t.y0);
  const std::uint8_t* p10 = img.pixel(t.x1, t.y0);
  const std::uint8_t* p01 = img.pixel(t.x0, t.y1);
  const std::uint8_t* p11 = img.pixel(t.x1, t.y1);
  for (int c = 0; c < 3; ++c) {
    double top = p00[c] + (p10[c] - p00[c]) * t.fx;
    double bot = p01[c] + (p11[c] - p01[c]) * t.fx;
    out[c] = top + (bot - top) * t.fy;
  }
  return out;
}

std::array<double, 3> sample_bilinear_wrap_x(const RgbImage& img, double x, double y) {
  Taps t = make_taps(x, y, img.width, img.height, true);
  std::array<double, 3> out{};
  const std::uint8_t* p00 = img.pixel(t.x0, t.y0);
  const std::uint8_t* p10 = img.pixel(t.x1, t.y0);
  const std::uint8_t* p01 = img.pixel(t.x0, t.y1);
  const std::uint8_t* p11 = img.pixel(t.x1, t.y1);
  for (int c = 0; c < 3; ++c) {
    double top = p00[c] + (p10[c] - p00[c]) * t.fx;
    double bot = p01[c] + (p11[c] - p01[c]) * t.fx;
    out[c] = top + (bot - top) * t.fy;
  }
  return out;
}

RgbImage resize_bilinear(const RgbImage& src, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ValidationError("resize_bilinear: output size must be positive");
  if (out_w == src.width && out_h == src.height) return src;
  RgbImage dst(out_w, out_h);
  double sx = static_cast<double>(src.width) / out_w;
  double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      auto v = sample_bilinear(src, (x + 0.5) * sx, (y + 0.5) * sy);
      dst.set(x, y, clamp_u8(v[0]), clamp_u8(v[1]), clamp_u8(v[2]));
    }
  }
  return dst;
}

FloatPlane resize_bilinear(const FloatPlane& src, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ValidationError("resize_bilinear: output size must be positive");
  if (src.width < 1 || src.height < 1) throw ValidationError("resize_bilinear: empty source");
  if (out_w == src.width && out_h == src.height) return src;
  FloatPlane dst(out_w, out_h);
  double sx = static_cast<double>(src.width) / out_w;
  double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(src.height - 1));
    int y0 = static_cast<int>(fy);
    int y1 = std::min(y0 + 1, src.height - 1);
    double wy = fy - y0;
    for (int x = 0; x < out_w; ++x) {
      double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(src.width - 1));
      int x0 = static_cast<int>(fx);
      int x1 = std::min(x0 + 1, src.width - 1);
      double wx = fx - x0;
      double top = src.at(x0, y0) * (1 - wx) + src.at(x1, y0) * wx;
      double bot = src.at(x0, y1) * (1 - wx) + src.at(x1, y1) * wx;
      dst.at(x, y) = static_cast<float>(top * (1 - wy) + bot * wy);
    }
  }
  return dst;
}

GrayImage resize_nearest(const GrayImage& src, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ValidationError("resize_nearest: output size must be positive");
  if (out_w == src.width && out_h == src.height) return src;
  GrayImage dst(out_w, out_h);
  double sx = static_cast<double>(src.width) / out_w;
  double sy = static_cast<double>(src.height) / out_h;
  for (int y = 0; y < out_h; ++y) {
    int yy = std::clamp(static_cast<int>((y + 0.5) * sy), 0, src.height - 1);
    for (int x = 0; x < out_w; ++x) {
      int xx = std::clamp(static_cast<int>((x + 0.5) * sx), 0, src.width - 1);
      dst.at(x, y) = src.at(xx, yy);
    }
  }
  return dst;
}

}  // namespace fseg
