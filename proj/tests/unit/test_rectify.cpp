#include <doctest.h>

#include "facadeseg/geo/rectify.hpp"
#include "helpers.hpp"

using namespace fseg;
using namespace fseg::geo;

TEST_CASE("identity rectification copies the image and marks all valid") {
  RgbImage src = fseg::test::random_rgb(12, 9, 21);
  RectifiedImage out = apply_rectification(src, Mat3::identity(), 12, 9);
  CHECK(out.pixels == src);
  for (std::uint8_t v : out.valid.px) CHECK(v == 1);
}

TEST_CASE("translation shifts content and invalidates uncovered pixels") {
  RgbImage src(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) src.set(x, y, static_cast<std::uint8_t>(x * 30), 0, 0);
  // Destination x = source x + 3.
  RectifiedImage out = apply_rectification(src, Mat3::translation(3, 0), 8, 8);
  CHECK(out.valid.at(0, 4) == 0);
  CHECK(out.valid.at(2, 4) == 0);
  CHECK(out.valid.at(3, 4) == 1);
  CHECK(out.pixels.pixel(0, 4)[0] == 0);
  CHECK(out.pixels.pixel(5, 4)[0] == src.pixel(2, 4)[0]);
}

TEST_CASE("fitted square-to-square homography acts as identity") {
  RgbImage src = fseg::test::random_rgb(16, 16, 8);
  std::array<std::array<double, 2>, 4> corners = {{{0, 0}, {16, 0}, {16, 16}, {0, 16}}};
  Mat3 h = fit_homography(corners, corners);
  RectifiedImage out = apply_rectification(src, h, 16, 16);
  int mismatches = 0;
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      for (int c = 0; c < 3; ++c)
        if (std::abs(out.pixels.pixel(x, y)[c] - src.pixel(x, y)[c]) > 1) ++mismatches;
  CHECK(mismatches == 0);
}
