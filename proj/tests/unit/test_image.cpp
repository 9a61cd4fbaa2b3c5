#include <doctest.h>

#include "facadeseg/common.hpp"
#include "facadeseg/image.hpp"
#include "facadeseg/image_io.hpp"
#include "helpers.hpp"

using namespace fseg;

TEST_CASE("plane indexing and bounds") {
  GrayImage img(4, 3, 7);
  CHECK(img.at(0, 0) == 7);
  img.at(3, 2) = 9;
  CHECK(img.px[2 * 4 + 3] == 9);
  CHECK(img.in_bounds(0, 0));
  CHECK(img.in_bounds(3, 2));
  CHECK_FALSE(img.in_bounds(4, 0));
  CHECK_FALSE(img.in_bounds(0, -1));
}

TEST_CASE("bilinear sampling at pixel centers returns the pixel") {
  RgbImage img(3, 2);
  img.set(0, 0, 10, 20, 30);
  img.set(1, 0, 50, 60, 70);
  img.set(2, 0, 90, 100, 110);
  img.set(0, 1, 130, 140, 150);
  img.set(1, 1, 170, 180, 190);
  img.set(2, 1, 210, 220, 230);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) {
      auto rgb = sample_bilinear(img, x + 0.5, y + 0.5);
      const auto* p = img.pixel(x, y);
      CHECK(rgb[0] == doctest::Approx(p[0]));
      CHECK(rgb[1] == doctest::Approx(p[1]));
      CHECK(rgb[2] == doctest::Approx(p[2]));
    }
}

TEST_CASE("bilinear midpoint is the average of neighbors") {
  RgbImage img(2, 1);
  img.set(0, 0, 10, 0, 200);
  img.set(1, 0, 30, 100, 0);
  auto rgb = sample_bilinear(img, 1.0, 0.5);
  CHECK(rgb[0] == doctest::Approx(20.0));
  CHECK(rgb[1] == doctest::Approx(50.0));
  CHECK(rgb[2] == doctest::Approx(100.0));
}

TEST_CASE("bilinear clamps outside the image rectangle") {
  RgbImage img(2, 2);
  img.set(0, 0, 40, 40, 40);
  img.set(1, 0, 80, 80, 80);
  img.set(0, 1, 120, 120, 120);
  img.set(1, 1, 160, 160, 160);
  auto corner = sample_bilinear(img, -5.0, -5.0);
  CHECK(corner[0] == doctest::Approx(40.0));
  auto far = sample_bilinear(img, 100.0, 100.0);
  CHECK(far[0] == doctest::Approx(160.0));
}

TEST_CASE("wrapped sampling blends across the seam") {
  RgbImage img(4, 1);
  img.set(0, 0, 0, 0, 0);
  img.set(1, 0, 60, 0, 0);
  img.set(2, 0, 120, 0, 0);
  img.set(3, 0, 200, 0, 0);
  // x = 0 sits midway between the centers of column 3 and column 0.
  auto seam = sample_bilinear_wrap_x(img, 0.0, 0.5);
  CHECK(seam[0] == doctest::Approx(100.0));
  auto wrapped = sample_bilinear_wrap_x(img, 4.0, 0.5);
  CHECK(wrapped[0] == doctest::Approx(seam[0]));
}

TEST_CASE("resize to the same size copies pixels") {
  RgbImage img = fseg::test::random_rgb(9, 7, 123);
  RgbImage out = resize_bilinear(img, 9, 7);
  CHECK(out == img);
}

TEST_CASE("resize of a constant image is constant") {
  RgbImage img(5, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 5; ++x) img.set(x, y, 77, 88, 99);
  RgbImage out = resize_bilinear(img, 13, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 13; ++x) {
      const auto* p = out.pixel(x, y);
      CHECK(p[0] == 77);
      CHECK(p[1] == 88);
      CHECK(p[2] == 99);
    }
}

TEST_CASE("nearest-neighbor upscale replicates pixels") {
  GrayImage img(2, 2);
  img.at(0, 0) = 1;
  img.at(1, 0) = 2;
  img.at(0, 1) = 3;
  img.at(1, 1) = 4;
  GrayImage out = resize_nearest(img, 4, 4);
  CHECK(out.at(0, 0) == 1);
  CHECK(out.at(1, 1) == 1);
  CHECK(out.at(2, 0) == 2);
  CHECK(out.at(3, 3) == 4);
  CHECK(out.at(0, 3) == 3);
}

TEST_CASE("png round trips are lossless") {
  fseg::test::TempDir dir("png");
  RgbImage rgb = fseg::test::random_rgb(23, 17, 5);
  write_png_rgb(dir.file("a.png"), rgb);
  CHECK(read_png_rgb(dir.file("a.png")) == rgb);
  CHECK(read_image(dir.file("a.png")) == rgb);

  Rng rng(6);
  GrayImage gray(11, 13);
  for (auto& v : gray.px) v = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  write_png_gray(dir.file("g.png"), gray);
  CHECK(read_png_gray(dir.file("g.png")) == gray);
}

TEST_CASE("png output is byte-stable for identical pixels") {
  fseg::test::TempDir dir("pngdet");
  RgbImage rgb = fseg::test::random_rgb(31, 9, 77);
  write_png_rgb(dir.file("a.png"), rgb);
  write_png_rgb(dir.file("b.png"), rgb);
  CHECK(fseg::test::read_bytes(dir.file("a.png")) == fseg::test::read_bytes(dir.file("b.png")));
}

TEST_CASE("palette png stores label colors") {
  fseg::test::TempDir dir("pal");
  GrayImage labels(3, 1);
  labels.at(0, 0) = 0;
  labels.at(1, 0) = 1;
  labels.at(2, 0) = 2;
  std::vector<std::array<std::uint8_t, 3>> palette = {
      {0, 0, 0}, {255, 0, 0}, {0, 255, 0}};
  write_png_palette(dir.file("p.png"), labels, palette);
  RgbImage decoded = read_image(dir.file("p.png"));
  CHECK(decoded.width == 3);
  CHECK(decoded.pixel(1, 0)[0] == 255);
  CHECK(decoded.pixel(2, 0)[1] == 255);
}

TEST_CASE("f32 blob round trip is bit exact") {
  fseg::test::TempDir dir("blob");
  FloatPlane plane = fseg::test::random_plane(19, 8, 99);
  write_f32_blob(dir.file("p.f32"), plane);
  FloatPlane back = read_f32_blob(dir.file("p.f32"), 19, 8);
  CHECK(back == plane);
}

TEST_CASE("reading a missing image fails loudly") {
  CHECK_THROWS_AS((void)read_image("/nonexistent/nothing.png"), RuntimeFailure);
}

TEST_CASE("palette png rejects out-of-range labels") {
  fseg::test::TempDir dir("palbad");
  GrayImage labels(2, 1);
  labels.at(0, 0) = 0;
  labels.at(1, 0) = 5;
  std::vector<std::array<std::uint8_t, 3>> palette = {{0, 0, 0}, {255, 0, 0}};
  CHECK_THROWS_AS(write_png_palette(dir.file("p.png"), labels, palette), ValidationError);
}
