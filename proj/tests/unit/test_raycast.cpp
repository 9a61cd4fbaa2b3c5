#include <doctest.h>

#include <cmath>

#include "facadeseg/common.hpp"
#include "facadeseg/geo/raycast.hpp"

using namespace fseg;
using namespace fseg::geo;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Reference projection built on colatitude instead of elevation.
Vec2 oracle_project(Vec3 d, double heading, int w, int h) {
  double r = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  double colat = std::acos(std::clamp(d.z / r, -1.0, 1.0));
  double az = std::fmod(std::atan2(d.x, d.y) - heading + 3.0 * kPi, 2.0 * kPi) - kPi;
  double u = (az + kPi) / (2.0 * kPi) * w;
  if (u >= w) u -= w;
  return {u, colat / kPi * h};
}

double wrapped_du(double a, double b, int w) {
  double d = std::abs(a - b);
  return std::min(d, w - d);
}

}  // namespace

TEST_CASE("cardinal directions land on the expected columns") {
  const int W = 1024, H = 512;
  Vec2 north = project_direction({0, 1, 0}, 0.0, W, H);
  CHECK(north.x == doctest::Approx(W / 2.0));
  CHECK(north.y == doctest::Approx(H / 2.0));

  Vec2 east = project_direction({1, 0, 0}, 0.0, W, H);
  CHECK(east.x == doctest::Approx(3.0 * W / 4.0));

  Vec2 west = project_direction({-1, 0, 0}, 0.0, W, H);
  CHECK(west.x == doctest::Approx(W / 4.0));

  Vec2 up = project_direction({0, 1, 1e9}, 0.0, W, H);
  CHECK(up.y == doctest::Approx(0.0).epsilon(1e-3));
}

TEST_CASE("heading rotates the image center") {
  const int W = 800, H = 400;
  // Looking north with the sphere headed east puts north a quarter turn left.
  Vec2 p = project_direction({0, 1, 0}, kPi / 2.0, W, H);
  CHECK(p.x == doctest::Approx(W / 4.0));
}

TEST_CASE("projection agrees with the colatitude oracle") {
  const int W = 2048, H = 1024;
  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    Vec3 d{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z) < 1e-3) continue;
    double heading = rng.uniform(0, 2.0 * kPi);
    Vec2 got = project_direction(d, heading, W, H);
    Vec2 want = oracle_project(d, heading, W, H);
    CHECK(wrapped_du(got.x, want.x, W) < 1e-6);
    CHECK(std::abs(got.y - want.y) < 1e-6);
  }
}

TEST_CASE("zero direction is rejected") {
  CHECK_THROWS_AS((void)project_direction({0, 0, 0}, 0.0, 100, 50), ValidationError);
}

TEST_CASE("wall grid dimensions follow metric resolution") {
  WallQuad quad;
  quad.base = {{0, 0}, {10, 0}, "f"};
  quad.height_m = 40.0;
  quad.mpp = 0.025;
  CHECK(quad.grid_rows() == 1600);
  CHECK(quad.grid_cols() == 400);
}

TEST_CASE("extraction of a constant sphere is constant") {
  Photosphere sphere;
  sphere.id = "s";
  sphere.center = {5, -4, 2.5};
  sphere.heading = 1.0;
  sphere.image = RgbImage(64, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 64; ++x) sphere.image.set(x, y, 12, 34, 56);

  WallQuad quad;
  quad.base = {{0, 0}, {4, 0}, "f"};
  quad.height_m = 3.0;
  quad.mpp = 0.5;
  quad.id = "q";

  FacadeImage img = extract_facade_image(quad, sphere);
  CHECK(img.pixels.width == 8);
  CHECK(img.pixels.height == 6);
  CHECK(img.quad_id == "q");
  CHECK(img.photosphere_id == "s");
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x) {
      const auto* p = img.pixels.pixel(x, y);
      CHECK(p[0] == 12);
      CHECK(p[1] == 34);
      CHECK(p[2] == 56);
    }
}

TEST_CASE("extraction validates its inputs") {
  Photosphere sphere;
  sphere.id = "empty";
  WallQuad quad;
  quad.base = {{0, 0}, {4, 0}, "f"};
  CHECK_THROWS_AS((void)extract_facade_image(quad, sphere), ValidationError);

  sphere.image = RgbImage(8, 4);
  WallQuad zero = quad;
  zero.base = {{1, 1}, {1, 1}, "f"};
  CHECK_THROWS_AS((void)extract_facade_image(zero, sphere), ValidationError);
}

TEST_CASE("segment distance handles interior and endpoint regions") {
  WallSegment seg{{0, 0}, {10, 0}, "f"};
  CHECK(segment_distance({5, 3}, seg) == doctest::Approx(3.0));
  CHECK(segment_distance({-4, 3}, seg) == doctest::Approx(5.0));
  CHECK(segment_distance({13, -4}, seg) == doctest::Approx(5.0));
  CHECK(segment_distance({7, 0}, seg) == doctest::Approx(0.0));
}

TEST_CASE("sphere range query keeps input order") {
  WallSegment seg{{0, 0}, {10, 0}, "f"};
  std::vector<Vec2> centers = {{5, 25}, {5, 5}, {-3, 4}, {20, 0}};
  auto hits = spheres_in_range(seg, centers, 10.0);
  CHECK(hits == std::vector<std::size_t>{1, 2, 3});
}
