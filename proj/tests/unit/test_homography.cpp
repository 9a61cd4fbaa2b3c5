#include <doctest.h>

#include <cmath>

#include "facadeseg/common.hpp"
#include "facadeseg/homography.hpp"

using namespace fseg;

namespace {

std::array<double, 2> apply(const Mat3& m, double x, double y) {
  double ox, oy;
  m.apply(x, y, ox, oy);
  return {ox, oy};
}

}  // namespace

TEST_CASE("identity and translation transforms") {
  auto p = apply(Mat3::identity(), 3.5, -2.0);
  CHECK(p[0] == doctest::Approx(3.5));
  CHECK(p[1] == doctest::Approx(-2.0));

  auto q = apply(Mat3::translation(10, -4), 1.0, 2.0);
  CHECK(q[0] == doctest::Approx(11.0));
  CHECK(q[1] == doctest::Approx(-2.0));
}

TEST_CASE("inverse composes to identity") {
  Mat3 m{{2, 0.3, 5, -0.1, 1.5, -2, 0.001, 0.002, 1}};
  Mat3 round = m * m.inverse();
  for (int i = 0; i < 9; ++i)
    CHECK(round.m[i] == doctest::Approx(Mat3::identity().m[i]).epsilon(1e-9));

  double x, y;
  (m.inverse() * m).apply(7.0, -3.0, x, y);
  CHECK(x == doctest::Approx(7.0));
  CHECK(y == doctest::Approx(-3.0));
}

TEST_CASE("singular matrix has no inverse") {
  Mat3 m{{1, 2, 3, 2, 4, 6, 0, 0, 1}};  // first two rows dependent
  CHECK_THROWS_AS((void)m.inverse(), ValidationError);
}

TEST_CASE("fitted homography hits all four corners exactly") {
  std::array<std::array<double, 2>, 4> src = {{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
  std::array<std::array<double, 2>, 4> dst = {{{1, 2}, {12, -1}, {14, 13}, {-2, 9}}};
  Mat3 h = fit_homography(src, dst);
  for (int i = 0; i < 4; ++i) {
    auto p = apply(h, src[i][0], src[i][1]);
    CHECK(p[0] == doctest::Approx(dst[i][0]).epsilon(1e-9));
    CHECK(p[1] == doctest::Approx(dst[i][1]).epsilon(1e-9));
  }
}

TEST_CASE("fit of an affine correspondence reproduces the affine map") {
  // dst = (2x + 1, 3y - 2) has no projective part.
  std::array<std::array<double, 2>, 4> src = {{{0, 0}, {4, 0}, {4, 6}, {0, 6}}};
  std::array<std::array<double, 2>, 4> dst = {{{1, -2}, {9, -2}, {9, 16}, {1, 16}}};
  Mat3 h = fit_homography(src, dst);
  auto mid = apply(h, 2.0, 3.0);
  CHECK(mid[0] == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(mid[1] == doctest::Approx(7.0).epsilon(1e-9));
  CHECK(h.m[6] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(h.m[7] == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("inverse homography undoes the fitted warp") {
  std::array<std::array<double, 2>, 4> src = {{{0, 0}, {8, 0}, {8, 8}, {0, 8}}};
  std::array<std::array<double, 2>, 4> dst = {{{0.5, 0.2}, {8.3, -0.4}, {7.6, 8.9}, {-0.7, 7.8}}};
  Mat3 h = fit_homography(src, dst);
  Mat3 inv = h.inverse();
  for (double x = 0.5; x < 8; x += 1.7)
    for (double y = 0.5; y < 8; y += 1.3) {
      auto fwd = apply(h, x, y);
      auto back = apply(inv, fwd[0], fwd[1]);
      CHECK(back[0] == doctest::Approx(x).epsilon(1e-9));
      CHECK(back[1] == doctest::Approx(y).epsilon(1e-9));
    }
}

TEST_CASE("degenerate correspondences are rejected") {
  // Three collinear source points cannot pin a homography.
  std::array<std::array<double, 2>, 4> src = {{{0, 0}, {1, 1}, {2, 2}, {0, 10}}};
  std::array<std::array<double, 2>, 4> dst = {{{0, 0}, {10, 0}, {10, 10}, {0, 10}}};
  CHECK_THROWS_AS((void)fit_homography(src, dst), ValidationError);
}
