#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "facadeseg/common.hpp"
#include "facadeseg/geo/footprints.hpp"

using namespace fseg;
using namespace fseg::geo;

namespace {

double point_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  if (len2 == 0.0) return distance(p, a);
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

double nearest_segment_distance(Vec2 p, const std::vector<WallSegment>& segments) {
  double best = 1e300;
  for (const auto& s : segments) best = std::min(best, point_to_segment(p, s.p0, s.p1));
  return best;
}

// Star-shaped ring around a center, radius jittered per vertex.
FootprintPolygon noisy_ring(std::uint64_t seed, int vertices) {
  Rng rng(seed);
  FootprintPolygon poly;
  poly.id = "ring" + std::to_string(seed);
  for (int i = 0; i < vertices; ++i) {
    double angle = 2.0 * 3.14159265358979323846 * i / vertices;
    double radius = 10.0 + rng.uniform(-0.4, 0.4);
    poly.ring.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return poly;
}

}  // namespace

TEST_CASE("ring validation") {
  FootprintPolygon poly{"p", {{0, 0}, {1, 0}}};
  CHECK_THROWS_AS(validate(poly), ValidationError);
  FootprintPolygon dup{"d", {{0, 0}, {1, 0}, {1, 0}, {0, 1}}};
  CHECK_THROWS_AS(validate(dup), ValidationError);
  FootprintPolygon ok{"ok", {{0, 0}, {1, 0}, {0, 1}}};
  CHECK_NOTHROW(validate(ok));
}

TEST_CASE("tolerance zero keeps every original edge") {
  FootprintPolygon square{"sq", {{0, 0}, {5, 0}, {5, 5}, {2.5, 5.1}, {0, 5}}};
  SimplifyResult res = simplify_and_merge({square}, 0.0);
  REQUIRE(res.segments.size() == 5);
  CHECK(res.warnings.empty());
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(res.segments[i].p0.x == square.ring[i].x);
    CHECK(res.segments[i].p1.x == square.ring[(i + 1) % 5].x);
    CHECK(res.segments[i].source_footprint == "sq");
  }
}

TEST_CASE("simplification drops small wiggles but keeps corners") {
  // Square with a 0.05-deep midpoint dent on the bottom edge.
  FootprintPolygon poly{"w", {{0, 0}, {5, -0.05}, {10, 0}, {10, 10}, {0, 10}}};
  SimplifyResult res = simplify_and_merge({poly}, 0.5, 0.0);
  CHECK(res.segments.size() == 4);
  // Corners survive as segment endpoints.
  bool corner_found = false;
  for (const auto& s : res.segments)
    if (s.p0.x == 10 && s.p0.y == 10) corner_found = true;
  CHECK(corner_found);
}

TEST_CASE("every dropped vertex stays within tolerance of the output") {
  const double tol = 0.5;
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    FootprintPolygon poly = noisy_ring(seed, 48);
    SimplifyResult res = simplify_and_merge({poly}, tol, 0.0);
    REQUIRE(res.segments.size() >= 3);
    for (const auto& v : poly.ring)
      CHECK(nearest_segment_distance(v, res.segments) <= tol + 1e-9);
  }
}

TEST_CASE("near-collinear joints merge away") {
  // Rectangle with an almost-on-edge extra vertex: 0.01 high over a 10 span.
  FootprintPolygon poly{"m", {{0, 0}, {5, 0.01}, {10, 0}, {10, 6}, {0, 6}}};
  SimplifyResult merged = simplify_and_merge({poly}, 0.001, 2.0);
  CHECK(merged.segments.size() == 4);
  SimplifyResult kept = simplify_and_merge({poly}, 0.001, 0.0);
  CHECK(kept.segments.size() == 5);
}

TEST_CASE("degenerate rings emit their longest chord and a warning") {
  // Collapses to a line under any positive tolerance.
  FootprintPolygon sliver{"s", {{0, 0}, {10, 0.001}, {20, 0}, {10, -0.001}}};
  SimplifyResult res = simplify_and_merge({sliver}, 1.0);
  REQUIRE(res.segments.size() == 1);
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.segments[0].length() == doctest::Approx(20.0).epsilon(1e-6));
  CHECK(res.warnings[0].find("s") != std::string::npos);
}

TEST_CASE("subdivision conserves total length and stays connected") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    WallSegment seg{{rng.uniform(-100, 100), rng.uniform(-100, 100)},
                    {rng.uniform(-100, 100), rng.uniform(-100, 100)},
                    "t"};
    if (seg.length() < 1.0) continue;
    double max_len = rng.uniform(5.0, 50.0);
    double ext = rng.uniform(0.0, 3.0);
    auto pieces = subdivide_and_extend(seg, max_len, ext);
    int expected = std::max(1, static_cast<int>(std::ceil(seg.length() / max_len)));
    CHECK(static_cast<int>(pieces.size()) == expected);

    double covered = 0;
    for (const auto& p : pieces) {
      covered += p.length() - 2.0 * ext;
      CHECK(p.length() <= seg.length() / expected + 2.0 * ext + 1e-9);
    }
    CHECK(covered == doctest::Approx(seg.length()).epsilon(1e-9));

    // Un-extended piece boundaries abut exactly.
    Vec2 dir = seg.direction();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      Vec2 end = pieces[i].p1 - dir * ext;
      Vec2 start = pieces[i + 1].p0 + dir * ext;
      CHECK(distance(end, start) < 1e-9);
    }
  }
}

TEST_CASE("subdivision rejects bad arguments") {
  WallSegment seg{{0, 0}, {10, 0}, "t"};
  CHECK_THROWS_AS((void)subdivide_and_extend(seg, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS((void)subdivide_and_extend(seg, 5.0, -1.0), ValidationError);
  WallSegment zero{{1, 1}, {1, 1}, "z"};
  CHECK_THROWS_AS((void)subdivide_and_extend(zero, 5.0, 0.0), ValidationError);
}
