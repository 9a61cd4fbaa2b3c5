#include "facadeseg/geo/footprints.hpp"

#include <algorithm>
#include <cmath>

#include "facadeseg/common.hpp"

namespace fseg::geo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double point_to_chord(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  if (len2 == 0.0) return distance(p, a);
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

// Open polyline simplification; keeps both endpoints.
void rdp(const std::vector<Vec2>& pts, std::size_t lo, std::size_t hi, double tol,
         std::vector<char>& keep) {
  if (hi <= lo + 1) return;
  double worst = -1.0;
  std::size_t worst_i = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    double d = point_to_chord(pts[i], pts[lo], pts[hi]);
    if (d > worst) {
      worst = d;
      worst_i = i;
    }
  }
  if (worst > tol) {
    keep[worst_i] = 1;
    rdp(pts, lo, worst_i, tol, keep);
    rdp(pts, worst_i, hi, tol, keep);
  }
}

std::vector<Vec2> simplify_ring(const std::vector<Vec2>& ring, double tol) {
  // Anchor at the two most distant vertices, simplify both chains between them.
  std::size_t n = ring.size();
  std::size_t ai = 0, bi = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double d = distance(ring[i], ring[j]);
      if (d > best) {
        best = d;
        ai = i;
        bi = j;
      }
    }

  std::vector<Vec2> chain1, chain2;
  for (std::size_t i = ai; i != bi; i = (i + 1) % n) chain1.push_back(ring[i]);
  chain1.push_back(ring[bi]);
  for (std::size_t i = bi; i != ai; i = (i + 1) % n) chain2.push_back(ring[i]);
  chain2.push_back(ring[ai]);

  auto run = [tol](const std::vector<Vec2>& chain) {
    std::vector<char> keep(chain.size(), 0);
    keep.front() = keep.back() = 1;
    rdp(chain, 0, chain.size() - 1, tol, keep);
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < chain.size(); ++i)
      if (keep[i]) out.push_back(chain[i]);
    return out;
  };

  std::vector<Vec2> s1 = run(chain1), s2 = run(chain2);
  std::vector<Vec2> out(s1.begin(), s1.end() - 1);  // drop bi, chain2 re-adds it
  out.insert(out.end(), s2.begin(), s2.end() - 1);  // drop closing ai
  return out;
}

// Drops ring vertices whose adjacent edges are within `max_angle_rad` of
// collinear; iterates to a fixed point since removals change neighbors.
std::vector<Vec2> merge_collinear(std::vector<Vec2> ring, double max_angle_rad) {
  bool changed = true;
  while (changed && ring.size() > 3) {
    changed = false;
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 prev = ring[(i + n - 1) % n];
      Vec2 cur = ring[i];
      Vec2 next = ring[(i + 1) % n];
      Vec2 d0 = cur - prev, d1 = next - cur;
      double n0 = d0.norm(), n1 = d1.norm();
      if (n0 == 0.0 || n1 == 0.0) continue;
      double cosang = std::clamp(d0.dot(d1) / (n0 * n1), -1.0, 1.0);
      if (std::acos(cosang) < max_angle_rad) {
        ring.erase(ring.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return ring;
}

std::pair<Vec2, Vec2> longest_chord(const std::vector<Vec2>& ring) {
  Vec2 a = ring[0], b = ring[1 % ring.size()];
  double best = -1.0;
  for (std::size_t i = 0; i < ring.size(); ++i)
    for (std::size_t j = i + 1; j < ring.size(); ++j) {
      double d = distance(ring[i], ring[j]);
      if (d > best) {
        best = d;
        a = ring[i];
        b = ring[j];
      }
    }
  return {a, b};
}

}  // namespace

void validate(const FootprintPolygon& poly) {
  if (poly.ring.size() < 3)
    throw ValidationError("footprint " + poly.id + ": ring needs at least 3 vertices");
  std::size_t n = poly.ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(poly.ring[i], poly.ring[(i + 1) % n]) <= 0.0)
      throw ValidationError("footprint " + poly.id + ": repeated consecutive vertex at index " +
                            std::to_string(i));
  }
}

SimplifyResult simplify_and_merge(const std::vector<FootprintPolygon>& polygons,
                                  double tolerance_m, double collinear_deg) {
  if (tolerance_m < 0) throw ValidationError("simplify tolerance must be >= 0");
  SimplifyResult result;
  for (const auto& poly : polygons) {
    validate(poly);
    if (tolerance_m == 0.0) {
      std::size_t n = poly.ring.size();
      for (std::size_t i = 0; i < n; ++i)
        result.segments.push_back({poly.ring[i], poly.ring[(i + 1) % n], poly.id});
      continue;
    }
    std::vector<Vec2> ring = simplify_ring(poly.ring, tolerance_m);
    if (ring.size() >= 3) ring = merge_collinear(std::move(ring), collinear_deg * kPi / 180.0);
    if (ring.size() < 3) {
      auto [a, b] = longest_chord(poly.ring);
      result.segments.push_back({a, b, poly.id});
      result.warnings.push_back("footprint " + poly.id +
                                " degenerated during simplification; emitted longest chord");
      continue;
    }
    std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i)
      result.segments.push_back({ring[i], ring[(i + 1) % n], poly.id});
  }
  return result;
}

std::vector<WallSegment> subdivide_and_extend(const WallSegment& segment, double max_len_m,
                                              double extension_m) {
  if (max_len_m <= 0) throw ValidationError("max_len must be positive");
  if (extension_m < 0) throw ValidationError("extension must be >= 0");
  double len = segment.length();
  if (len <= 0) throw ValidationError("segment has zero length");

  int n = static_cast<int>(std::ceil(len / max_len_m));
  n = std::max(n, 1);
  Vec2 dir = segment.direction();
  std::vector<WallSegment> pieces;
  pieces.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double t0 = len * i / n - extension_m;
    double t1 = len * (i + 1) / n + extension_m;
    pieces.push_back({segment.p0 + dir * t0, segment.p0 + dir * t1, segment.source_footprint});
  }
  return pieces;
}

}  // namespace fseg::geo
