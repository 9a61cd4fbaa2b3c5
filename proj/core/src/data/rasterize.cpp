#include "facadeseg/data/rasterize.hpp"

#include <algorithm>
#include <cmath>

#include "facadeseg/common.hpp"

namespace fseg::data {

namespace {

using geo::Vec2;

double point_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 ab = b - a;
  double len2 = ab.dot(ab);
  if (len2 == 0.0) return geo::distance(p, a);
  double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return geo::distance(p, a + ab * t);
}

// Marks EDG at pixel centers within band_px of the segment. Scans only the
// segment's inflated bounding box.
void mark_edge_band(Vec2 a, Vec2 b, double band_px, GrayImage& plane) {
  int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - band_px - 1.0)));
  int x1 = std::min(plane.width - 1,
                    static_cast<int>(std::ceil(std::max(a.x, b.x) + band_px + 1.0)));
  int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - band_px - 1.0)));
  int y1 = std::min(plane.height - 1,
                    static_cast<int>(std::ceil(std::max(a.y, b.y) + band_px + 1.0)));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (point_to_segment({x + 0.5, y + 0.5}, a, b) <= band_px) plane.at(x, y) = EDG;
}

}  // namespace

bool point_in_polygon(const std::vector<Vec2>& ring, double x, double y) {
  bool inside = false;
  std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Vec2 a = ring[i], b = ring[(i + 1) % n];
    if ((a.y <= y) != (b.y <= y)) {
      double cx = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x < cx) inside = !inside;
    }
  }
  return inside;
}

void fill_polygon(const std::vector<Vec2>& ring, BoolPlane& out) {
  if (ring.size() < 3) throw ValidationError("polygon needs at least 3 vertices");
  double ry0 = ring[0].y, ry1 = ring[0].y;
  for (const auto& v : ring) {
    ry0 = std::min(ry0, v.y);
    ry1 = std::max(ry1, v.y);
  }
  int y_begin = std::max(0, static_cast<int>(std::floor(ry0 - 1.0)));
  int y_end = std::min(out.height - 1, static_cast<int>(std::ceil(ry1 + 1.0)));

  std::size_t n = ring.size();
  std::vector<double> xs;
  for (int y = y_begin; y <= y_end; ++y) {
    double yc = y + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < n; ++i) {
      Vec2 a = ring[i], b = ring[(i + 1) % n];
      if ((a.y <= yc) != (b.y <= yc))
        xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      int x_start = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      int x_stop = std::min(out.width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
      for (int x = x_start; x <= x_stop; ++x) out.at(x, y) = 1;
    }
  }
}

MultiLabelMask rasterize_multilabel(const AnnotationSet& ann,
                                    const std::vector<std::string>& vocab,
                                    const EdgeBandConfig& config) {
  if (vocab.empty()) throw ValidationError("vocabulary must be non-empty");
  validate(ann, vocab);

  MultiLabelMask mask(vocab, ann.width, ann.height);
  double band_px = static_cast<double>(std::llround(config.band_m / ann.mpp));
  double facade_px = static_cast<double>(std::llround(config.facade_band_m / ann.mpp));

  for (std::size_t c = 0; c < vocab.size(); ++c) {
    GrayImage& plane = mask.planes[c];
    bool is_facade = vocab[c] == config.facade_class;

    BoolPlane pos(mask.width, mask.height, 0);
    for (const auto& shape : ann.shapes)
      if (shape.class_name == vocab[c]) fill_polygon(shape.ring, pos);
    for (int y = 0; y < mask.height; ++y)
      for (int x = 0; x < mask.width; ++x)
        if (pos.at(x, y)) plane.at(x, y) = POS;

    for (const auto& shape : ann.shapes) {
      if (shape.class_name != vocab[c]) continue;
      std::size_t nv = shape.ring.size();
      for (std::size_t i = 0; i < nv; ++i) {
        Vec2 a = shape.ring[i], b = shape.ring[(i + 1) % nv];
        double band = band_px;
        if (is_facade) {
          // Only near-vertical facade edges carry a band, at 1 foot.
          if (std::abs(b.y - a.y) <= std::abs(b.x - a.x)) continue;
          band = facade_px;
        }
        if (band <= 0) continue;
        mark_edge_band(a, b, band, plane);
      }
    }
  }

  if (!ann.unknown_regions.empty()) {
    BoolPlane unk(mask.width, mask.height, 0);
    for (const auto& region : ann.unknown_regions) fill_polygon(region, unk);
    for (auto& plane : mask.planes)
      for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
          if (unk.at(x, y)) plane.at(x, y) = UNK;
  }
  return mask;
}

}  // namespace fseg::data
