#include "facadeseg/eval/metrics.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fseg::eval {

using ordered_json = nlohmann::ordered_json;

PixelCounts& PixelCounts::operator+=(const PixelCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ObjectCounts& ObjectCounts::operator+=(const ObjectCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

ClassCounts& ClassCounts::operator+=(const ClassCounts& o) {
  pixel += o.pixel;
  object += o.object;
  return *this;
}

namespace {

Rate ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return {0.0, false};
  return {static_cast<double>(num) / static_cast<double>(den), true};
}

Rate f1_of(const Rate& p, const Rate& r) {
  double sum = p.value + r.value;
  if (!(p.defined || r.defined) || sum <= 0) return {0.0, false};
  return {2.0 * p.value * r.value / sum, true};
}

}  // namespace

PixelRates pixel_rates(const PixelCounts& c) {
  PixelRates rates;
  rates.acc = ratio(c.tp + c.tn, c.total());
  rates.precision = ratio(c.tp, c.tp + c.fp);
  rates.recall = ratio(c.tp, c.tp + c.fn);
  rates.f1 = f1_of(rates.precision, rates.recall);
  return rates;
}

ObjectRates object_rates(const ObjectCounts& c) {
  ObjectRates rates;
  rates.precision = ratio(c.tp, c.tp + c.fp);
  rates.recall = ratio(c.tp, c.tp + c.fn);
  rates.f1 = f1_of(rates.precision, rates.recall);
  return rates;
}

BoolPlane exclusion_mask(const data::MultiLabelMask& gt, const std::string& cls,
                         int boundary_px) {
  if (boundary_px < 0) throw ValidationError("boundary width must be >= 0");
  const GrayImage& plane = gt.plane(cls);
  BoolPlane evaluated(gt.width, gt.height, 1);
  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x) {
      std::uint8_t v = plane.at(x, y);
      if (v == data::UNK || v == data::EDG) evaluated.at(x, y) = 0;
    }
  if (boundary_px == 0) return evaluated;

  for (int y = 0; y < gt.height; ++y)
    for (int x = 0; x < gt.width; ++x) {
      if (plane.at(x, y) != data::POS) continue;
      bool transition = false;
      for (int dy = -1; dy <= 1 && !transition; ++dy)
        for (int dx = -1; dx <= 1 && !transition; ++dx) {
          int nx = x + dx, ny = y + dy;
          if ((dx || dy) && plane.in_bounds(nx, ny) && plane.at(nx, ny) == data::NEG)
            transition = true;
        }
      if (!transition) continue;
      int x0 = std::max(0, x - boundary_px), x1 = std::min(gt.width - 1, x + boundary_px);
      int y0 = std::max(0, y - boundary_px), y1 = std::min(gt.height - 1, y + boundary_px);
      for (int yy = y0; yy <= y1; ++yy)
        for (int xx = x0; xx <= x1; ++xx) evaluated.at(xx, yy) = 0;
    }
  return evaluated;
}

PixelCounts pixel_counts(const FloatPlane& pos, const GrayImage& gt_plane,
                         const BoolPlane& evaluated, double threshold) {
  if (pos.width != gt_plane.width || pos.height != gt_plane.height ||
      pos.width != evaluated.width || pos.height != evaluated.height)
    throw ValidationError("prediction, ground truth, and mask dimensions differ");
  PixelCounts c;
  for (int y = 0; y < pos.height; ++y)
    for (int x = 0; x < pos.width; ++x) {
      if (!evaluated.at(x, y)) continue;
      bool pred = pos.at(x, y) > threshold;
      bool truth = gt_plane.at(x, y) == data::POS;
      if (pred && truth) ++c.tp;
      else if (pred && !truth) ++c.fp;
      else if (!pred && truth) ++c.fn;
      else ++c.tn;
    }
  return c;
}

BoolPlane open_3x3(const BoolPlane& binary) {
  int W = binary.width, H = binary.height;
  BoolPlane eroded(W, H, 0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      bool keep = true;
      for (int dy = -1; dy <= 1 && keep; ++dy)
        for (int dx = -1; dx <= 1 && keep; ++dx) {
          int nx = x + dx, ny = y + dy;
          if (!binary.in_bounds(nx, ny) || !binary.at(nx, ny)) keep = false;
        }
      eroded.at(x, y) = keep ? 1 : 0;
    }
  BoolPlane opened(W, H, 0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      if (!eroded.at(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = x + dx, ny = y + dy;
          if (opened.in_bounds(nx, ny)) opened.at(nx, ny) = 1;
        }
    }
  return opened;
}

std::vector<Box> components_and_boxes(const BoolPlane& binary) {
  int W = binary.width, H = binary.height;
  BoolPlane seen(W, H, 0);
  std::vector<Box> boxes;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      if (!binary.at(x, y) || seen.at(x, y)) continue;
      Box box{x, y, x, y};
      stack.push_back({x, y});
      seen.at(x, y) = 1;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        box.x0 = std::min(box.x0, cx);
        box.x1 = std::max(box.x1, cx);
        box.y0 = std::min(box.y0, cy);
        box.y1 = std::max(box.y1, cy);
        for (int dy = -1; dy <= 1; ++dy)
          for (int dx = -1; dx <= 1; ++dx) {
            int nx = cx + dx, ny = cy + dy;
            if ((dx || dy) && binary.in_bounds(nx, ny) && binary.at(nx, ny) &&
                !seen.at(nx, ny)) {
              seen.at(nx, ny) = 1;
              stack.push_back({nx, ny});
            }
          }
      }
      boxes.push_back(box);
    }
  return boxes;
}

double box_iou(const Box& a, const Box& b) {
  double iw = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  double ih = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (iw <= 0 || ih <= 0) return 0.0;
  double inter = iw * ih;
  double area_a = static_cast<double>(a.x1 - a.x0) * (a.y1 - a.y0);
  double area_b = static_cast<double>(b.x1 - b.x0) * (b.y1 - b.y0);
  double uni = area_a + area_b - inter;
  return uni > 0 ? inter / uni : 0.0;
}

namespace {

// Exact min-cost assignment of every row to a distinct column, n rows over
// m >= n columns, via shortest augmenting paths with potentials.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
  int n = static_cast<int>(cost.size());
  int m = n > 0 ? static_cast<int>(cost[0].size()) : 0;
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

ObjectMatchResult match_objects(const std::vector<Box>& pred, const std::vector<Box>& gt,
                                double iou_threshold) {
  for (const Box& b : pred)
    if (b.x0 > b.x1 || b.y0 > b.y1) throw ValidationError("invalid prediction box");
  for (const Box& b : gt)
    if (b.x0 > b.x1 || b.y0 > b.y1) throw ValidationError("invalid ground-truth box");

  int np = static_cast<int>(pred.size()), ng = static_cast<int>(gt.size());
  ObjectMatchResult result;
  std::vector<char> pred_used(np, 0), gt_used(ng, 0);

  if (np > 0 && ng > 0) {
    // Pairs at or below the threshold keep weight 0, so the assignment can
    // park rows there at no cost; such pairs are dropped afterwards.
    int side = std::max(np, ng);
    std::vector<std::vector<double>> cost(side, std::vector<double>(side, 0.0));
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < ng; ++j) {
        double iou = box_iou(pred[i], gt[j]);
        if (iou > iou_threshold) cost[i][j] = -iou;
      }
    std::vector<int> row_to_col = assign_min_cost(cost);
    for (int i = 0; i < np; ++i) {
      int j = row_to_col[i];
      if (j < 0 || j >= ng) continue;
      double iou = box_iou(pred[i], gt[j]);
      if (iou > iou_threshold) {
        result.matched.push_back({i, j, iou});
        pred_used[i] = 1;
        gt_used[j] = 1;
      }
    }
  }
  for (int i = 0; i < np; ++i)
    if (!pred_used[i]) result.unmatched_pred.push_back(i);
  for (int j = 0; j < ng; ++j)
    if (!gt_used[j]) result.unmatched_gt.push_back(j);
  return result;
}

ClassCounts evaluate_class(const FloatPlane& pos, const data::MultiLabelMask& gt,
                           const std::string& cls, const EvalOptions& opts) {
  if (pos.width != gt.width || pos.height != gt.height)
    throw ValidationError("prediction and ground truth dimensions differ");
  ClassCounts counts;
  const GrayImage& gt_plane = gt.plane(cls);
  BoolPlane evaluated = exclusion_mask(gt, cls, opts.boundary_px);
  counts.pixel = pixel_counts(pos, gt_plane, evaluated, opts.threshold);

  BoolPlane pred_bin(pos.width, pos.height, 0);
  BoolPlane gt_bin(pos.width, pos.height, 0);
  for (int y = 0; y < pos.height; ++y)
    for (int x = 0; x < pos.width; ++x) {
      pred_bin.at(x, y) = pos.at(x, y) > opts.threshold ? 1 : 0;
      gt_bin.at(x, y) = gt_plane.at(x, y) == data::POS ? 1 : 0;
    }
  std::vector<Box> pred_boxes = components_and_boxes(open_3x3(pred_bin));
  std::vector<Box> gt_boxes = components_and_boxes(open_3x3(gt_bin));
  ObjectMatchResult match = match_objects(pred_boxes, gt_boxes, opts.iou_threshold);
  counts.object.tp = match.matched.size();
  counts.object.fp = match.unmatched_pred.size();
  counts.object.fn = match.unmatched_gt.size();
  return counts;
}

Rate single_label_accuracy(const GrayImage& pred, const GrayImage& gt, std::uint8_t ignore) {
  if (!pred.same_size(gt)) throw ValidationError("label image dimensions differ");
  std::uint64_t hit = 0, total = 0;
  for (std::size_t i = 0; i < gt.px.size(); ++i) {
    if (gt.px[i] == ignore) continue;
    ++total;
    if (pred.px[i] == gt.px[i]) ++hit;
  }
  return ratio(hit, total);
}

ClassCounts overall_counts(const MetricsReport& report) {
  ClassCounts total;
  for (const auto& c : report.counts) total += c;
  return total;
}

namespace {

ordered_json rate_json(const Rate& r) {
  ordered_json o;
  o["value"] = r.value;
  o["defined"] = r.defined;
  return o;
}

ordered_json class_json(const ClassCounts& counts) {
  PixelRates px = pixel_rates(counts.pixel);
  ObjectRates ob = object_rates(counts.object);
  ordered_json o;
  o["pixel"] = {{"tp", counts.pixel.tp},
                {"fp", counts.pixel.fp},
                {"fn", counts.pixel.fn},
                {"tn", counts.pixel.tn}};
  o["acc"] = rate_json(px.acc);
  o["precision"] = rate_json(px.precision);
  o["recall"] = rate_json(px.recall);
  o["f1"] = rate_json(px.f1);
  o["object"] = {{"tp", counts.object.tp},
                 {"fp", counts.object.fp},
                 {"fn", counts.object.fn}};
  o["precision_ob"] = rate_json(ob.precision);
  o["recall_ob"] = rate_json(ob.recall);
  o["f1_ob"] = rate_json(ob.f1);
  return o;
}

std::string cell(const Rate& r) {
  if (!r.defined) return "";
  std::ostringstream out;
  out << r.value;
  return out.str();
}

}  // namespace

std::string report_json(const MetricsReport& report) {
  if (report.classes.size() != report.counts.size())
    throw ValidationError("report classes and counts differ in length");
  ordered_json doc;
  doc["classes"] = ordered_json::object();
  for (std::size_t i = 0; i < report.classes.size(); ++i)
    doc["classes"][report.classes[i]] = class_json(report.counts[i]);
  doc["overall"] = class_json(overall_counts(report));
  return doc.dump(2);
}

std::string report_csv(const MetricsReport& report) {
  if (report.classes.size() != report.counts.size())
    throw ValidationError("report classes and counts differ in length");
  std::ostringstream out;
  out << "class,Acc,P,R,F1,P_ob,R_ob,F1_ob\n";
  auto row = [&out](const std::string& name, const ClassCounts& counts) {
    PixelRates px = pixel_rates(counts.pixel);
    ObjectRates ob = object_rates(counts.object);
    out << name << "," << cell(px.acc) << "," << cell(px.precision) << ","
        << cell(px.recall) << "," << cell(px.f1) << "," << cell(ob.precision) << ","
        << cell(ob.recall) << "," << cell(ob.f1) << "\n";
  };
  for (std::size_t i = 0; i < report.classes.size(); ++i)
    row(report.classes[i], report.counts[i]);
  row("overall", overall_counts(report));
  return out.str();
}

}  // namespace fseg::eval
