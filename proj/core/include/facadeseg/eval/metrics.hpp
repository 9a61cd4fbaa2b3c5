#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facadeseg/data/mask.hpp"
#include "facadeseg/image.hpp"

namespace fseg::eval {

// A ratio with a zero-denominator flag. Undefined rates carry value 0.
struct Rate {
  double value = 0.0;
  bool defined = false;
};

struct PixelCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::uint64_t total() const { return tp + fp + fn + tn; }
  PixelCounts& operator+=(const PixelCounts& o);
};

struct PixelRates {
  Rate acc, precision, recall, f1;
};

PixelRates pixel_rates(const PixelCounts& counts);

// 1 marks pixels that take part in evaluation. Excluded: ground-truth UNK and
// EDG pixels, and pixels within `boundary_px` Chebyshev distance of the
// outermost POS ring (POS pixels with an 8-adjacent NEG).
BoolPlane exclusion_mask(const data::MultiLabelMask& gt, const std::string& cls,
                         int boundary_px = 5);

// Binary confusion counts over evaluated pixels; prediction is positive where
// the POS probability exceeds `threshold`, ground truth where the plane is POS.
PixelCounts pixel_counts(const FloatPlane& pos, const GrayImage& gt_plane,
                         const BoolPlane& evaluated, double threshold = 0.5);

// Erosion then dilation with the full 3x3 element; outside the image counts
// as empty.
BoolPlane open_3x3(const BoolPlane& binary);

// Inclusive pixel-coordinate bounding box.
struct Box {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};

// 8-connected components in row-major discovery order.
std::vector<Box> components_and_boxes(const BoolPlane& binary);

// Overlap over union of the continuous rectangles spanned by the corner
// coordinates, so [0,0,10,10] vs [0,5,10,15] gives 50/150.
double box_iou(const Box& a, const Box& b);

struct ObjectMatch {
  int pred = -1, gt = -1;
  double iou = 0.0;
};

struct ObjectMatchResult {
  std::vector<ObjectMatch> matched;  // one-to-one, total IoU maximal
  std::vector<int> unmatched_pred;   // false positives
  std::vector<int> unmatched_gt;     // false negatives
};

// Exact maximum-weight assignment over pairs with IoU above the threshold.
ObjectMatchResult match_objects(const std::vector<Box>& pred, const std::vector<Box>& gt,
                                double iou_threshold = 0.5);

struct ObjectCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  ObjectCounts& operator+=(const ObjectCounts& o);
};

struct ObjectRates {
  Rate precision, recall, f1;
};

ObjectRates object_rates(const ObjectCounts& counts);

struct EvalOptions {
  int boundary_px = 5;
  double threshold = 0.5;
  double iou_threshold = 0.5;
};

struct ClassCounts {
  PixelCounts pixel;
  ObjectCounts object;
  ClassCounts& operator+=(const ClassCounts& o);
};

// Pixel counts under the exclusion mask plus object counts from matched
// bounding boxes. Both prediction and ground truth are opened before
// component extraction, so a perfect prediction scores 1 everywhere.
ClassCounts evaluate_class(const FloatPlane& pos, const data::MultiLabelMask& gt,
                           const std::string& cls, const EvalOptions& opts = {});

// Share of pixels whose labels agree, skipping ground-truth `ignore` pixels.
Rate single_label_accuracy(const GrayImage& pred, const GrayImage& gt,
                           std::uint8_t ignore = 255);

struct MetricsReport {
  std::vector<std::string> classes;
  std::vector<ClassCounts> counts;  // aligned with classes
};

// Overall = micro-average: counts summed across classes.
ClassCounts overall_counts(const MetricsReport& report);

std::string report_json(const MetricsReport& report);
// Columns: class, Acc, P, R, F1, P_ob, R_ob, F1_ob. Undefined cells are empty.
std::string report_csv(const MetricsReport& report);

}  // namespace fseg::eval
