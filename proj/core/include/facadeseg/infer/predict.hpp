#pragma once

#include <array>
#include <string>
#include <vector>

#include "facadeseg/arch/network.hpp"
#include "facadeseg/image.hpp"

namespace fseg::infer {

struct ClassMaps {
  std::array<FloatPlane, 4> raw;  // indexed by label value NEG, UNK, POS, EDG
  FloatPlane pos, neg;            // renormalized; empty until renormalize_pos_neg
  BoolPlane degenerate;           // raw POS + NEG was 0; forced to 0.5 / 0.5
};

struct ProbabilityMaps {
  std::vector<std::string> vocab;
  int width = 0, height = 0;  // working resolution after height scaling
  int original_width = 0, original_height = 0;
  double scale = 1.0;  // working / original
  std::vector<ClassMaps> classes;
};

// Scales the image so its height matches the network input, covers the width
// with overlapping tiles (mirror-padding narrow images), averages softmax
// scores where tiles overlap, and rescales each 4-tuple to sum to 1. A
// network with recurrent refinement stages contributes its final stage.
template <typename T>
ProbabilityMaps predict_image(arch::Network<T>& net, const RgbImage& image);

// POS' = POS / (POS + NEG), NEG' likewise; UNK and EDG mass is discarded.
// Pixels with POS + NEG = 0 become 0.5 / 0.5 and are flagged.
void renormalize_pos_neg(ProbabilityMaps& maps);

// Joint-label prediction for single-softmax networks: per-label probability
// planes plus the argmax label image (0 = background, 1 + k = class k).
struct JointMaps {
  std::vector<std::string> labels;  // "background" then the vocabulary
  int width = 0, height = 0;
  int original_width = 0, original_height = 0;
  double scale = 1.0;
  std::vector<FloatPlane> probs;
  GrayImage argmax;
};

template <typename T>
JointMaps predict_joint(arch::Network<T>& net, const RgbImage& image);

// Painter's compositing: every pixel starts as order[0]; each later class
// paints its index (into `order`) where its renormalized POS exceeds 0.5.
GrayImage composite_single_label(const ProbabilityMaps& maps,
                                 const std::vector<std::string>& order);

// Default order for emitting the 8-label street-facade composite; occluding
// detail classes paint last.
const std::vector<std::string>& ecp_composite_order();

// One little-endian float32 blob per class per plane plus a JSON header
// describing dimensions, scale, and file layout.
void save_probability_maps(const ProbabilityMaps& maps, const std::string& dir,
                           const std::string& stem);
ProbabilityMaps load_probability_maps(const std::string& dir, const std::string& stem);

// Paletted PNG plus a JSON legend mapping palette indices to class names.
void save_label_image(const GrayImage& labels, const std::vector<std::string>& names,
                      const std::string& png_path);

}  // namespace fseg::infer
