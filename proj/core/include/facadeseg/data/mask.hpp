#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facadeseg/image.hpp"

namespace fseg::data {

// Per-pixel state of one class layer.
enum LabelValue : std::uint8_t { NEG = 0, UNK = 1, POS = 2, EDG = 3 };

// One label plane per class; planes share dimensions and hold only {0..3}.
struct MultiLabelMask {
  std::vector<std::string> vocab;
  std::vector<GrayImage> planes;  // parallel to vocab
  int width = 0;
  int height = 0;

  MultiLabelMask() = default;
  MultiLabelMask(std::vector<std::string> classes, int w, int h)
      : vocab(std::move(classes)),
        planes(vocab.size(), GrayImage(w, h, NEG)),
        width(w),
        height(h) {}

  GrayImage& plane(const std::string& cls);
  const GrayImage& plane(const std::string& cls) const;
  int class_index(const std::string& cls) const;  // -1 when absent

  bool operator==(const MultiLabelMask& o) const = default;
};

void validate(const MultiLabelMask& mask);

// One PNG per class under `dir`, named `<image_id>.<class>.png`, plus
// `<image_id>.mask.json` listing the vocabulary in order.
void encode_mask(const MultiLabelMask& mask, const std::string& dir,
                 const std::string& image_id);
MultiLabelMask decode_mask(const std::string& dir, const std::string& image_id);

}  // namespace fseg::data
