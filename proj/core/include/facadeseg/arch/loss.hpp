#pragma once

#include <array>
#include <vector>

#include "facadeseg/arch/network.hpp"
#include "facadeseg/data/mask.hpp"

namespace fseg::arch {

struct LossConfig {
  // Indexed by label value {NEG, UNK, POS, EDG}. UNK stays 0: unknown pixels
  // contribute nothing, including to the normalizer.
  std::array<double, 4> label_weights{0.5, 0.0, 1.0, 6.0};
  // Baseline head only: per-joint-label weights (background first).
  std::vector<double> joint_weights;
};

inline constexpr std::uint8_t kJointIgnore = 255;

template <typename T>
struct Batch {
  nn::Tensor<T> images;                           // (N, 3, H, W) scaled to [0, 1]
  std::vector<nn::Tensor<std::uint8_t>> targets;  // per class (N, 1, H, W), values 0..3
  nn::Tensor<std::uint8_t> joint;                 // (N, 1, H, W), joint labels or 255
};

// Joint label: background 0, else 1 + index of the last vocabulary class
// whose plane is POS (later classes paint over earlier). Pixels that are
// UNK or EDG somewhere and POS nowhere become the ignore value.
nn::Tensor<std::uint8_t> joint_labels(const data::MultiLabelMask& mask);

template <typename T>
Batch<T> make_batch(const std::vector<const RgbImage*>& images,
                    const std::vector<const data::MultiLabelMask*>& masks,
                    const std::vector<std::string>& vocab);

// Median-frequency weights over joint labels present in the masks; absent
// labels get weight 0 (they never occur as targets). Ignored pixels are
// excluded from the totals.
std::vector<double> joint_label_weights(const std::vector<data::MultiLabelMask>& masks);

struct LossTerms {
  int node = -1;  // scalar node on the forward tape
  int count = 0;  // softmax groups contributing
};

template <typename T>
LossTerms total_loss(const Network<T>& net, ForwardResult<T>& fwd, const Batch<T>& batch,
                     const LossConfig& config);

}  // namespace fseg::arch
