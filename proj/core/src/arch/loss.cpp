#include "facadeseg/arch/loss.hpp"

#include <algorithm>

namespace fseg::arch {

using data::MultiLabelMask;

nn::Tensor<std::uint8_t> joint_labels(const MultiLabelMask& mask) {
  nn::Tensor<std::uint8_t> out(nn::Shape{1, 1, mask.height, mask.width});
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      int label = 0;
      bool uncertain = false;
      for (std::size_t c = 0; c < mask.planes.size(); ++c) {
        std::uint8_t v = mask.planes[c].at(x, y);
        if (v == data::POS) label = static_cast<int>(c) + 1;
        else if (v == data::UNK || v == data::EDG) uncertain = true;
      }
      out.at(0, 0, y, x) =
          label > 0 ? static_cast<std::uint8_t>(label) : (uncertain ? kJointIgnore : 0);
    }
  return out;
}

template <typename T>
Batch<T> make_batch(const std::vector<const RgbImage*>& images,
                    const std::vector<const MultiLabelMask*>& masks,
                    const std::vector<std::string>& vocab) {
  if (images.empty() || images.size() != masks.size())
    throw ValidationError("batch needs equally many images and masks");
  int N = static_cast<int>(images.size());
  int H = images[0]->height, W = images[0]->width;

  Batch<T> batch;
  batch.images = nn::Tensor<T>(nn::Shape{N, 3, H, W});
  for (const auto& cls : vocab) {
    (void)cls;
    batch.targets.emplace_back(nn::Shape{N, 1, H, W});
  }
  batch.joint = nn::Tensor<std::uint8_t>(nn::Shape{N, 1, H, W});

  for (int n = 0; n < N; ++n) {
    const RgbImage& img = *images[n];
    const MultiLabelMask& mask = *masks[n];
    if (img.width != W || img.height != H || mask.width != W || mask.height != H)
      throw ValidationError("batch samples must share dimensions");
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        const std::uint8_t* px = img.pixel(x, y);
        for (int c = 0; c < 3; ++c)
          batch.images.at(n, c, y, x) = static_cast<T>(px[c]) / T(255);
      }
    for (std::size_t k = 0; k < vocab.size(); ++k) {
      const GrayImage& plane = mask.plane(vocab[k]);
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) batch.targets[k].at(n, 0, y, x) = plane.at(x, y);
    }
    nn::Tensor<std::uint8_t> joint = joint_labels(mask);
    std::copy(joint.data.begin(), joint.data.end(),
              batch.joint.data.begin() + batch.joint.index(n, 0, 0, 0));
  }
  return batch;
}

std::vector<double> joint_label_weights(const std::vector<MultiLabelMask>& masks) {
  if (masks.empty()) throw ValidationError("no masks to derive joint weights from");
  std::size_t labels = masks[0].vocab.size() + 1;
  std::vector<std::uint64_t> counts(labels, 0);
  std::uint64_t total = 0;
  for (const auto& mask : masks) {
    if (mask.vocab.size() + 1 != labels)
      throw ValidationError("masks disagree on vocabulary size");
    nn::Tensor<std::uint8_t> joint = joint_labels(mask);
    for (std::uint8_t v : joint.data) {
      if (v == kJointIgnore) continue;
      ++counts[v];
      ++total;
    }
  }
  if (total == 0) throw ValidationError("every pixel is ignored; no joint statistics");

  std::vector<double> freqs;
  for (std::uint64_t c : counts)
    if (c > 0) freqs.push_back(static_cast<double>(c) / static_cast<double>(total));
  std::sort(freqs.begin(), freqs.end());
  double median = freqs.size() % 2 == 1
                      ? freqs[freqs.size() / 2]
                      : 0.5 * (freqs[freqs.size() / 2 - 1] + freqs[freqs.size() / 2]);

  std::vector<double> weights(labels, 0.0);
  for (std::size_t l = 0; l < labels; ++l)
    if (counts[l] > 0)
      weights[l] = median / (static_cast<double>(counts[l]) / static_cast<double>(total));
  return weights;
}

template <typename T>
LossTerms total_loss(const Network<T>& net, ForwardResult<T>& fwd, const Batch<T>& batch,
                     const LossConfig& config) {
  nn::Tape<T>& tape = *fwd.tape;
  LossTerms terms;

  if (net.spec().head == HeadKind::kBaseline) {
    if (fwd.joint < 0) throw ValidationError("forward result has no joint output");
    if (config.joint_weights.empty())
      throw ValidationError("baseline loss needs joint label weights");
    std::vector<T> w(config.joint_weights.begin(), config.joint_weights.end());
    terms.node = tape.weighted_cross_entropy(fwd.joint, batch.joint, w, kJointIgnore);
    terms.count = 1;
    return terms;
  }

  if (batch.targets.size() != net.spec().classes.size())
    throw ValidationError("batch has " + std::to_string(batch.targets.size()) +
                          " class targets for " + std::to_string(net.spec().classes.size()) +
                          " network classes");
  std::vector<T> w(config.label_weights.begin(), config.label_weights.end());
  std::vector<int> losses;
  for (auto& stage : fwd.stages)
    for (std::size_t k = 0; k < stage.size(); ++k)
      losses.push_back(tape.weighted_cross_entropy(stage[k], batch.targets[k], w));
  terms.node = tape.sum_scalars(losses);
  terms.count = static_cast<int>(losses.size());
  return terms;
}

template Batch<float> make_batch<float>(const std::vector<const RgbImage*>&,
                                        const std::vector<const data::MultiLabelMask*>&,
                                        const std::vector<std::string>&);
template Batch<double> make_batch<double>(const std::vector<const RgbImage*>&,
                                          const std::vector<const data::MultiLabelMask*>&,
                                          const std::vector<std::string>&);
template LossTerms total_loss<float>(const Network<float>&, ForwardResult<float>&,
                                     const Batch<float>&, const LossConfig&);
template LossTerms total_loss<double>(const Network<double>&, ForwardResult<double>&,
                                      const Batch<double>&, const LossConfig&);

}  // namespace fseg::arch
