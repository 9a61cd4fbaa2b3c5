#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "facadeseg/nn/kernels.hpp"
#include "facadeseg/nn/param.hpp"
#include "facadeseg/nn/tensor.hpp"

namespace fseg::nn {

// Single-use reverse-mode graph. Ops append nodes in execution order, so
// reverse creation order is a valid topological order for backward. Every
// op's output is checked finite; poison surfaces as a RuntimeFailure naming
// the op.
template <typename T>
class Tape {
 public:
  using NodeId = int;

  NodeId input(Tensor<T> value);
  // Leaves bound to storages dedup: the same storage always yields the same
  // node, so shared weights accumulate their uses into one grad.
  NodeId leaf(const Parameter<T>& p);

  NodeId conv2d(NodeId x, const Parameter<T>& weight, const Parameter<T>& bias);
  NodeId maxpool2x2(NodeId x);
  // `pool` must be a node returned by maxpool2x2; restores its input shape.
  NodeId max_unpool2x2(NodeId x, NodeId pool);
  NodeId batchnorm2d(NodeId x, const Parameter<T>& gamma, const Parameter<T>& beta,
                     std::vector<T>& running_mean, std::vector<T>& running_var, bool train);
  NodeId leaky_relu(NodeId x, T slope);
  NodeId softmax_channels(NodeId x);
  NodeId concat_channels(const std::vector<NodeId>& xs);

  // target: one label per pixel (N, 1, H, W), valued in [0, channels) or
  // `ignore_value`. class_weights is indexed by label. loss =
  // sum(w[t] * -log max(p[t], 1e-12)) / sum(w[t]); an all-ignored or
  // all-zero-weight target yields exactly 0.
  NodeId weighted_cross_entropy(NodeId probs, const Tensor<std::uint8_t>& target,
                                const std::vector<T>& class_weights,
                                std::uint8_t ignore_value = 255);
  NodeId sum_scalars(const std::vector<NodeId>& losses);

  const Tensor<T>& value(NodeId id) const { return nodes_[check(id)].value; }
  const Tensor<T>& grad(NodeId id) const { return nodes_[check(id)].grad; }
  T scalar(NodeId id) const;

  // Seeds d(root)/d(root) = 1 and accumulates into every parameter storage
  // reachable from the root. Call at most once per tape.
  void backward(NodeId root);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    std::string op;
    Tensor<T> value;
    Tensor<T> grad;
    bool needs_grad = false;
    std::shared_ptr<ParamStorage<T>> param;  // set on leaves
    std::function<void()> backprop;          // adds into input node grads
    // maxpool bookkeeping for the paired unpool
    Shape pre_pool_shape;
    std::shared_ptr<std::vector<std::int32_t>> pool_indices;
  };

  int check(NodeId id) const;
  NodeId push(Node node);
  void ensure_grad(NodeId id);

  std::vector<Node> nodes_;
  std::vector<std::pair<const ParamStorage<T>*, NodeId>> leaf_cache_;
  bool backward_done_ = false;
};

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace fseg::nn
