#include "facadeseg/nn/tape.hpp"

#include <algorithm>
#include <cmath>

namespace fseg::nn {

template <typename T>
int Tape<T>::check(NodeId id) const {
  if (id < 0 || id >= static_cast<int>(nodes_.size()))
    throw ValidationError("tape: node id " + std::to_string(id) + " out of range");
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::push(Node node) {
  if (!all_finite(node.value))
    throw RuntimeFailure("op '" + node.op + "' produced non-finite values");
  nodes_.push_back(std::move(node));
  return static_cast<NodeId>(nodes_.size() - 1);
}

template <typename T>
void Tape<T>::ensure_grad(NodeId id) {
  Node& n = nodes_[id];
  if (n.grad.data.empty()) n.grad = Tensor<T>(n.value.shape);
}

template <typename T>
T Tape<T>::scalar(NodeId id) const {
  const Tensor<T>& v = value(id);
  if (v.shape.count() != 1)
    throw ValidationError("node is not scalar, shape " + v.shape.str());
  return v.data[0];
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::input(Tensor<T> value) {
  Node node;
  node.op = "input";
  node.value = std::move(value);
  return push(std::move(node));
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::leaf(const Parameter<T>& p) {
  if (!p.storage) throw ValidationError("parameter '" + p.name + "' has no storage");
  for (const auto& [storage, id] : leaf_cache_)
    if (storage == p.storage.get()) return id;

  Node node;
  node.op = "param:" + p.name;
  node.value = p.storage->value;
  node.needs_grad = true;
  node.param = p.storage;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id]() {
    Node& n = nodes_[id];
    for (std::size_t i = 0; i < n.grad.data.size(); ++i)
      n.param->grad.data[i] += n.grad.data[i];
  };
  leaf_cache_.emplace_back(p.storage.get(), id);
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::conv2d(NodeId x, const Parameter<T>& weight,
                                         const Parameter<T>& bias) {
  NodeId w = leaf(weight), b = leaf(bias);
  Node node;
  node.op = "conv2d:" + weight.name;
  node.value = conv2d_forward(nodes_[check(x)].value, nodes_[w].value, nodes_[b].value);
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x, w, b]() {
    ensure_grad(x);
    ensure_grad(w);
    ensure_grad(b);
    conv2d_backward(nodes_[x].value, nodes_[w].value, nodes_[id].grad, nodes_[x].grad,
                    nodes_[w].grad, nodes_[b].grad);
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::maxpool2x2(NodeId x) {
  auto indices = std::make_shared<std::vector<std::int32_t>>();
  Node node;
  node.op = "maxpool2x2";
  node.pre_pool_shape = nodes_[check(x)].value.shape;
  node.value = maxpool2x2_forward(nodes_[x].value, *indices);
  node.pool_indices = indices;
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x, indices]() {
    ensure_grad(x);
    maxpool2x2_backward(nodes_[id].grad, *indices, nodes_[x].grad);
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::max_unpool2x2(NodeId x, NodeId pool) {
  const Node& src = nodes_[check(pool)];
  if (!src.pool_indices)
    throw ValidationError("unpool: node " + std::to_string(pool) + " is not a maxpool");
  auto indices = src.pool_indices;
  Shape out_shape = src.pre_pool_shape;
  Node node;
  node.op = "max_unpool2x2";
  node.value = max_unpool2x2_forward(nodes_[check(x)].value, *indices, out_shape);
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x, indices]() {
    ensure_grad(x);
    max_unpool2x2_backward(nodes_[id].grad, *indices, nodes_[x].grad);
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::batchnorm2d(NodeId x, const Parameter<T>& gamma,
                                              const Parameter<T>& beta,
                                              std::vector<T>& running_mean,
                                              std::vector<T>& running_var, bool train) {
  NodeId g = leaf(gamma), b = leaf(beta);
  auto cache = std::make_shared<BatchNormCache<T>>();
  Node node;
  node.op = "batchnorm2d:" + gamma.name;
  node.value = batchnorm_forward(nodes_[check(x)].value, nodes_[g].value, nodes_[b].value,
                                 running_mean, running_var, train, *cache);
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x, g, b, cache, train]() {
    ensure_grad(x);
    ensure_grad(g);
    ensure_grad(b);
    std::vector<T> unused;
    batchnorm_backward(nodes_[x].value, nodes_[g].value, nodes_[id].grad, *cache, unused,
                       unused, train, nodes_[x].grad, nodes_[g].grad, nodes_[b].grad);
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::leaky_relu(NodeId x, T slope) {
  const Tensor<T>& in = nodes_[check(x)].value;
  Node node;
  node.op = "leaky_relu";
  node.value = Tensor<T>(in.shape);
  for (std::size_t i = 0; i < in.data.size(); ++i)
    node.value.data[i] = in.data[i] >= T(0) ? in.data[i] : slope * in.data[i];
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x, slope]() {
    ensure_grad(x);
    const Tensor<T>& in = nodes_[x].value;
    const Tensor<T>& gy = nodes_[id].grad;
    Tensor<T>& gx = nodes_[x].grad;
    for (std::size_t i = 0; i < in.data.size(); ++i)
      gx.data[i] += in.data[i] >= T(0) ? gy.data[i] : slope * gy.data[i];
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::softmax_channels(NodeId x) {
  Node node;
  node.op = "softmax_channels";
  node.value = softmax_channels_forward(nodes_[check(x)].value);
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, x]() {
    ensure_grad(x);
    softmax_channels_backward(nodes_[id].value, nodes_[id].grad, nodes_[x].grad);
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::concat_channels(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw ValidationError("concat: empty input list");
  Shape first = nodes_[check(xs[0])].value.shape;
  int total_c = 0;
  for (NodeId x : xs) {
    const Shape& s = nodes_[check(x)].value.shape;
    if (s.n != first.n || s.h != first.h || s.w != first.w)
      throw ValidationError("concat: shape " + s.str() + " does not match " + first.str());
    total_c += s.c;
  }

  Node node;
  node.op = "concat_channels";
  node.value = Tensor<T>(Shape{first.n, total_c, first.h, first.w});
  int c_off = 0;
  for (NodeId x : xs) {
    const Tensor<T>& in = nodes_[x].value;
    for (int n = 0; n < in.shape.n; ++n)
      for (int c = 0; c < in.shape.c; ++c)
        std::copy(&in.data[in.index(n, c, 0, 0)],
                  &in.data[in.index(n, c, 0, 0)] + in.shape.h * in.shape.w,
                  &node.value.data[node.value.index(n, c_off + c, 0, 0)]);
    c_off += in.shape.c;
  }
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, xs]() {
    const Tensor<T>& gy = nodes_[id].grad;
    int c_off = 0;
    for (NodeId x : xs) {
      ensure_grad(x);
      Tensor<T>& gx = nodes_[x].grad;
      for (int n = 0; n < gx.shape.n; ++n)
        for (int c = 0; c < gx.shape.c; ++c) {
          const T* src = &gy.data[gy.index(n, c_off + c, 0, 0)];
          T* dst = &gx.data[gx.index(n, c, 0, 0)];
          for (int i = 0; i < gx.shape.h * gx.shape.w; ++i) dst[i] += src[i];
        }
      c_off += gx.shape.c;
    }
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::weighted_cross_entropy(NodeId probs,
                                                         const Tensor<std::uint8_t>& target,
                                                         const std::vector<T>& class_weights,
                                                         std::uint8_t ignore_value) {
  const Tensor<T>& p = nodes_[check(probs)].value;
  if (static_cast<int>(class_weights.size()) != p.shape.c)
    throw ValidationError("cross entropy: " + std::to_string(class_weights.size()) +
                          " class weights for " + std::to_string(p.shape.c) + " channels");
  if (target.shape.n != p.shape.n || target.shape.c != 1 || target.shape.h != p.shape.h ||
      target.shape.w != p.shape.w)
    throw ValidationError("cross entropy: target shape " + target.shape.str() +
                          " does not match probs " + p.shape.str());
  for (T w : class_weights)
    if (w < T(0)) throw ValidationError("cross entropy: negative class weight");

  const T floor = static_cast<T>(1e-12);
  double loss_sum = 0, weight_sum = 0;
  for (int n = 0; n < p.shape.n; ++n)
    for (int y = 0; y < p.shape.h; ++y)
      for (int x = 0; x < p.shape.w; ++x) {
        std::uint8_t t = target.at(n, 0, y, x);
        if (t == ignore_value) continue;
        if (t >= class_weights.size())
          throw ValidationError("cross entropy: target label " + std::to_string(t) +
                                " out of range at (" + std::to_string(x) + ", " +
                                std::to_string(y) + ")");
        T w = class_weights[t];
        if (w == T(0)) continue;
        loss_sum += w * -std::log(std::max(p.at(n, t, y, x), floor));
        weight_sum += w;
      }

  Node node;
  node.op = "weighted_cross_entropy";
  node.value = Tensor<T>(Shape{1, 1, 1, 1});
  node.value.data[0] = weight_sum > 0 ? static_cast<T>(loss_sum / weight_sum) : T(0);
  node.needs_grad = true;
  auto tgt = std::make_shared<Tensor<std::uint8_t>>(target);
  auto weights = std::make_shared<std::vector<T>>(class_weights);
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, probs, tgt, weights, ignore_value, weight_sum, floor]() {
    if (weight_sum <= 0) return;
    ensure_grad(probs);
    const Tensor<T>& p = nodes_[probs].value;
    Tensor<T>& gp = nodes_[probs].grad;
    T seed = nodes_[id].grad.data[0];
    T inv_wsum = static_cast<T>(1.0 / weight_sum);
    for (int n = 0; n < p.shape.n; ++n)
      for (int y = 0; y < p.shape.h; ++y)
        for (int x = 0; x < p.shape.w; ++x) {
          std::uint8_t t = tgt->at(n, 0, y, x);
          if (t == ignore_value) continue;
          T w = (*weights)[t];
          if (w == T(0)) continue;
          T pv = p.at(n, t, y, x);
          if (pv <= floor) continue;  // clamped region, locally constant
          gp.at(n, t, y, x) += seed * -w * inv_wsum / pv;
        }
  };
  return id;
}

template <typename T>
typename Tape<T>::NodeId Tape<T>::sum_scalars(const std::vector<NodeId>& losses) {
  if (losses.empty()) throw ValidationError("sum_scalars: empty input list");
  double total = 0;
  for (NodeId l : losses) total += scalar(check(l));
  Node node;
  node.op = "sum_scalars";
  node.value = Tensor<T>(Shape{1, 1, 1, 1});
  node.value.data[0] = static_cast<T>(total);
  node.needs_grad = true;
  NodeId id = push(std::move(node));
  nodes_[id].backprop = [this, id, losses]() {
    T seed = nodes_[id].grad.data[0];
    for (NodeId l : losses) {
      ensure_grad(l);
      nodes_[l].grad.data[0] += seed;
    }
  };
  return id;
}

template <typename T>
void Tape<T>::backward(NodeId root) {
  if (backward_done_) throw ValidationError("tape: backward already ran");
  backward_done_ = true;
  check(root);
  if (nodes_[root].value.shape.count() != 1)
    throw ValidationError("backward root must be scalar, shape " +
                          nodes_[root].value.shape.str());
  ensure_grad(root);
  nodes_[root].grad.data[0] = T(1);
  for (NodeId id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.grad.data.empty() || !n.backprop) continue;
    if (!all_finite(n.grad))
      throw RuntimeFailure("op '" + n.op + "' received non-finite gradients");
    n.backprop();
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace fseg::nn
