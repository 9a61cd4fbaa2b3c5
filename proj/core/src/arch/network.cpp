#include "facadeseg/arch/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace fseg::arch {

namespace {

// Decoder block b mirrors encoder block b; its last conv steps down to the
// next-shallower width so the following unpool sees matching channels.
int decoder_out_channels(const ArchSpec& spec, int block, int conv_i) {
  const auto& blocks = spec.encoder_blocks;
  if (conv_i + 1 < blocks[block].convs) return blocks[block].channels;
  return block > 0 ? blocks[block - 1].channels : blocks[0].channels;
}

bool wants_triples(HeadKind head) {
  return head == HeadKind::kSeparable || head == HeadKind::kCompatibility;
}

}  // namespace

template <typename T>
void Network<T>::add_conv(const std::string& name, int in_c, int out_c, int kh, int kw,
                          const std::string& scope, const std::string& share_id) {
  params_.add(name + ".weight", nn::Shape{out_c, in_c, kh, kw},
              share_id.empty() ? "" : share_id + ".weight");
  params_.add(name + ".bias", nn::Shape{1, out_c, 1, 1},
              share_id.empty() ? "" : share_id + ".bias");
  std::string kind = "conv" + std::to_string(kh) + "x" + std::to_string(kw);
  layers_.push_back({kind, scope, name});
}

template <typename T>
void Network<T>::add_bn(const std::string& name, int channels, const std::string& scope,
                        const std::string& share_id) {
  params_.add(name + ".gamma", nn::Shape{1, channels, 1, 1},
              share_id.empty() ? "" : share_id + ".gamma");
  params_.add(name + ".beta", nn::Shape{1, channels, 1, 1},
              share_id.empty() ? "" : share_id + ".beta");
  auto slot = std::make_unique<BnSlot>();
  slot->running_mean.assign(channels, T(0));
  slot->running_var.assign(channels, T(1));
  params_.register_buffer(name + ".running_mean", &slot->running_mean);
  params_.register_buffer(name + ".running_var", &slot->running_var);
  bn_slots_.emplace_back(name, std::move(slot));
  layers_.push_back({"batchnorm", scope, name});
}

template <typename T>
typename Network<T>::BnSlot& Network<T>::bn_slot(const std::string& name) {
  for (auto& [sname, slot] : bn_slots_)
    if (sname == name) return *slot;
  throw ValidationError("no batchnorm state named '" + name + "'");
}

template <typename T>
Network<T>::Network(ArchSpec spec, bool unshare_compat_blocks)
    : spec_(std::move(spec)), unshare_(unshare_compat_blocks) {
  validate(spec_);
  const auto& blocks = spec_.encoder_blocks;
  int B = static_cast<int>(blocks.size());
  bool triples = wants_triples(spec_.head);

  int in_c = 3;
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < blocks[b].convs; ++i) {
      std::string name = "enc" + std::to_string(b) + ".conv" + std::to_string(i);
      add_conv(name, in_c, blocks[b].channels, 3, 3, "enc");
      layers_.push_back({"leaky_relu", "enc", name});
      in_c = blocks[b].channels;
    }
    layers_.push_back({"maxpool", "enc", "pool" + std::to_string(b)});
  }

  for (int b = B - 1; b >= 0; --b) {
    layers_.push_back({"unpool", "dec", "unpool" + std::to_string(b)});
    for (int i = 0; i < blocks[b].convs; ++i) {
      std::string name = "dec" + std::to_string(b) + ".conv" + std::to_string(i);
      int out_c = decoder_out_channels(spec_, b, i);
      if (triples) {
        add_conv(name + ".h", in_c, out_c, 1, 9, "dec");
        add_bn(name + ".bn", out_c, "dec");
        add_conv(name + ".v", out_c, out_c, 9, 1, "dec");
      } else {
        add_conv(name, in_c, out_c, 3, 3, "dec");
      }
      layers_.push_back({"leaky_relu", "dec", name});
      in_c = out_c;
    }
  }

  if (spec_.head == HeadKind::kBaseline) {
    int joint = static_cast<int>(spec_.classes.size()) + 1;  // plus background
    add_conv("head.joint", in_c, joint, 3, 3, "head");
    layers_.push_back({"softmax", "head", "head.joint"});
  } else {
    for (const auto& cls : spec_.classes) {
      std::string name = "head." + cls;
      if (triples) {
        add_conv(name + ".h", in_c, 4, 1, 9, "head");
        add_bn(name + ".bn", 4, "head");
        add_conv(name + ".v", 4, 4, 9, 1, "head");
      } else {
        add_conv(name, in_c, 4, 3, 3, "head");
      }
      layers_.push_back({"softmax", "head", name});
    }
  }

  if (spec_.head == HeadKind::kCompatibility) {
    int concat_c = static_cast<int>(spec_.classes.size()) * 4;
    for (int r = 0; r < spec_.repeats; ++r) {
      layers_.push_back({"concat", "cblock", "stage" + std::to_string(r + 1)});
      for (const auto& cls : spec_.classes) {
        if (unshare_) {
          add_conv("cblock." + cls + ".r" + std::to_string(r), concat_c, 4, 3, 3, "cblock");
        } else if (r == 0) {
          add_conv("cblock." + cls, concat_c, 4, 3, 3, "cblock", "cblock." + cls);
        } else {
          layers_.push_back({"conv3x3", "cblock", "cblock." + cls});
        }
        layers_.push_back({"softmax", "cblock", "cblock." + cls});
      }
    }
  }
}

template <typename T>
int Network<T>::loss_term_count() const {
  if (spec_.head == HeadKind::kBaseline) return 1;
  int stages = spec_.head == HeadKind::kCompatibility ? 1 + spec_.repeats : 1;
  return stages * static_cast<int>(spec_.classes.size());
}

template <typename T>
typename nn::Tape<T>::NodeId Network<T>::run_conv(nn::Tape<T>& tape,
                                                  typename nn::Tape<T>::NodeId x,
                                                  const std::string& name) {
  auto* w = params_.find(name + ".weight");
  auto* b = params_.find(name + ".bias");
  if (!w || !b) throw ValidationError("no conv named '" + name + "'");
  return tape.conv2d(x, *w, *b);
}

template <typename T>
typename nn::Tape<T>::NodeId Network<T>::run_bn(nn::Tape<T>& tape,
                                                typename nn::Tape<T>::NodeId x,
                                                const std::string& name, bool train) {
  auto* g = params_.find(name + ".gamma");
  auto* b = params_.find(name + ".beta");
  if (!g || !b) throw ValidationError("no batchnorm named '" + name + "'");
  BnSlot& slot = bn_slot(name);
  return tape.batchnorm2d(x, *g, *b, slot.running_mean, slot.running_var, train);
}

template <typename T>
ForwardResult<T> Network<T>::forward(const nn::Tensor<T>& input, bool train) {
  const auto& blocks = spec_.encoder_blocks;
  int B = static_cast<int>(blocks.size());
  int div = 1 << B;
  if (input.shape.c != 3)
    throw ValidationError("network expects 3 input channels, got " + input.shape.str());
  if (input.shape.h % div != 0 || input.shape.w % div != 0)
    throw ValidationError("input " + input.shape.str() + " not divisible by 2^" +
                          std::to_string(B));
  bool triples = wants_triples(spec_.head);
  T slope = static_cast<T>(spec_.leaky_slope);

  ForwardResult<T> result;
  result.tape = std::make_shared<nn::Tape<T>>();
  nn::Tape<T>& tape = *result.tape;

  auto x = tape.input(input);
  std::vector<typename nn::Tape<T>::NodeId> pools(B);
  for (int b = 0; b < B; ++b) {
    for (int i = 0; i < blocks[b].convs; ++i) {
      x = run_conv(tape, x, "enc" + std::to_string(b) + ".conv" + std::to_string(i));
      x = tape.leaky_relu(x, slope);
    }
    x = tape.maxpool2x2(x);
    pools[b] = x;
  }

  for (int b = B - 1; b >= 0; --b) {
    x = tape.max_unpool2x2(x, pools[b]);
    for (int i = 0; i < blocks[b].convs; ++i) {
      std::string name = "dec" + std::to_string(b) + ".conv" + std::to_string(i);
      if (triples) {
        x = run_conv(tape, x, name + ".h");
        x = run_bn(tape, x, name + ".bn", train);
        x = run_conv(tape, x, name + ".v");
      } else {
        x = run_conv(tape, x, name);
      }
      x = tape.leaky_relu(x, slope);
    }
  }

  if (spec_.head == HeadKind::kBaseline) {
    auto logits = run_conv(tape, x, "head.joint");
    result.joint = tape.softmax_channels(logits);
    return result;
  }

  std::vector<typename nn::Tape<T>::NodeId> stage;
  for (const auto& cls : spec_.classes) {
    std::string name = "head." + cls;
    typename nn::Tape<T>::NodeId logits;
    if (triples) {
      logits = run_conv(tape, x, name + ".h");
      logits = run_bn(tape, logits, name + ".bn", train);
      logits = run_conv(tape, logits, name + ".v");
    } else {
      logits = run_conv(tape, x, name);
    }
    stage.push_back(tape.softmax_channels(logits));
  }
  result.stages.push_back(stage);

  if (spec_.head == HeadKind::kCompatibility) {
    for (int r = 0; r < spec_.repeats; ++r) {
      auto joined = tape.concat_channels(result.stages.back());
      std::vector<typename nn::Tape<T>::NodeId> next;
      for (const auto& cls : spec_.classes) {
        std::string name =
            unshare_ ? "cblock." + cls + ".r" + std::to_string(r) : "cblock." + cls;
        next.push_back(tape.softmax_channels(run_conv(tape, joined, name)));
      }
      result.stages.push_back(next);
    }
  }
  return result;
}

template <typename T>
void init_params(Network<T>& net, std::uint64_t seed) {
  Rng rng(seed);
  std::set<std::string> done;
  for (auto& p : net.params().params()) {
    if (!done.insert(p.storage->share_id).second) continue;
    auto& v = p.storage->value;
    const std::string& name = p.name;
    auto ends_with = [&name](const char* suffix) {
      std::string s(suffix);
      return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".weight")) {
      double fan_in = static_cast<double>(v.shape.c) * v.shape.h * v.shape.w;
      T std_dev = static_cast<T>(std::sqrt(2.0 / fan_in));
      for (auto& x : v.data) x = static_cast<T>(rng.truncated_normal()) * std_dev;
    } else if (ends_with(".gamma")) {
      std::fill(v.data.begin(), v.data.end(), T(1));
    } else {
      std::fill(v.data.begin(), v.data.end(), T(0));  // biases, betas
    }
    std::fill(p.storage->grad.data.begin(), p.storage->grad.data.end(), T(0));
  }
  for (auto& [name, buf] : net.params().buffers()) {
    bool is_var = name.size() >= 4 && name.compare(name.size() - 4, 4, "_var") == 0;
    std::fill(buf->begin(), buf->end(), is_var ? T(1) : T(0));
  }
}

template <typename T>
void init_refinement(Network<T>& target, const Network<T>& source, std::uint64_t seed) {
  Rng rng(seed);
  std::set<std::string> done;
  for (auto& p : target.params().params()) {
    if (!done.insert(p.storage->share_id).second) continue;
    const auto* src = source.params().find(p.name);
    if (src) {
      if (!(src->storage->value.shape == p.storage->value.shape))
        throw ValidationError("refinement: '" + p.name + "' has shape " +
                              p.storage->value.shape.str() + " but source has " +
                              src->storage->value.shape.str());
      p.storage->value = src->storage->value;
    } else {
      for (auto& x : p.storage->value.data)
        x = static_cast<T>(rng.truncated_normal() * 0.01);
    }
    std::fill(p.storage->grad.data.begin(), p.storage->grad.data.end(), T(0));
  }
  for (auto& [name, buf] : target.params().buffers()) {
    const std::vector<T>* src_buf = nullptr;
    for (const auto& [sname, svals] : source.params().buffers())
      if (sname == name) {
        src_buf = svals;
        break;
      }
    if (src_buf && src_buf->size() == buf->size()) {
      *buf = *src_buf;
    } else {
      bool is_var = name.size() >= 4 && name.compare(name.size() - 4, 4, "_var") == 0;
      std::fill(buf->begin(), buf->end(), is_var ? T(1) : T(0));
    }
  }
}

template class Network<float>;
template class Network<double>;
template void init_params<float>(Network<float>&, std::uint64_t);
template void init_params<double>(Network<double>&, std::uint64_t);
template void init_refinement<float>(Network<float>&, const Network<float>&, std::uint64_t);
template void init_refinement<double>(Network<double>&, const Network<double>&, std::uint64_t);

}  // namespace fseg::arch
