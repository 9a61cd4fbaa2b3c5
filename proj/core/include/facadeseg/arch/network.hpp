#pragma once

#include <memory>
#include <string>
#include <vector>

#include "facadeseg/arch/spec.hpp"
#include "facadeseg/nn/param.hpp"
#include "facadeseg/nn/tape.hpp"

namespace fseg::arch {

// Flat record of the network's layer sequence, for structural assertions.
// kind: conv3x3 | conv1x9 | conv9x1 | batchnorm | maxpool | unpool |
// leaky_relu | softmax | concat. scope: enc | dec | head | cblock.
struct LayerDesc {
  std::string kind;
  std::string scope;
  std::string name;
};

template <typename T>
struct ForwardResult {
  std::shared_ptr<nn::Tape<T>> tape;
  // stages[s][k]: softmax node of class k at stage s. One stage for
  // multihead/separable; 1 + repeats for compatibility; empty for baseline.
  std::vector<std::vector<typename nn::Tape<T>::NodeId>> stages;
  typename nn::Tape<T>::NodeId joint = -1;  // baseline joint softmax
};

// Encoder-decoder network over the tape. Parameters are registered at
// construction under stable names (enc{b}.conv{i}.*, dec{b}.conv{i}.*,
// head.{class}.*, cblock.{class}.*); compatibility block parameters carry one
// share_id per class, so repeats reuse one storage.
template <typename T>
class Network {
 public:
  // `unshare_compat_blocks` registers a distinct storage per repeat
  // (cblock.{class}.r{r}.*); it exists to test sharing equivalence against
  // the unrolled form.
  explicit Network(ArchSpec spec, bool unshare_compat_blocks = false);

  const ArchSpec& spec() const { return spec_; }
  nn::ParamStore<T>& params() { return params_; }
  const nn::ParamStore<T>& params() const { return params_; }
  const std::vector<LayerDesc>& layers() const { return layers_; }

  // Per forward pass the softmax stage count times class count gives the
  // loss-bearing groups; baseline has exactly one joint group.
  int loss_term_count() const;

  // input (N, 3, H, W) with H, W divisible by 2^blocks. Train mode drives
  // batch-norm batch statistics and running-stat updates.
  ForwardResult<T> forward(const nn::Tensor<T>& input, bool train);

 private:
  struct BnSlot {
    std::vector<T> running_mean, running_var;
  };

  void add_conv(const std::string& name, int in_c, int out_c, int kh, int kw,
                const std::string& scope, const std::string& share_id = "");
  void add_bn(const std::string& name, int channels, const std::string& scope,
              const std::string& share_id = "");
  BnSlot& bn_slot(const std::string& name);

  typename nn::Tape<T>::NodeId run_conv(nn::Tape<T>& tape, typename nn::Tape<T>::NodeId x,
                                        const std::string& name);
  typename nn::Tape<T>::NodeId run_bn(nn::Tape<T>& tape, typename nn::Tape<T>::NodeId x,
                                      const std::string& name, bool train);
  typename nn::Tape<T>::NodeId run_triple(nn::Tape<T>& tape, typename nn::Tape<T>::NodeId x,
                                          const std::string& base);

  ArchSpec spec_;
  bool unshare_;
  nn::ParamStore<T> params_;
  std::vector<LayerDesc> layers_;
  std::vector<std::pair<std::string, std::unique_ptr<BnSlot>>> bn_slots_;
};

// He-scaled truncated-normal weights (cutoff 2), zero biases, unit gammas.
template <typename T>
void init_params(Network<T>& net, std::uint64_t seed);

// Copies every parameter and buffer whose name matches between the nets;
// names absent from the source are drawn from a +-2 truncated standard
// normal scaled by 0.01. A matched name with a different shape is rejected.
template <typename T>
void init_refinement(Network<T>& target, const Network<T>& source, std::uint64_t seed);

extern template class Network<float>;
extern template class Network<double>;

}  // namespace fseg::arch
