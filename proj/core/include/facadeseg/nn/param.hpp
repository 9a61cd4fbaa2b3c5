#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "facadeseg/nn/tensor.hpp"

namespace fseg::nn {

// One physical weight buffer. Parameters that share a storage (same share_id)
// read and update the same values and accumulate into the same grad.
template <typename T>
struct ParamStorage {
  std::string share_id;
  Tensor<T> value;
  Tensor<T> grad;
  T lr_mult = T(1);
  bool frozen = false;
};

// Named view of a storage. The name is the layer path; distinct names may
// alias one storage.
template <typename T>
struct Parameter {
  std::string name;
  std::shared_ptr<ParamStorage<T>> storage;
};

// Ordered parameter registry plus named per-channel buffers (batch-norm
// running statistics). Order is creation order and fixes serialization.
template <typename T>
class ParamStore {
 public:
  // share_id defaults to the name (unshared). Re-using a share_id attaches a
  // new view to the existing storage; the shape must match.
  Parameter<T>& add(const std::string& name, Shape shape, std::string share_id = "");

  Parameter<T>* find(const std::string& name);
  const Parameter<T>* find(const std::string& name) const;

  std::vector<Parameter<T>>& params() { return params_; }
  const std::vector<Parameter<T>>& params() const { return params_; }

  // Unique storages in first-appearance order.
  std::vector<std::shared_ptr<ParamStorage<T>>> storages() const;

  void zero_grad();
  std::int64_t param_count() const;  // unique scalars across storages

  void register_buffer(const std::string& name, std::vector<T>* values);
  const std::vector<std::pair<std::string, std::vector<T>*>>& buffers() const {
    return buffers_;
  }

  // Marks frozen every storage referenced by a view whose name starts with
  // `prefix`. Returns the number of storages affected.
  int freeze_prefix(const std::string& prefix);
  int set_lr_mult_prefix(const std::string& prefix, T mult);

 private:
  std::vector<Parameter<T>> params_;
  std::map<std::string, std::shared_ptr<ParamStorage<T>>> by_share_id_;
  std::vector<std::pair<std::string, std::vector<T>*>> buffers_;
};

}  // namespace fseg::nn
