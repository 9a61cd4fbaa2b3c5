#include "facadeseg/nn/param.hpp"

#include <algorithm>

namespace fseg::nn {

template <typename T>
Parameter<T>& ParamStore<T>::add(const std::string& name, Shape shape, std::string share_id) {
  if (name.empty()) throw ValidationError("parameter name must be non-empty");
  if (find(name)) throw ValidationError("duplicate parameter name '" + name + "'");
  if (share_id.empty()) share_id = name;

  auto it = by_share_id_.find(share_id);
  std::shared_ptr<ParamStorage<T>> storage;
  if (it != by_share_id_.end()) {
    storage = it->second;
    if (!(storage->value.shape == shape))
      throw ValidationError("parameter '" + name + "' shape " + shape.str() +
                            " conflicts with shared storage '" + share_id + "' shape " +
                            storage->value.shape.str());
  } else {
    storage = std::make_shared<ParamStorage<T>>();
    storage->share_id = share_id;
    storage->value = Tensor<T>(shape);
    storage->grad = Tensor<T>(shape);
    by_share_id_.emplace(share_id, storage);
  }
  params_.push_back(Parameter<T>{name, storage});
  return params_.back();
}

template <typename T>
Parameter<T>* ParamStore<T>::find(const std::string& name) {
  for (auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

template <typename T>
const Parameter<T>* ParamStore<T>::find(const std::string& name) const {
  for (const auto& p : params_)
    if (p.name == name) return &p;
  return nullptr;
}

template <typename T>
std::vector<std::shared_ptr<ParamStorage<T>>> ParamStore<T>::storages() const {
  std::vector<std::shared_ptr<ParamStorage<T>>> out;
  for (const auto& p : params_)
    if (std::find(out.begin(), out.end(), p.storage) == out.end()) out.push_back(p.storage);
  return out;
}

template <typename T>
void ParamStore<T>::zero_grad() {
  for (auto& s : storages()) std::fill(s->grad.data.begin(), s->grad.data.end(), T(0));
}

template <typename T>
std::int64_t ParamStore<T>::param_count() const {
  std::int64_t n = 0;
  for (const auto& s : storages()) n += s->value.shape.count();
  return n;
}

template <typename T>
void ParamStore<T>::register_buffer(const std::string& name, std::vector<T>* values) {
  for (const auto& [bname, ptr] : buffers_)
    if (bname == name) throw ValidationError("duplicate buffer name '" + name + "'");
  buffers_.emplace_back(name, values);
}

template <typename T>
int ParamStore<T>::freeze_prefix(const std::string& prefix) {
  int n = 0;
  for (auto& p : params_)
    if (p.name.rfind(prefix, 0) == 0 && !p.storage->frozen) {
      p.storage->frozen = true;
      ++n;
    }
  return n;
}

template <typename T>
int ParamStore<T>::set_lr_mult_prefix(const std::string& prefix, T mult) {
  int n = 0;
  for (auto& p : params_)
    if (p.name.rfind(prefix, 0) == 0) {
      p.storage->lr_mult = mult;
      ++n;
    }
  return n;
}

template class ParamStore<float>;
template class ParamStore<double>;

}  // namespace fseg::nn
