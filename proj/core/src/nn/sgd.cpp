#include "facadeseg/nn/sgd.hpp"

namespace fseg::nn {

template <typename T>
void sgd_step(ParamStore<T>& params, T lr, T weight_decay) {
  if (!(lr >= T(0))) throw ValidationError("sgd: learning rate must be >= 0");
  if (weight_decay < T(0)) throw ValidationError("sgd: weight decay must be >= 0");

  auto storages = params.storages();
  for (const auto& s : storages) {
    if (s->frozen) continue;
    if (!all_finite(s->grad))
      throw RuntimeFailure("sgd: non-finite gradient in '" + s->share_id + "'; step rejected");
  }
  for (auto& s : storages) {
    if (s->frozen) continue;
    T step = lr * s->lr_mult;
    for (std::size_t i = 0; i < s->value.data.size(); ++i)
      s->value.data[i] -= step * (s->grad.data[i] + weight_decay * s->value.data[i]);
  }
}

template void sgd_step<float>(ParamStore<float>&, float, float);
template void sgd_step<double>(ParamStore<double>&, double, double);

}  // namespace fseg::nn
