#pragma once

#include "facadeseg/nn/param.hpp"

namespace fseg::nn {

// p <- p - lr * lr_mult(p) * (grad + weight_decay * p), once per storage.
// Frozen storages are skipped. Any non-finite grad rejects the whole step
// before any storage is touched.
template <typename T>
void sgd_step(ParamStore<T>& params, T lr, T weight_decay);

extern template void sgd_step<float>(ParamStore<float>&, float, float);
extern template void sgd_step<double>(ParamStore<double>&, double, double);

}  // namespace fseg::nn
