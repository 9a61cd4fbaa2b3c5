#pragma once

#include <cstdint>
#include <vector>

#include "facadeseg/nn/tensor.hpp"

namespace fseg::nn {

// Cross-correlation with 'same' zero padding (odd kernel sides). weight shape
// (outC, inC, kh, kw), bias (1, outC, 1, 1). Output matches input H, W.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias);

template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& weight,
                     const Tensor<T>& grad_out, Tensor<T>& grad_input,
                     Tensor<T>& grad_weight, Tensor<T>& grad_bias);

// 2x2 stride-2 max pooling. Odd H or W is handled by replicating the last
// row/column into the window, so every argmax refers to a real input pixel.
// Ties break to the first position in row-major order. `indices` stores, per
// output element, the flat y*W + x offset within its (n, c) input plane.
template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& input, std::vector<std::int32_t>& indices);

template <typename T>
void maxpool2x2_backward(const Tensor<T>& grad_out, const std::vector<std::int32_t>& indices,
                         Tensor<T>& grad_input);

// Scatters `input` values to the recorded argmax positions of a pool with
// output shape `input.shape` and input shape `out_shape`; zeros elsewhere.
template <typename T>
Tensor<T> max_unpool2x2_forward(const Tensor<T>& input,
                                const std::vector<std::int32_t>& indices, Shape out_shape);

template <typename T>
void max_unpool2x2_backward(const Tensor<T>& grad_out,
                            const std::vector<std::int32_t>& indices, Tensor<T>& grad_input);

template <typename T>
struct BatchNormCache {
  std::vector<T> mean, inv_std;  // per channel, train mode
};

// Train mode normalizes by biased batch variance (eps 1e-5) and updates
// running stats with momentum 0.1, using the unbiased variance for the
// running estimate. Eval mode normalizes by the running stats.
template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& input, const Tensor<T>& gamma,
                            const Tensor<T>& beta, std::vector<T>& running_mean,
                            std::vector<T>& running_var, bool train, BatchNormCache<T>& cache);

template <typename T>
void batchnorm_backward(const Tensor<T>& input, const Tensor<T>& gamma,
                        const Tensor<T>& grad_out, const BatchNormCache<T>& cache,
                        const std::vector<T>& running_mean, const std::vector<T>& running_var,
                        bool train, Tensor<T>& grad_input, Tensor<T>& grad_gamma,
                        Tensor<T>& grad_beta);

// Channel-wise softmax per (n, y, x), stabilized by max subtraction.
template <typename T>
Tensor<T> softmax_channels_forward(const Tensor<T>& input);

template <typename T>
void softmax_channels_backward(const Tensor<T>& output, const Tensor<T>& grad_out,
                               Tensor<T>& grad_input);

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

}  // namespace fseg::nn
