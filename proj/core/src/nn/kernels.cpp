#include "facadeseg/nn/kernels.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace fseg::nn {

namespace {

template <typename T>
using MatRM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatCM = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

// Column m = y*W + x holds the receptive field of output pixel (y, x);
// row (c*kh + dy)*kw + dx holds input channel c at kernel offset (dy, dx).
template <typename T>
void im2col(const Tensor<T>& input, int n, int kh, int kw, MatCM<T>& cols) {
  int C = input.shape.c, H = input.shape.h, W = input.shape.w;
  int ph = (kh - 1) / 2, pw = (kw - 1) / 2;
  cols.setZero(C * kh * kw, H * W);
  for (int c = 0; c < C; ++c) {
    for (int dy = 0; dy < kh; ++dy) {
      for (int dx = 0; dx < kw; ++dx) {
        int row = (c * kh + dy) * kw + dx;
        for (int y = 0; y < H; ++y) {
          int sy = y + dy - ph;
          if (sy < 0 || sy >= H) continue;
          const T* src = &input.data[input.index(n, c, sy, 0)];
          for (int x = 0; x < W; ++x) {
            int sx = x + dx - pw;
            if (sx < 0 || sx >= W) continue;
            cols(row, y * W + x) = src[sx];
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const MatCM<T>& cols, int n, int kh, int kw, Tensor<T>& grad_input) {
  int C = grad_input.shape.c, H = grad_input.shape.h, W = grad_input.shape.w;
  int ph = (kh - 1) / 2, pw = (kw - 1) / 2;
  for (int c = 0; c < C; ++c) {
    for (int dy = 0; dy < kh; ++dy) {
      for (int dx = 0; dx < kw; ++dx) {
        int row = (c * kh + dy) * kw + dx;
        for (int y = 0; y < H; ++y) {
          int sy = y + dy - ph;
          if (sy < 0 || sy >= H) continue;
          T* dst = &grad_input.data[grad_input.index(n, c, sy, 0)];
          for (int x = 0; x < W; ++x) {
            int sx = x + dx - pw;
            if (sx < 0 || sx >= W) continue;
            dst[sx] += cols(row, y * W + x);
          }
        }
      }
    }
  }
}

template <typename T>
void check_conv_shapes(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
  if (weight.shape.c != input.shape.c)
    throw ValidationError("conv2d: weight expects " + std::to_string(weight.shape.c) +
                          " input channels, input has shape " + input.shape.str() +
                          " vs weight " + weight.shape.str());
  if (weight.shape.h % 2 == 0 || weight.shape.w % 2 == 0)
    throw ValidationError("conv2d: kernel sides must be odd for same padding, got " +
                          weight.shape.str());
  if (bias.shape.c != weight.shape.n || bias.shape.n != 1 || bias.shape.h != 1 ||
      bias.shape.w != 1)
    throw ValidationError("conv2d: bias shape " + bias.shape.str() + " does not match " +
                          std::to_string(weight.shape.n) + " output channels");
}

}  // namespace

template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& weight,
                         const Tensor<T>& bias) {
  check_conv_shapes(input, weight, bias);
  int N = input.shape.n, H = input.shape.h, W = input.shape.w;
  int outC = weight.shape.n, kh = weight.shape.h, kw = weight.shape.w;
  int K = weight.shape.c * kh * kw, M = H * W;

  Tensor<T> out(Shape{N, outC, H, W});
  Eigen::Map<const MatRM<T>> wmat(weight.data.data(), outC, K);
  MatCM<T> cols;
  for (int n = 0; n < N; ++n) {
    im2col(input, n, kh, kw, cols);
    Eigen::Map<MatRM<T>> ymat(&out.data[out.index(n, 0, 0, 0)], outC, M);
    ymat.noalias() = wmat * cols;
    for (int c = 0; c < outC; ++c) ymat.row(c).array() += bias.data[c];
  }
  return out;
}

template <typename T>
void conv2d_backward(const Tensor<T>& input, const Tensor<T>& weight,
                     const Tensor<T>& grad_out, Tensor<T>& grad_input,
                     Tensor<T>& grad_weight, Tensor<T>& grad_bias) {
  int N = input.shape.n, H = input.shape.h, W = input.shape.w;
  int outC = weight.shape.n, kh = weight.shape.h, kw = weight.shape.w;
  int K = weight.shape.c * kh * kw, M = H * W;

  Eigen::Map<const MatRM<T>> wmat(weight.data.data(), outC, K);
  Eigen::Map<MatRM<T>> gwmat(grad_weight.data.data(), outC, K);
  MatCM<T> cols, gcols;
  for (int n = 0; n < N; ++n) {
    im2col(input, n, kh, kw, cols);
    Eigen::Map<const MatRM<T>> gy(&grad_out.data[grad_out.index(n, 0, 0, 0)], outC, M);
    gwmat.noalias() += gy * cols.transpose();
    for (int c = 0; c < outC; ++c) grad_bias.data[c] += gy.row(c).sum();
    gcols.noalias() = wmat.transpose() * gy;
    col2im_add(gcols, n, kh, kw, grad_input);
  }
}

template <typename T>
Tensor<T> maxpool2x2_forward(const Tensor<T>& input, std::vector<std::int32_t>& indices) {
  int N = input.shape.n, C = input.shape.c, H = input.shape.h, W = input.shape.w;
  int oh = (H + 1) / 2, ow = (W + 1) / 2;
  Tensor<T> out(Shape{N, C, oh, ow});
  indices.assign(out.data.size(), 0);

  std::size_t oi = 0;
  for (int n = 0; n < N; ++n) {
    for (int c = 0; c < C; ++c) {
      for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x, ++oi) {
          int y0 = 2 * y, x0 = 2 * x;
          int y1 = std::min(y0 + 1, H - 1), x1 = std::min(x0 + 1, W - 1);
          T best = input.at(n, c, y0, x0);
          std::int32_t arg = y0 * W + x0;
          // Row-major window scan; strict > keeps the first maximum.
          const int ys[2] = {y0, y1}, xs[2] = {x0, x1};
          for (int wy = 0; wy < 2; ++wy)
            for (int wx = 0; wx < 2; ++wx) {
              if (ys[wy] == y0 && xs[wx] == x0) continue;
              if (wy == 1 && ys[1] == y0) continue;
              if (wx == 1 && xs[1] == x0) continue;
              T v = input.at(n, c, ys[wy], xs[wx]);
              if (v > best) {
                best = v;
                arg = ys[wy] * W + xs[wx];
              }
            }
          out.data[oi] = best;
          indices[oi] = arg;
        }
      }
    }
  }
  return out;
}

template <typename T>
void maxpool2x2_backward(const Tensor<T>& grad_out, const std::vector<std::int32_t>& indices,
                         Tensor<T>& grad_input) {
  int plane = grad_input.shape.h * grad_input.shape.w;
  int oplane = grad_out.shape.h * grad_out.shape.w;
  int planes = grad_out.shape.n * grad_out.shape.c;
  for (int p = 0; p < planes; ++p) {
    T* gi = &grad_input.data[static_cast<std::size_t>(p) * plane];
    const T* go = &grad_out.data[static_cast<std::size_t>(p) * oplane];
    const std::int32_t* idx = &indices[static_cast<std::size_t>(p) * oplane];
    for (int i = 0; i < oplane; ++i) gi[idx[i]] += go[i];
  }
}

template <typename T>
Tensor<T> max_unpool2x2_forward(const Tensor<T>& input,
                                const std::vector<std::int32_t>& indices, Shape out_shape) {
  if (indices.size() != input.data.size())
    throw ValidationError("unpool: indices were recorded for a different shape");
  if (out_shape.n != input.shape.n || out_shape.c != input.shape.c ||
      (out_shape.h + 1) / 2 != input.shape.h || (out_shape.w + 1) / 2 != input.shape.w)
    throw ValidationError("unpool: output shape " + out_shape.str() +
                          " does not match pooled input " + input.shape.str());
  Tensor<T> out(out_shape);
  int plane = out_shape.h * out_shape.w;
  int iplane = input.shape.h * input.shape.w;
  int planes = input.shape.n * input.shape.c;
  for (int p = 0; p < planes; ++p) {
    T* dst = &out.data[static_cast<std::size_t>(p) * plane];
    const T* src = &input.data[static_cast<std::size_t>(p) * iplane];
    const std::int32_t* idx = &indices[static_cast<std::size_t>(p) * iplane];
    for (int i = 0; i < iplane; ++i) dst[idx[i]] = src[i];
  }
  return out;
}

template <typename T>
void max_unpool2x2_backward(const Tensor<T>& grad_out,
                            const std::vector<std::int32_t>& indices, Tensor<T>& grad_input) {
  int plane = grad_out.shape.h * grad_out.shape.w;
  int iplane = grad_input.shape.h * grad_input.shape.w;
  int planes = grad_input.shape.n * grad_input.shape.c;
  for (int p = 0; p < planes; ++p) {
    const T* go = &grad_out.data[static_cast<std::size_t>(p) * plane];
    T* gi = &grad_input.data[static_cast<std::size_t>(p) * iplane];
    const std::int32_t* idx = &indices[static_cast<std::size_t>(p) * iplane];
    for (int i = 0; i < iplane; ++i) gi[i] += go[idx[i]];
  }
}

template <typename T>
Tensor<T> batchnorm_forward(const Tensor<T>& input, const Tensor<T>& gamma,
                            const Tensor<T>& beta, std::vector<T>& running_mean,
                            std::vector<T>& running_var, bool train,
                            BatchNormCache<T>& cache) {
  int N = input.shape.n, C = input.shape.c, H = input.shape.h, W = input.shape.w;
  if (gamma.shape.c != C || beta.shape.c != C)
    throw ValidationError("batchnorm: gamma/beta channels do not match input " +
                          input.shape.str());
  if (static_cast<int>(running_mean.size()) != C ||
      static_cast<int>(running_var.size()) != C)
    throw ValidationError("batchnorm: running stats channel count mismatch");
  std::int64_t m = static_cast<std::int64_t>(N) * H * W;
  if (train && m <= 1)
    throw ValidationError("batchnorm: train mode needs more than one value per channel");

  Tensor<T> out(input.shape);
  cache.mean.assign(C, T(0));
  cache.inv_std.assign(C, T(0));
  const T eps = static_cast<T>(kBatchNormEps);

  for (int c = 0; c < C; ++c) {
    T mean, var;
    if (train) {
      double sum = 0;
      for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
          for (int x = 0; x < W; ++x) sum += input.at(n, c, y, x);
      mean = static_cast<T>(sum / m);
      double sq = 0;
      for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
          for (int x = 0; x < W; ++x) {
            double d = input.at(n, c, y, x) - mean;
            sq += d * d;
          }
      var = static_cast<T>(sq / m);  // biased, used for normalization
      T var_unbiased = static_cast<T>(sq / (m - 1));
      const T mom = static_cast<T>(kBatchNormMomentum);
      running_mean[c] = (T(1) - mom) * running_mean[c] + mom * mean;
      running_var[c] = (T(1) - mom) * running_var[c] + mom * var_unbiased;
    } else {
      mean = running_mean[c];
      var = running_var[c];
    }
    T inv_std = T(1) / std::sqrt(var + eps);
    cache.mean[c] = mean;
    cache.inv_std[c] = inv_std;
    T g = gamma.data[c], b = beta.data[c];
    for (int n = 0; n < N; ++n)
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x)
          out.at(n, c, y, x) = (input.at(n, c, y, x) - mean) * inv_std * g + b;
  }
  return out;
}

template <typename T>
void batchnorm_backward(const Tensor<T>& input, const Tensor<T>& gamma,
                        const Tensor<T>& grad_out, const BatchNormCache<T>& cache,
                        const std::vector<T>& running_mean, const std::vector<T>& running_var,
                        bool train, Tensor<T>& grad_input, Tensor<T>& grad_gamma,
                        Tensor<T>& grad_beta) {
  (void)running_mean;
  (void)running_var;
  int N = input.shape.n, C = input.shape.c, H = input.shape.h, W = input.shape.w;
  std::int64_t m = static_cast<std::int64_t>(N) * H * W;

  for (int c = 0; c < C; ++c) {
    T mean = cache.mean[c], inv_std = cache.inv_std[c], g = gamma.data[c];
    double sum_gy = 0, sum_gy_xhat = 0;
    for (int n = 0; n < N; ++n)
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
          T gy = grad_out.at(n, c, y, x);
          T xhat = (input.at(n, c, y, x) - mean) * inv_std;
          sum_gy += gy;
          sum_gy_xhat += gy * xhat;
        }
    grad_beta.data[c] += static_cast<T>(sum_gy);
    grad_gamma.data[c] += static_cast<T>(sum_gy_xhat);

    if (train) {
      // d/dx of normalization through the batch statistics.
      for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
          for (int x = 0; x < W; ++x) {
            T gy = grad_out.at(n, c, y, x);
            T xhat = (input.at(n, c, y, x) - mean) * inv_std;
            double gx = g * inv_std *
                        (gy - static_cast<T>(sum_gy / m) -
                         xhat * static_cast<T>(sum_gy_xhat / m));
            grad_input.at(n, c, y, x) += static_cast<T>(gx);
          }
    } else {
      T scale = g * inv_std;
      for (int n = 0; n < N; ++n)
        for (int y = 0; y < H; ++y)
          for (int x = 0; x < W; ++x)
            grad_input.at(n, c, y, x) += grad_out.at(n, c, y, x) * scale;
    }
  }
}

template <typename T>
Tensor<T> softmax_channels_forward(const Tensor<T>& input) {
  int N = input.shape.n, C = input.shape.c, H = input.shape.h, W = input.shape.w;
  Tensor<T> out(input.shape);
  for (int n = 0; n < N; ++n)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        T mx = input.at(n, 0, y, x);
        for (int c = 1; c < C; ++c) mx = std::max(mx, input.at(n, c, y, x));
        double sum = 0;
        for (int c = 0; c < C; ++c) {
          T e = std::exp(input.at(n, c, y, x) - mx);
          out.at(n, c, y, x) = e;
          sum += e;
        }
        T inv = static_cast<T>(1.0 / sum);
        for (int c = 0; c < C; ++c) out.at(n, c, y, x) *= inv;
      }
  return out;
}

template <typename T>
void softmax_channels_backward(const Tensor<T>& output, const Tensor<T>& grad_out,
                               Tensor<T>& grad_input) {
  int N = output.shape.n, C = output.shape.c, H = output.shape.h, W = output.shape.w;
  for (int n = 0; n < N; ++n)
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        double dot = 0;
        for (int c = 0; c < C; ++c) dot += grad_out.at(n, c, y, x) * output.at(n, c, y, x);
        for (int c = 0; c < C; ++c)
          grad_input.at(n, c, y, x) +=
              output.at(n, c, y, x) * (grad_out.at(n, c, y, x) - static_cast<T>(dot));
      }
}

#define FSEG_INSTANTIATE(T)                                                                  \
  template Tensor<T> conv2d_forward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&); \
  template void conv2d_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,     \
                                   Tensor<T>&, Tensor<T>&, Tensor<T>&);                      \
  template Tensor<T> maxpool2x2_forward<T>(const Tensor<T>&, std::vector<std::int32_t>&);    \
  template void maxpool2x2_backward<T>(const Tensor<T>&, const std::vector<std::int32_t>&,   \
                                       Tensor<T>&);                                          \
  template Tensor<T> max_unpool2x2_forward<T>(const Tensor<T>&,                              \
                                              const std::vector<std::int32_t>&, Shape);      \
  template void max_unpool2x2_backward<T>(const Tensor<T>&,                                  \
                                          const std::vector<std::int32_t>&, Tensor<T>&);     \
  template Tensor<T> batchnorm_forward<T>(const Tensor<T>&, const Tensor<T>&,                \
                                          const Tensor<T>&, std::vector<T>&,                 \
                                          std::vector<T>&, bool, BatchNormCache<T>&);        \
  template void batchnorm_backward<T>(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&,  \
                                      const BatchNormCache<T>&, const std::vector<T>&,       \
                                      const std::vector<T>&, bool, Tensor<T>&, Tensor<T>&,   \
                                      Tensor<T>&);                                           \
  template Tensor<T> softmax_channels_forward<T>(const Tensor<T>&);                          \
  template void softmax_channels_backward<T>(const Tensor<T>&, const Tensor<T>&, Tensor<T>&);

FSEG_INSTANTIATE(float)
FSEG_INSTANTIATE(double)
#undef FSEG_INSTANTIATE

}  // namespace fseg::nn
