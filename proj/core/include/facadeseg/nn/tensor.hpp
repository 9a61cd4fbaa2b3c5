#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facadeseg/common.hpp"

namespace fseg::nn {

struct Shape {
  int n = 1, c = 1, h = 1, w = 1;

  std::int64_t count() const {
    return static_cast<std::int64_t>(n) * c * h * w;
  }
  bool operator==(const Shape&) const = default;
  std::string str() const {
    return "(" + std::to_string(n) + ", " + std::to_string(c) + ", " + std::to_string(h) +
           ", " + std::to_string(w) + ")";
  }
};

// Dense NCHW tensor, row-major within and across dimensions.
template <typename T>
struct Tensor {
  Shape shape;
  std::vector<T> data;

  Tensor() = default;
  explicit Tensor(Shape s, T fill = T(0))
      : shape(s), data(static_cast<std::size_t>(s.count()), fill) {
    if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1)
      throw ValidationError("tensor dimensions must be >= 1, got " + s.str());
  }

  std::size_t index(int n, int c, int y, int x) const {
    return ((static_cast<std::size_t>(n) * shape.c + c) * shape.h + y) * shape.w + x;
  }
  T& at(int n, int c, int y, int x) { return data[index(n, c, y, x)]; }
  const T& at(int n, int c, int y, int x) const { return data[index(n, c, y, x)]; }

  bool operator==(const Tensor&) const = default;
};

template <typename T>
bool all_finite(const Tensor<T>& t) {
  for (T v : t.data)
    if (!std::isfinite(static_cast<double>(v))) return false;
  return true;
}

}  // namespace fseg::nn
