#pragma once

#include <array>

namespace fseg {

// Row-major 3x3 matrix acting on homogeneous 2D points.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }
  static Mat3 translation(double tx, double ty) { return Mat3{{1, 0, tx, 0, 1, ty, 0, 0, 1}}; }

  double det() const;
  Mat3 inverse() const;  // throws ValidationError when |det| <= 1e-12
  Mat3 operator*(const Mat3& o) const;

  // Projective transform of (x, y); throws on vanishing homogeneous w.
  void apply(double x, double y, double& ox, double& oy) const;
};

// The unique homography sending four source points to four destination
// points (direct linear transform, normalized so m[8] = 1).
Mat3 fit_homography(const std::array<std::array<double, 2>, 4>& src,
                    const std::array<std::array<double, 2>, 4>& dst);

}  // namespace fseg
