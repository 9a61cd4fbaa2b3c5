#include "facadeseg/homography.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "facadeseg/common.hpp"

namespace fseg {

double Mat3::det() const {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

Mat3 Mat3::inverse() const {
  double d = det();
  if (std::abs(d) <= 1e-12) throw ValidationError("homography is not invertible (|det| <= 1e-12)");
  double inv = 1.0 / d;
  Mat3 r;
  r.m[0] = (m[4] * m[8] - m[5] * m[7]) * inv;
  r.m[1] = (m[2] * m[7] - m[1] * m[8]) * inv;
  r.m[2] = (m[1] * m[5] - m[2] * m[4]) * inv;
  r.m[3] = (m[5] * m[6] - m[3] * m[8]) * inv;
  r.m[4] = (m[0] * m[8] - m[2] * m[6]) * inv;
  r.m[5] = (m[2] * m[3] - m[0] * m[5]) * inv;
  r.m[6] = (m[3] * m[7] - m[4] * m[6]) * inv;
  r.m[7] = (m[1] * m[6] - m[0] * m[7]) * inv;
  r.m[8] = (m[0] * m[4] - m[1] * m[3]) * inv;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) s += m[i * 3 + k] * o.m[k * 3 + j];
      r.m[i * 3 + j] = s;
    }
  return r;
}

void Mat3::apply(double x, double y, double& ox, double& oy) const {
  double w = m[6] * x + m[7] * y + m[8];
  if (std::abs(w) < 1e-300) throw RuntimeFailure("homography maps point to infinity");
  ox = (m[0] * x + m[1] * y + m[2]) / w;
  oy = (m[3] * x + m[4] * y + m[5]) / w;
}

Mat3 fit_homography(const std::array<std::array<double, 2>, 4>& src,
                    const std::array<std::array<double, 2>, 4>& dst) {
  // Two rows per correspondence, unknowns = first 8 entries with m[8] = 1.
  Eigen::Matrix<double, 8, 8> A;
  Eigen::Matrix<double, 8, 1> b;
  for (int i = 0; i < 4; ++i) {
    double x = src[i][0], y = src[i][1];
    double u = dst[i][0], v = dst[i][1];
    A.row(2 * i) << x, y, 1, 0, 0, 0, -x * u, -y * u;
    b(2 * i) = u;
    A.row(2 * i + 1) << 0, 0, 0, x, y, 1, -x * v, -y * v;
    b(2 * i + 1) = v;
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(A);
  if (!lu.isInvertible()) throw ValidationError("degenerate point set: homography is not unique");
  Eigen::Matrix<double, 8, 1> h = lu.solve(b);
  Mat3 out;
  for (int i = 0; i < 8; ++i) out.m[i] = h(i);
  out.m[8] = 1.0;
  return out;
}

}  // namespace fseg
