#include "dissiplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dissiplab {

namespace {

std::array<double, 4> jacobi_impl(Mat4 a, Mat4* vectors) {
  Mat4 v = Mat4::Identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += a(p, q) * a(p, q);
    if (off == 0.0) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double apq = a(p, q);
        // relative threshold keeps the accuracy of small eigenvalues of graded matrices
        if (std::abs(apq) <= std::numeric_limits<double>::epsilon() * 0.25 *
                                 std::sqrt(std::abs(a(p, p) * a(q, q)))) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < 4; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < 4; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::array<int, 4> order{0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  std::array<double, 4> eig{};
  for (int i = 0; i < 4; ++i) eig[i] = a(order[i], order[i]);
  if (vectors) {
    for (int i = 0; i < 4; ++i) vectors->col(i) = v.col(order[i]);
  }
  return eig;
}

}  // namespace

std::array<double, 4> jacobi_eigenvalues(const Mat4& a) { return jacobi_impl(sym_part(a), nullptr); }

std::array<double, 4> jacobi_eigen(const Mat4& a, Mat4& vectors) { return jacobi_impl(sym_part(a), &vectors); }

double scaled_min_eigenvalue(const Mat4& a) {
  Vec4 d;
  for (int i = 0; i < 4; ++i) {
    if (!(a(i, i) > 0.0)) return 0.0;
    d(i) = 1.0 / std::sqrt(a(i, i));
  }
  const Mat4 scaled = d.asDiagonal() * a * d.asDiagonal();
  return min_eigenvalue(scaled);
}

double symmetry_residual(const Mat4& a) { return (a - a.transpose()).cwiseAbs().maxCoeff(); }

double skew_residual(const Mat4& a) { return (a + a.transpose()).cwiseAbs().maxCoeff(); }

CMat4 expm(const CMat4& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const CMat4 scaled = a / std::ldexp(1.0, squarings);

  // ||scaled|| <= 1/2, so 20 terms put the truncation far below double precision.
  CMat4 result = CMat4::Identity();
  CMat4 term = CMat4::Identity();
  for (int k = 1; k <= 20; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double condition_number(const CMat4& a) {
  Eigen::JacobiSVD<Eigen::Matrix<Complex, 4, 4>> svd(a);
  const auto& s = svd.singularValues();
  if (s(3) == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / s(3);
}

}  // namespace dissiplab
