#include "dissiplab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dissiplab/csv.hpp"
#include "dissiplab/errors.hpp"
#include "dissiplab/parallel.hpp"

namespace dissiplab {

namespace {

constexpr double kBoundUlps = 8.0;

Complex det3(const CMat4& m, int r0, int r1, int r2, int c0, int c1, int c2) {
  return m(r0, c0) * (m(r1, c1) * m(r2, c2) - m(r1, c2) * m(r2, c1)) -
         m(r0, c1) * (m(r1, c0) * m(r2, c2) - m(r1, c2) * m(r2, c0)) +
         m(r0, c2) * (m(r1, c0) * m(r2, c1) - m(r1, c1) * m(r2, c0));
}

Complex det4(const CMat4& m) {
  return m(0, 0) * det3(m, 1, 2, 3, 1, 2, 3) - m(0, 1) * det3(m, 1, 2, 3, 0, 2, 3) +
         m(0, 2) * det3(m, 1, 2, 3, 0, 1, 3) - m(0, 3) * det3(m, 1, 2, 3, 0, 1, 2);
}

}  // namespace

CMat4 fourier_generator(const SymmetricSystem& ss, double xi) {
  CMat4 g;
  for (int i = 0; i < 4; ++i) {
    const double inv = 1.0 / ss.A0h(i, i);
    for (int j = 0; j < 4; ++j)
      g(i, j) = -inv * Complex(ss.L(i, j) + xi * xi * ss.Bh(i, j), xi * ss.A1h(i, j));
  }
  return g;
}

std::array<Complex, 4> dispersion_eigenvalues(const SymmetricSystem& ss, double xi) {
  if (!std::isfinite(xi)) throw DomainError("xi must be finite");
  const Eigen::Matrix<Complex, 4, 4> g = fourier_generator(ss, xi);
  Eigen::ComplexEigenSolver<Eigen::Matrix<Complex, 4, 4>> solver(g, false);
  if (solver.info() != Eigen::Success) throw Error("complex eigensolver did not converge");
  std::array<Complex, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = solver.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

Complex dispersion_determinant(const SymmetricSystem& ss, double xi, Complex lambda) {
  CMat4 p;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      p(i, j) = lambda * ss.A0h(i, j) + Complex(ss.L(i, j) + xi * xi * ss.Bh(i, j), xi * ss.A1h(i, j));
  return det4(p);
}

std::vector<double> make_grid(double xi_min, double xi_max, std::size_t n, Spacing spacing) {
  if (!(xi_min > 0.0) || !(xi_max > xi_min) || n < 2)
    throw DomainError("grid requires 0 < xi_min < xi_max and n >= 2");
  std::vector<double> grid(n);
  const double last = static_cast<double>(n - 1);
  if (spacing == Spacing::Log) {
    const double a = std::log10(xi_min);
    const double b = std::log10(xi_max);
    for (std::size_t i = 0; i < n; ++i) grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / last);
  } else {
    for (std::size_t i = 0; i < n; ++i) grid[i] = xi_min + (xi_max - xi_min) * static_cast<double>(i) / last;
  }
  grid.front() = xi_min;
  grid.back() = xi_max;
  return grid;
}

DispersionCurve scan(const SymmetricSystem& ss, double xi_min, double xi_max, std::size_t n, Spacing spacing) {
  DispersionCurve c;
  c.xi_grid = make_grid(xi_min, xi_max, n, spacing);
  c.lambdas.resize(n);
  c.max_re.resize(n);
  parallel_for(n, [&](std::size_t i) {
    c.lambdas[i] = dispersion_eigenvalues(ss, c.xi_grid[i]);
    c.max_re[i] = c.lambdas[i][0].real();
  });

  c.k_sharp = std::numeric_limits<double>::infinity();
  c.dissipative = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = c.xi_grid[i];
    const double k = -c.max_re[i] * (1.0 + xi * xi) / (xi * xi);
    if (k < c.k_sharp) {
      c.k_sharp = k;
      c.argmin = i;
    }
    if (c.max_re[i] >= 0.0 && c.dissipative) {
      c.dissipative = false;
      c.offending_xi = xi;
    }
  }
  return c;
}

BoundCheck verify_bound(const DispersionCurve& curve, double k) {
  if (!(k > 0.0)) throw DomainError("verify_bound requires k > 0");
  BoundCheck r;
  r.holds = true;
  r.min_slack = std::numeric_limits<double>::infinity();
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < curve.xi_grid.size(); ++i) {
    const double xi = curve.xi_grid[i];
    const double slack = -k * xi * xi / (1.0 + xi * xi) - curve.max_re[i];
    if (slack < r.min_slack) {
      r.min_slack = slack;
      r.argmin = i;
    }
    if (slack < -kBoundUlps * eps * std::abs(curve.max_re[i])) r.holds = false;
  }
  return r;
}

void write_csv(const DispersionCurve& curve, std::ostream& out) {
  CsvWriter w(out, {"xi", "re_lambda_1", "re_lambda_2", "re_lambda_3", "re_lambda_4", "im_lambda_1", "im_lambda_2",
                    "im_lambda_3", "im_lambda_4", "envelope"});
  for (std::size_t i = 0; i < curve.xi_grid.size(); ++i) {
    const auto& l = curve.lambdas[i];
    w.row({curve.xi_grid[i], l[0].real(), l[1].real(), l[2].real(), l[3].real(), l[0].imag(), l[1].imag(),
           l[2].imag(), l[3].imag(), curve.envelope(curve.xi_grid[i])});
  }
}

}  // namespace dissiplab
