#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "dissiplab/linalg.hpp"
#include "dissiplab/matrices.hpp"

namespace dissiplab {

enum class Spacing { Log, Linear };

/// G(xi) = -A0h^{-1} (i xi A1h + L + xi^2 Bh); Fourier modes evolve as exp(t G).
CMat4 fourier_generator(const SymmetricSystem& ss, double xi);

/// Roots of det(lambda A0h + i xi A1h + L + xi^2 Bh) = 0, as eigenvalues of
/// fourier_generator, sorted by descending real part (ties: descending imag).
std::array<Complex, 4> dispersion_eigenvalues(const SymmetricSystem& ss, double xi);

/// det(lambda A0h + i xi A1h + L + xi^2 Bh), by cofactor expansion.
Complex dispersion_determinant(const SymmetricSystem& ss, double xi, Complex lambda);

struct DispersionCurve {
  std::vector<double> xi_grid;
  std::vector<std::array<Complex, 4>> lambdas;
  std::vector<double> max_re;
  /// inf over the grid of -max_re (1 + xi^2) / xi^2
  double k_sharp = 0.0;
  std::size_t argmin = 0;
  bool dissipative = false;
  /// First grid point with max_re >= 0, if any.
  std::optional<double> offending_xi;

  double envelope(double xi) const { return -k_sharp * xi * xi / (1.0 + xi * xi); }
};

std::vector<double> make_grid(double xi_min, double xi_max, std::size_t n, Spacing spacing);

/// Evaluates the dispersion relation on a grid; per-xi work runs in parallel.
DispersionCurve scan(const SymmetricSystem& ss, double xi_min, double xi_max, std::size_t n,
                     Spacing spacing = Spacing::Log);

struct BoundCheck {
  bool holds = false;
  /// min over the grid of -k xi^2/(1+xi^2) - max_re
  double min_slack = 0.0;
  std::size_t argmin = 0;
};

/// max_re(xi) <= -k xi^2/(1+xi^2) at every grid point, up to a few ulps of
/// max_re (k_sharp itself is recovered through a division).
BoundCheck verify_bound(const DispersionCurve& curve, double k);

/// Columns: xi, re_lambda_1..4, im_lambda_1..4, envelope.
void write_csv(const DispersionCurve& curve, std::ostream& out);

}  // namespace dissiplab
