#pragma once

#include <array>

#include "dissiplab/eos.hpp"
#include "dissiplab/matrices.hpp"

namespace dissiplab {

/// Characteristic speeds of A0 U_t + A1 U_x = 0.
///
/// With m = u - zeta the characteristic polynomial is quadratic in m^2:
/// m^4 + b m^2 + c = 0. The two positive roots give a slow and a fast sound
/// speed; zeta = (u - c_fast, u - c_slow, u + c_slow, u + c_fast).
struct CharSpeeds {
  std::array<double, 4> zeta{};
  double b_tilde = 0.0;
  double c_tilde = 0.0;
  double discriminant = 0.0;
  double m2_minus = 0.0;
  double m2_plus = 0.0;
  double c_slow = 0.0;
  double c_fast = 0.0;
};

/// The discriminant written three ways; they agree in exact arithmetic.
struct DiscriminantForms {
  double from_coefficients = 0.0;  // b^2 - 4c
  double completed_square = 0.0;   // (p_rho + k + s)^2 - 4 k p_rho
  double sum_of_squares = 0.0;     // (p_rho - k)^2 + s (2 p_rho + 2 k + s)
};

DiscriminantForms discriminant_forms(const ThermoEval& t, double rho, double theta, double tau);

/// Closed-form speeds. Throws HyperbolicityError if the discriminant or the
/// smaller m^2 root is not positive.
CharSpeeds char_speeds_closed_form(const StateVector& state, const FluidModel& model);
CharSpeeds char_speeds_closed_form(const ThermoEval& t, const StateVector& state, double tau);

/// Real eigenvalues of A1 v = zeta A0 v, ascending. Brute force: general real
/// eigensolve of A0^{-1} A1. Throws HyperbolicityError if any eigenvalue has
/// |Im| > 1e-9.
std::array<double, 4> char_speeds_eigen(const SystemMatrices& sm);

/// Generalized eigenvalues of the symmetric pair (A1h, A0h) through the
/// congruence A0h^{-1/2} A1h A0h^{-1/2}; always real.
std::array<double, 4> char_speeds_symmetric(const SymmetricSystem& ss);

/// min_i (zeta_{i+1} - zeta_i); zero means not strictly hyperbolic.
double strict_hyperbolicity_gap(const std::array<double, 4>& zeta);
inline double strict_hyperbolicity_gap(const CharSpeeds& cs) { return strict_hyperbolicity_gap(cs.zeta); }

}  // namespace dissiplab
