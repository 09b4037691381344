#pragma once

#include <array>
#include <optional>

#include "dissiplab/linalg.hpp"
#include "dissiplab/matrices.hpp"

namespace dissiplab {

inline constexpr double kDefaultCouplingTol = 1e-8;
inline constexpr double kSkewTol = 1e-12;
/// Minimum eigenvalue of the Jacobi-scaled (unit diagonal) symmetric part
/// required to call it positive definite.
inline constexpr double kScaledPdTol = 1e-10;

/// Genuine-coupling verdict from the eigenvectors of the pencil (A1h, A0h).
struct CouplingVerdict {
  bool genuinely_coupled = false;
  /// min over unit eigenvectors v of |Bh v| + |L v|
  double min_kernel_overlap = 0.0;
  /// Eigenvector attaining the minimum (unit Euclidean norm).
  std::optional<Vec4> witness;
  std::array<double, 4> eigenvalues{};
};

/// Throws DegenerateEigenbasisError when two generalized eigenvalues coincide
/// (relative gap below 1e-10): the eigenvectors are then not unique and the
/// per-vector kernel test is incomplete.
CouplingVerdict check_genuine_coupling(const SymmetricSystem& ss, double tol = kDefaultCouplingTol);

enum class Construction { Viscous, Inviscid };

const char* to_string(Construction c);

struct CompensatingDiagnostics {
  double skew_residual = 0.0;  // max |KA0 + (KA0)^T|
  double min_eig_sym = 0.0;    // min eig of [K A1]^s + Bh + L
  double scaled_margin = 0.0;  // same after unit-diagonal scaling
  bool positive_definite = false;
  bool valid = false;  // skew_residual <= 1e-12 and positive definite
};

/// Coefficients of the quadratic form X^T([KA1]^s + L)X for the relaxation
/// template: a1 x1^2 + a2 x2^2 + a3 x3^2 + a4 x4^2 + b13 x1 x3 + b24 x2 x4.
struct QuadraticCoefficients {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
  double b13 = 0.0;
  double b24 = 0.0;

  /// a1 > 0, a4 > 0, a2 - b24^2/(2 a4) > 0, a3 - b13^2/(2 a1) > 0
  bool sufficient_conditions_hold() const;
};

struct CompensatingMatrix {
  Mat4 K = Mat4::Zero();
  double delta = 0.0;
  Construction construction = Construction::Viscous;
  /// Relaxation construction only: constants actually used.
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double gamma0 = 0.0;
  int alpha_power = 3;
  bool constants_adjusted = false;
  QuadraticCoefficients coefficients;
  /// Viscous construction only: whether the (3,4) thermal coupling entry is present.
  bool relaxation_coupling = true;
  /// Number of halvings applied after the initial delta.
  int halvings = 0;
  CompensatingDiagnostics diagnostics;
  /// Positive-definiteness margin: min_eig_sym.
  double C_delta() const { return diagnostics.min_eig_sym; }
};

CompensatingDiagnostics verify_compensating(const Mat4& K, const SymmetricSystem& ss);
inline CompensatingDiagnostics verify_compensating(const CompensatingMatrix& k, const SymmetricSystem& ss) {
  return verify_compensating(k.K, ss);
}

/// The two delta bounds from the viscous proof:
/// delta < 2 rho e_theta / (kappa theta p_theta) and
/// delta < nu (rho p_rho + theta p_theta^2/(rho e_theta) + p_theta/(2 rho e_theta))^-1.
struct ViscousDeltaBounds {
  double thermal = 0.0;
  double viscous = 0.0;
  double auto_delta() const;  // half of the smaller bound
};

ViscousDeltaBounds viscous_delta_bounds(const SymmetricSystem& ss);

struct ViscousOptions {
  std::optional<double> delta;
  /// Add the +/- rho e_theta/(kappa theta^2) entries at (3,4)/(4,3). Without them
  /// the symmetric part is singular for every delta.
  bool relaxation_coupling = true;
};

/// Requires an equilibrium (q = 0) with nu > 0.
CompensatingMatrix compensating_viscous(const SymmetricSystem& ss, const ViscousOptions& options = {});

/// Constants alpha0, beta0, gamma0 for the relaxation template and the
/// inequalities that drive the delta selection.
struct RelaxationConstants {
  double alpha0 = 0.0;
  double beta0 = 0.0;
  double gamma0 = 0.0;
  double cond_212 = 0.0;  // gamma0 kappa/tau - beta0^2 p_rho/(2 alpha0 rho)
  double cond_216 = 0.0;  // theta p_theta/(rho e_theta) (beta0 - gamma0^2 kappa theta^2 p_theta/(2 rho e_theta))
  double bound_E = 0.0;   // delta bound making the fourth condition hold
  double bound_F = 0.0;   // delta bound making a4 > 0
  bool adjusted = false;
};

/// alpha0 = tau^2 theta^2 p_theta^2 p_rho / rho^2, beta0 = p_theta,
/// gamma0 = rho e_theta / (kappa theta^2), with derived inequalities.
RelaxationConstants proof_relaxation_constants(const SymmetricSystem& ss);

/// proof_relaxation_constants, then beta0 (and alpha0) raised to twice their
/// thresholds wherever cond_216 (cond_212) is not positive.
RelaxationConstants admissible_relaxation_constants(const SymmetricSystem& ss);

RelaxationConstants relaxation_constants_from(const SymmetricSystem& ss, double alpha0, double beta0,
                                              double gamma0);

QuadraticCoefficients relaxation_coefficients(const SymmetricSystem& ss, double alpha, double beta, double gamma);

struct InviscidOptions {
  std::optional<double> delta;
  int alpha_power = 3;
  bool adjust_constants = true;
};

/// Requires an equilibrium with nu == 0. Throws NoDeltaFoundError after 60
/// halvings without success.
CompensatingMatrix compensating_inviscid(const SymmetricSystem& ss, const InviscidOptions& options = {});

/// Template [[0,a,0,0],[-a,0,-b,0],[0,b,0,-g],[0,0,g,0]] times A0h^{-1}.
Mat4 relaxation_template(const SymmetricSystem& ss, double alpha, double beta, double gamma);

}  // namespace dissiplab
