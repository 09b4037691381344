#pragma once

#include "dissiplab/eos.hpp"
#include "dissiplab/linalg.hpp"

namespace dissiplab {

/// U = (rho, u, theta, q). Admissible iff rho > 0 and theta > 0.
struct StateVector {
  double rho = 1.0;
  double u = 0.0;
  double theta = 1.0;
  double q = 0.0;

  bool admissible() const;
  Vec4 as_vector() const { return Vec4(rho, u, theta, q); }
};

/// Quasi-linear system A0 U_t + A1 U_x = B U_xx + Q(U) at one state, with
/// D = dQ/dU. Row-major dense 4x4.
struct SystemMatrices {
  Mat4 A0;
  Mat4 A1;
  Mat4 B;
  Mat4 D;
  Vec4 Qvec;
  StateVector at_state;
  ThermoEval thermo;
  double tau = 0.0;
};

/// Symmetrized system: S diagonal, A0h = S A0, A1h = S A1, Bh = S B, L = -S D.
struct SymmetricSystem {
  Mat4 S;
  Mat4 A0h;
  Mat4 A1h;
  Mat4 Bh;
  Mat4 L;
  StateVector at_state;
  ThermoEval thermo;
  double tau = 0.0;
};

inline constexpr double kDefaultEquilibriumTol = 1e-12;
inline constexpr double kSymmetryTol = 1e-12;

SystemMatrices assemble(const StateVector& state, const FluidModel& model);

/// Applies S = diag(p_rho/rho, 1, 1/theta, 1/(kappa theta)); throws SymmetryError
/// when any product is asymmetric beyond 1e-12 (relative to entry size).
SymmetricSystem symmetrize(const SystemMatrices& sm);

/// assemble + symmetrize.
SymmetricSystem symmetric_system(const StateVector& state, const FluidModel& model);

/// q == 0 up to `tol`.
bool is_equilibrium(const StateVector& state, double tol = kDefaultEquilibriumTol);

/// Production term Q(U) = (0, 0, 0, -q).
Vec4 production(const StateVector& state);

/// Diagonal inverse of A0.
Mat4 a0_inverse(const SystemMatrices& sm);

}  // namespace dissiplab
