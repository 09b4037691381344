#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "dissiplab/coupling.hpp"
#include "dissiplab/linalg.hpp"
#include "dissiplab/matrices.hpp"

namespace dissiplab {

/// U0(x) = v0 exp(-x^2/(2 w^2)). Fourier transform with the unitary
/// convention (2 pi)^{-1/2} int U e^{-i xi x} dx: U0hat(xi) = v0 w exp(-w^2 xi^2/2).
struct InitialData {
  Vec4 v0 = Vec4(1.0, 0.0, 0.0, 0.0);
  double width = 1.0;

  static InitialData gaussian(const Vec4& v0, double width);

  CVec4 transform(double xi) const;
  /// int_R xi^{2l} |U0hat|^2 dxi = |v0|^2 Gamma(l + 1/2) / w^{2l - 1}
  double moment(int l) const;
  /// ||d^l U0 / dx^l||_{L2}
  double norm(int l) const;
  /// int_R |U0(x)| dx = |v0| w sqrt(2 pi)
  double l1_norm() const;
  /// Fraction of moment(l) carried by |xi| > xi_cut.
  double tail_fraction(int l, double xi_cut) const;
};

/// exp(t G(xi)) by eigendecomposition G = V diag(lambda) V^{-1}; falls back to
/// expm when cond(V) > 1e8.
class ModePropagator {
 public:
  static constexpr double kMaxEigenbasisCondition = 1e8;

  ModePropagator(const SymmetricSystem& ss, double xi);

  CVec4 apply(const CVec4& u0, double t) const;
  CMat4 matrix(double t) const;

  double xi() const { return xi_; }
  bool diagonalized() const { return diagonalized_; }
  double eigenbasis_condition() const { return condition_; }
  const CMat4& generator() const { return generator_; }
  const std::array<Complex, 4>& eigenvalues() const { return lambda_; }
  const CMat4& eigenvectors() const { return v_; }
  const CMat4& eigenvectors_inverse() const { return v_inv_; }

 private:
  double xi_;
  CMat4 generator_;
  std::array<Complex, 4> lambda_{};
  CMat4 v_;
  CMat4 v_inv_;
  double condition_ = 0.0;
  bool diagonalized_ = false;
};

/// Uhat(xi, t) for data u0hat at t = 0. t = 0 returns u0hat unchanged.
CVec4 evolve_mode(const SymmetricSystem& ss, double xi, const CVec4& u0hat, double t);

struct ModeTrajectory {
  double xi = 0.0;
  double dt = 0.0;
  std::vector<CVec4> samples;  // samples[k] at t = k dt
};

ModeTrajectory sample_trajectory(const SymmetricSystem& ss, double xi, const CVec4& u0hat, double dt,
                                 std::size_t n_steps);

/// max over interior samples of
/// |(E_{k+1} - E_{k-1})/(2 dt) + <U, L U> + xi^2 <U, Bh U>| / E_0,
/// E = 1/2 <U, A0h U>.
double energy_balance_residual(const SymmetricSystem& ss, const ModeTrajectory& traj);

/// M = <U, A0h U> - (delta xi/(1+xi^2)) <U, i K A0h U>. Real when K A0h is skew.
Complex lyapunov_functional(const SymmetricSystem& ss, const Mat4& K, double xi, double delta, const CVec4& u);

struct LyapunovParameters {
  double delta = 0.0;
  int halvings = 0;
  /// min eig of [K A1h]^s + Bh + L
  double gamma = 0.0;
  /// M is equivalent to <U, A0h U> within factor C1 for every xi.
  double C1 = 0.0;
  /// delta gamma / (2 C1)
  double k_theory = 0.0;
};

/// Largest delta = 2^{-h} (h < 40) such that on a 400-point log grid in
/// [1e-3, 1e3] the M-form is positive definite and dM/dt = -<U, H U> with H
/// positive semidefinite. Throws DeltaRangeError otherwise.
LyapunovParameters auto_lyapunov_delta(const SymmetricSystem& ss, const CompensatingMatrix& K);

struct LyapunovResult {
  bool passed = false;
  bool real = false;
  bool positive = false;
  bool non_increasing = false;
  double delta = 0.0;  // after halving
  int halvings = 0;
  double max_imag_rel = 0.0;
  double max_increase_rel = 0.0;
  double min_value_rel = 0.0;
};

inline constexpr double kLyapunovTol = 1e-10;

/// Halves delta (max 40) until M > 0 at every sample, then checks M real,
/// positive and non-increasing to relative tolerance 1e-10.
LyapunovResult lyapunov_check(const SymmetricSystem& ss, const Mat4& K, double xi, double delta,
                              const ModeTrajectory& traj);

struct PointwiseBoundCheck {
  std::size_t points = 0;
  std::size_t violations = 0;
  /// max over the lattice of |exp(tG)|_{A0h} / (C1 exp(-k xi^2 t/(1+xi^2)))
  double worst_ratio = 0.0;
  double C1 = 0.0;  // cond(A0h)^{1/2}
};

/// |Uhat(xi,t)|_{A0h} <= C1 |Uhat(xi,0)|_{A0h} exp(-k xi^2 t/(1+xi^2)) for all
/// data, checked through the A0h-weighted operator norm of the propagator on
/// every lattice point.
PointwiseBoundCheck check_pointwise_bound(const SymmetricSystem& ss, double k, const std::vector<double>& xi_grid,
                                          const std::vector<double>& t_grid);

struct QuadratureSpec {
  std::optional<double> xi_cut;  // default 8 / w
  std::size_t n_xi = 20000;      // Simpson intervals on [0, xi_cut]; even
};

struct DecayOptions {
  std::size_t n_t = 401;
  std::vector<int> l_list = {0, 1};
  /// Envelope rate; computed from a default dispersion scan when unset.
  std::optional<double> k_sharp;
  bool refinement_check = true;
  /// Modes for the energy identity, sampled at dt = 1e-3 on [0, 10]; the
  /// centered difference must resolve them.
  std::vector<double> energy_check_xi = {0.1, 1.0};
  /// Modes for the Lyapunov functional, sampled at dt = 1e-2 on [0, 20].
  std::vector<double> lyapunov_check_xi = {0.01, 0.1, 1.0, 10.0, 100.0};
  std::uint64_t seed = 0;
};

struct DecayTrace {
  std::vector<double> t_grid;
  std::vector<int> l_list;
  std::vector<std::vector<double>> norms;      // [l index][t index]
  std::vector<std::vector<double>> envelopes;  // same shape
  std::vector<double> fitted_slopes;           // of the norm vs log(1+t)
  double fit_t_min = 0.0;
  double k_sharp = 0.0;
  double envelope_constant = 0.0;
  std::size_t envelope_violations = 0;
  double xi_cut = 0.0;
  std::size_t n_xi = 0;
  double refinement_change = 0.0;
  std::size_t fallback_modes = 0;
  double energy_residual = 0.0;
  bool M_monotone = false;
  LyapunovParameters lyapunov;
};

/// Norms ||d^l U(t)||_{L2} = (int xi^{2l} |Uhat(xi,t)|^2 dxi)^{1/2} by composite
/// Simpson on [0, xi_cut] doubled by evenness, on a uniform t grid over
/// [0, t_max]. Throws QuadratureError when the Gaussian tail beyond xi_cut
/// exceeds 1e-12 or when doubling n_xi moves a norm by more than 1e-6.
DecayTrace decay_trace(const SymmetricSystem& ss, const CompensatingMatrix& K, const InitialData& data,
                       double t_max, const QuadratureSpec& quadrature = {}, const DecayOptions& options = {});

/// Least-squares slope of log(y) against log(1 + t) over t >= t_min.
double fit_log_slope(const std::vector<double>& t, const std::vector<double>& y, double t_min);

/// Columns: t, norm_l*, envelope_l*.
void write_csv(const DecayTrace& trace, std::ostream& out);

}  // namespace dissiplab
