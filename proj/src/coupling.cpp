#include "dissiplab/coupling.hpp"

#include <cmath>
#include <limits>

#include "dissiplab/errors.hpp"

namespace dissiplab {

namespace {

constexpr int kMaxHalvings = 60;

Mat4 a0h_inverse(const SymmetricSystem& ss) {
  Mat4 inv = Mat4::Zero();
  for (int i = 0; i < 4; ++i) inv(i, i) = 1.0 / ss.A0h(i, i);
  return inv;
}

void require_equilibrium(const SymmetricSystem& ss) {
  if (!is_equilibrium(ss.at_state)) throw NotEquilibriumError("compensating matrices are built at equilibria (q = 0)");
}

}  // namespace

const char* to_string(Construction c) { return c == Construction::Viscous ? "viscous" : "inviscid"; }

CouplingVerdict check_genuine_coupling(const SymmetricSystem& ss, double tol) {
  Vec4 scale;
  for (int i = 0; i < 4; ++i) {
    if (!(ss.A0h(i, i) > 0.0)) throw DomainError("A0h must be positive definite");
    scale(i) = 1.0 / std::sqrt(ss.A0h(i, i));
  }
  const Mat4 reduced = scale.asDiagonal() * sym_part(ss.A1h) * scale.asDiagonal();
  Mat4 vectors;
  const auto eig = jacobi_eigen(reduced, vectors);

  double spread = 1.0;
  for (double e : eig) spread = std::max(spread, std::abs(e));
  for (int i = 0; i < 3; ++i)
    if (eig[i + 1] - eig[i] <= 1e-10 * spread)
      throw DegenerateEigenbasisError("repeated generalized eigenvalue; perturb the state");

  CouplingVerdict verdict;
  verdict.eigenvalues = eig;
  verdict.min_kernel_overlap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    Vec4 v = scale.asDiagonal() * vectors.col(i);
    v.normalize();
    const double overlap = (ss.Bh * v).norm() + (ss.L * v).norm();
    if (overlap < verdict.min_kernel_overlap) {
      verdict.min_kernel_overlap = overlap;
      verdict.witness = v;
    }
  }
  verdict.genuinely_coupled = verdict.min_kernel_overlap > tol;
  return verdict;
}

bool QuadraticCoefficients::sufficient_conditions_hold() const {
  return a1 > 0.0 && a4 > 0.0 && a2 - b24 * b24 / (2.0 * a4) > 0.0 && a3 - b13 * b13 / (2.0 * a1) > 0.0;
}

CompensatingDiagnostics verify_compensating(const Mat4& K, const SymmetricSystem& ss) {
  CompensatingDiagnostics d;
  d.skew_residual = skew_residual(K * ss.A0h);
  const Mat4 form = sym_part(K * ss.A1h) + sym_part(ss.Bh) + sym_part(ss.L);
  d.min_eig_sym = min_eigenvalue(form);
  d.scaled_margin = scaled_min_eigenvalue(form);
  d.positive_definite = d.min_eig_sym > 0.0 && d.scaled_margin > kScaledPdTol;
  d.valid = d.positive_definite && d.skew_residual <= kSkewTol;
  return d;
}

double ViscousDeltaBounds::auto_delta() const { return 0.5 * std::min(thermal, viscous); }

ViscousDeltaBounds viscous_delta_bounds(const SymmetricSystem& ss) {
  const ThermoEval& t = ss.thermo;
  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  const double rho_et = rho * t.e_theta;
  ViscousDeltaBounds b;
  b.thermal = 2.0 * rho_et / (t.kappa * theta * t.p_theta);
  b.viscous = t.nu / (rho * t.p_rho + theta * t.p_theta * t.p_theta / rho_et + t.p_theta / (2.0 * rho_et));
  return b;
}

CompensatingMatrix compensating_viscous(const SymmetricSystem& ss, const ViscousOptions& options) {
  require_equilibrium(ss);
  const ThermoEval& t = ss.thermo;
  if (!(t.nu > 0.0)) throw InviscidError("nu = 0 at this state; use compensating_inviscid");

  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  const double coupling = options.relaxation_coupling ? rho * t.e_theta / (t.kappa * theta * theta) : 0.0;

  Mat4 pattern;
  pattern << 0.0, t.p_rho, 0.0, 0.0,
             -t.p_rho, 0.0, -t.p_theta, 0.0,
             0.0, t.p_theta, 0.0, coupling,
             0.0, 0.0, -coupling, 0.0;
  const Mat4 base = pattern * a0h_inverse(ss);

  CompensatingMatrix km;
  km.construction = Construction::Viscous;
  km.relaxation_coupling = options.relaxation_coupling;
  km.gamma0 = coupling;

  if (options.delta) {
    if (!(*options.delta > 0.0)) throw DomainError("delta must be positive");
    km.delta = *options.delta;
    km.K = km.delta * base;
    km.diagnostics = verify_compensating(km.K, ss);
    if (!km.diagnostics.positive_definite)
      throw DeltaTooLargeError("delta = " + std::to_string(km.delta) +
                               " leaves [KA1]^s + B + L without positive definiteness");
    return km;
  }

  // The proof bounds were derived for the template without the coupling
  // entry; keep halving until the verification passes.
  double delta = viscous_delta_bounds(ss).auto_delta();
  for (int h = 0; h <= kMaxHalvings; ++h, delta *= 0.5) {
    km.delta = delta;
    km.halvings = h;
    km.K = delta * base;
    km.diagnostics = verify_compensating(km.K, ss);
    if (km.diagnostics.valid) return km;
  }
  throw NoDeltaFoundError("no delta renders the viscous compensating matrix valid");
}

RelaxationConstants relaxation_constants_from(const SymmetricSystem& ss, double alpha0, double beta0,
                                              double gamma0) {
  const ThermoEval& t = ss.thermo;
  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  const double tau = ss.tau;
  const double rho_et = rho * t.e_theta;

  RelaxationConstants c;
  c.alpha0 = alpha0;
  c.beta0 = beta0;
  c.gamma0 = gamma0;
  c.cond_212 = gamma0 * t.kappa / tau - beta0 * beta0 * t.p_rho / (2.0 * alpha0 * rho);
  c.cond_216 = theta * t.p_theta / rho_et *
               (beta0 - gamma0 * gamma0 * t.kappa * theta * theta * t.p_theta / (2.0 * rho_et));
  c.bound_E = 2.0 * rho * t.p_rho / (alpha0 * t.p_theta * t.p_theta) * c.cond_212;
  c.bound_F = rho_et / (t.kappa * theta * gamma0);
  return c;
}

RelaxationConstants proof_relaxation_constants(const SymmetricSystem& ss) {
  const ThermoEval& t = ss.thermo;
  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  const double tau = ss.tau;
  const double alpha0 = tau * tau * theta * theta * t.p_theta * t.p_theta * t.p_rho / (rho * rho);
  const double beta0 = t.p_theta;
  const double gamma0 = rho * t.e_theta / (t.kappa * theta * theta);
  return relaxation_constants_from(ss, alpha0, beta0, gamma0);
}

RelaxationConstants admissible_relaxation_constants(const SymmetricSystem& ss) {
  RelaxationConstants c = proof_relaxation_constants(ss);
  const ThermoEval& t = ss.thermo;
  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  double alpha0 = c.alpha0;
  double beta0 = c.beta0;
  const double gamma0 = c.gamma0;
  bool adjusted = false;

  if (!(c.cond_216 > 0.0)) {
    const double threshold = gamma0 * gamma0 * t.kappa * theta * theta * t.p_theta / (2.0 * rho * t.e_theta);
    beta0 = 2.0 * threshold;
    adjusted = true;
  }
  const double alpha_threshold = beta0 * beta0 * t.p_rho * ss.tau / (2.0 * gamma0 * t.kappa * rho);
  if (!(alpha0 > alpha_threshold)) {
    alpha0 = 2.0 * alpha_threshold;
    adjusted = true;
  }
  if (!adjusted) return c;
  c = relaxation_constants_from(ss, alpha0, beta0, gamma0);
  c.adjusted = true;
  return c;
}

QuadraticCoefficients relaxation_coefficients(const SymmetricSystem& ss, double alpha, double beta, double gamma) {
  const ThermoEval& t = ss.thermo;
  const double rho = ss.at_state.rho;
  const double theta = ss.at_state.theta;
  const double rho_et = rho * t.e_theta;
  QuadraticCoefficients q;
  q.a1 = alpha * t.p_rho / rho;
  q.a2 = -(alpha * rho + beta * theta * t.p_theta / rho_et);
  q.a3 = beta * t.p_theta / rho - gamma * t.kappa / ss.tau;
  q.a4 = gamma / rho_et + 1.0 / (t.kappa * theta);
  q.b13 = (beta * t.p_rho + alpha * t.p_theta) / rho;
  q.b24 = (gamma * theta * t.p_theta - beta) / rho_et;
  return q;
}

Mat4 relaxation_template(const SymmetricSystem& ss, double alpha, double beta, double gamma) {
  Mat4 pattern;
  pattern << 0.0, alpha, 0.0, 0.0,
             -alpha, 0.0, -beta, 0.0,
             0.0, beta, 0.0, -gamma,
             0.0, 0.0, gamma, 0.0;
  return pattern * a0h_inverse(ss);
}

CompensatingMatrix compensating_inviscid(const SymmetricSystem& ss, const InviscidOptions& options) {
  require_equilibrium(ss);
  if (ss.thermo.nu != 0.0) throw ViscousError("nu != 0 at this state; use compensating_viscous");
  if (options.alpha_power < 1) throw DomainError("alpha_power must be at least 1");

  const RelaxationConstants c =
      options.adjust_constants ? admissible_relaxation_constants(ss) : proof_relaxation_constants(ss);

  CompensatingMatrix km;
  km.construction = Construction::Inviscid;
  km.alpha0 = c.alpha0;
  km.beta0 = c.beta0;
  km.gamma0 = c.gamma0;
  km.alpha_power = options.alpha_power;
  km.constants_adjusted = c.adjusted;

  auto build = [&](double delta) {
    const double alpha = std::pow(delta, options.alpha_power) * c.alpha0;
    const double beta = -delta * delta * c.beta0;
    const double gamma = -delta * c.gamma0;
    km.delta = delta;
    km.coefficients = relaxation_coefficients(ss, alpha, beta, gamma);
    km.K = relaxation_template(ss, alpha, beta, gamma);
    km.diagnostics = verify_compensating(km.K, ss);
  };

  if (options.delta) {
    if (!(*options.delta > 0.0)) throw DomainError("delta must be positive");
    build(*options.delta);
    if (!km.diagnostics.positive_definite)
      throw DeltaTooLargeError("delta = " + std::to_string(*options.delta) +
                               " leaves [KA1]^s + L without positive definiteness");
    return km;
  }

  // Start strictly inside both closed-form bounds; bound_F is exactly a4 = 0.
  const double start_bound = c.bound_E > 0.0 ? std::min(c.bound_E, c.bound_F) : c.bound_F;
  double delta = 0.5 * start_bound;
  for (int h = 0; h <= kMaxHalvings; ++h, delta *= 0.5) {
    km.halvings = h;
    build(delta);
    if (km.coefficients.sufficient_conditions_hold() && km.diagnostics.valid) return km;
  }
  throw NoDeltaFoundError("bisection exhausted without satisfying the sufficient conditions");
}

}  // namespace dissiplab
