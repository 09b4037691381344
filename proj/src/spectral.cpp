#include "dissiplab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "dissiplab/errors.hpp"

namespace dissiplab {

namespace {

// The three recurring groups: mechanical p_rho, thermal kappa/(rho e_theta tau),
// and the coupling theta p_theta^2 / (rho^2 e_theta).
struct SpeedTerms {
  double mech;
  double thermal;
  double coupling;
};

SpeedTerms speed_terms(const ThermoEval& t, double rho, double theta, double tau) {
  return {t.p_rho, t.kappa / (rho * t.e_theta * tau), theta * t.p_theta * t.p_theta / (rho * rho * t.e_theta)};
}

}  // namespace

DiscriminantForms discriminant_forms(const ThermoEval& t, double rho, double theta, double tau) {
  const SpeedTerms s = speed_terms(t, rho, theta, tau);
  const double lead = rho * rho * t.e_theta * tau;
  const double b = -(rho * t.kappa + rho * rho * t.p_rho * t.e_theta * tau + theta * t.p_theta * t.p_theta * tau) / lead;
  const double c = rho * t.p_rho * t.kappa / lead;
  const double sum = s.mech + s.thermal + s.coupling;
  const double diff = s.mech - s.thermal;

  DiscriminantForms f;
  f.from_coefficients = b * b - 4.0 * c;
  f.completed_square = sum * sum - 4.0 * s.thermal * s.mech;
  f.sum_of_squares = diff * diff + s.coupling * (2.0 * s.mech + 2.0 * s.thermal + s.coupling);
  return f;
}

CharSpeeds char_speeds_closed_form(const ThermoEval& t, const StateVector& state, double tau) {
  if (!state.admissible()) throw DomainError("state must satisfy rho > 0 and theta > 0");
  const double rho = state.rho;
  const double theta = state.theta;

  CharSpeeds cs;
  const double lead = rho * rho * t.e_theta * tau;
  cs.b_tilde = -(rho * t.kappa + rho * rho * t.p_rho * t.e_theta * tau + theta * t.p_theta * t.p_theta * tau) / lead;
  cs.c_tilde = rho * t.p_rho * t.kappa / lead;
  // the sum-of-squares form has no cancellation
  cs.discriminant = discriminant_forms(t, rho, theta, tau).sum_of_squares;
  if (!(cs.discriminant > 0.0) || !std::isfinite(cs.discriminant))
    throw HyperbolicityError("characteristic discriminant is not positive");

  cs.m2_plus = 0.5 * (std::abs(cs.b_tilde) + std::sqrt(cs.discriminant));
  // Vieta: m2_minus * m2_plus = c; avoids cancellation in |b| - sqrt(Delta)
  cs.m2_minus = cs.c_tilde / cs.m2_plus;
  if (!(cs.m2_minus > 0.0)) throw HyperbolicityError("slow sound speed is not positive");

  cs.c_slow = std::sqrt(cs.m2_minus);
  cs.c_fast = std::sqrt(cs.m2_plus);
  const double u = state.u;
  cs.zeta = {u - cs.c_fast, u - cs.c_slow, u + cs.c_slow, u + cs.c_fast};
  return cs;
}

CharSpeeds char_speeds_closed_form(const StateVector& state, const FluidModel& model) {
  if (!state.admissible()) throw DomainError("state must satisfy rho > 0 and theta > 0");
  return char_speeds_closed_form(evaluate(model, state.rho, state.theta), state, model.tau());
}

std::array<double, 4> char_speeds_eigen(const SystemMatrices& sm) {
  for (int i = 0; i < 4; ++i)
    if (!(sm.A0(i, i) > 0.0)) throw DomainError("A0 must be positive definite");
  const Eigen::Matrix4d a0 = sm.A0;
  const Eigen::Matrix4d a1 = sm.A1;
  const Eigen::Matrix4d pencil = a0.partialPivLu().solve(a1);

  Eigen::EigenSolver<Eigen::Matrix4d> solver(pencil, false);
  if (solver.info() != Eigen::Success) throw HyperbolicityError("eigensolver did not converge");
  std::array<double, 4> zeta{};
  for (int i = 0; i < 4; ++i) {
    const Complex ev = solver.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-9) throw HyperbolicityError("complex characteristic speed: loss of hyperbolicity");
    zeta[i] = ev.real();
  }
  std::sort(zeta.begin(), zeta.end());
  return zeta;
}

std::array<double, 4> char_speeds_symmetric(const SymmetricSystem& ss) {
  Vec4 scale;
  for (int i = 0; i < 4; ++i) {
    if (!(ss.A0h(i, i) > 0.0)) throw DomainError("A0h must be positive definite");
    scale(i) = 1.0 / std::sqrt(ss.A0h(i, i));
  }
  const Mat4 reduced = scale.asDiagonal() * sym_part(ss.A1h) * scale.asDiagonal();
  return jacobi_eigenvalues(reduced);
}

double strict_hyperbolicity_gap(const std::array<double, 4>& zeta) {
  double gap = zeta[1] - zeta[0];
  for (int i = 1; i < 3; ++i) gap = std::min(gap, zeta[i + 1] - zeta[i]);
  return std::max(gap, 0.0);
}

}  // namespace dissiplab
