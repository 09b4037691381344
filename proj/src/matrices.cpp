#include "dissiplab/matrices.hpp"

#include <cmath>
#include <string>

#include "dissiplab/errors.hpp"

namespace dissiplab {

bool StateVector::admissible() const {
  return rho > 0.0 && theta > 0.0 && std::isfinite(rho) && std::isfinite(theta) && std::isfinite(u) &&
         std::isfinite(q);
}

Vec4 production(const StateVector& state) { return Vec4(0.0, 0.0, 0.0, -state.q); }

SystemMatrices assemble(const StateVector& state, const FluidModel& model) {
  if (!state.admissible()) throw DomainError("state must satisfy rho > 0 and theta > 0");
  const ThermoEval t = evaluate(model, state.rho, state.theta);
  const double rho = state.rho;
  const double u = state.u;
  const double theta = state.theta;
  const double tau = model.tau();

  SystemMatrices sm;
  sm.at_state = state;
  sm.thermo = t;
  sm.tau = tau;

  sm.A0 = Mat4::Zero();
  sm.A0.diagonal() << 1.0, rho, rho * t.e_theta, tau;

  sm.A1 << u, rho, 0.0, 0.0,
           t.p_rho, rho * u, t.p_theta, 0.0,
           0.0, theta * t.p_theta, rho * u * t.e_theta, 1.0,
           0.0, 0.0, t.kappa, tau * u;

  sm.B = Mat4::Zero();
  sm.B(1, 1) = t.nu;

  sm.D = Mat4::Zero();
  sm.D(3, 3) = -1.0;

  sm.Qvec = production(state);
  return sm;
}

Mat4 a0_inverse(const SystemMatrices& sm) {
  Mat4 inv = Mat4::Zero();
  for (int i = 0; i < 4; ++i) inv(i, i) = 1.0 / sm.A0(i, i);
  return inv;
}

namespace {

void check_symmetric(const Mat4& m, const char* name) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double scale = std::max({1.0, std::abs(m(i, j)), std::abs(m(j, i))});
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale)
        throw SymmetryError(std::string(name) + " is not symmetric at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
    }
  }
}

}  // namespace

SymmetricSystem symmetrize(const SystemMatrices& sm) {
  const ThermoEval& t = sm.thermo;
  const double rho = sm.at_state.rho;
  const double theta = sm.at_state.theta;

  SymmetricSystem ss;
  ss.at_state = sm.at_state;
  ss.thermo = t;
  ss.tau = sm.tau;
  ss.S = Mat4::Zero();
  ss.S.diagonal() << t.p_rho / rho, 1.0, 1.0 / theta, 1.0 / (t.kappa * theta);

  ss.A0h = ss.S * sm.A0;
  ss.A1h = ss.S * sm.A1;
  ss.Bh = ss.S * sm.B;
  ss.L = -(ss.S * sm.D);

  check_symmetric(ss.A0h, "S*A0");
  check_symmetric(ss.A1h, "S*A1");
  check_symmetric(ss.Bh, "S*B");
  check_symmetric(ss.L, "-S*D");
  return ss;
}

SymmetricSystem symmetric_system(const StateVector& state, const FluidModel& model) {
  return symmetrize(assemble(state, model));
}

bool is_equilibrium(const StateVector& state, double tol) { return std::abs(state.q) <= tol; }

}  // namespace dissiplab
