#pragma once

#include <random>

#include "dissiplab/eos.hpp"
#include "dissiplab/matrices.hpp"

namespace testing {

inline dissiplab::FluidModel unit_gas(double nu = 0.0) {
  using dissiplab::PowerLawCoefficient;
  return dissiplab::FluidModel::ideal_gas(1.0, 1.4, PowerLawCoefficient::constant(1.0),
                                          PowerLawCoefficient::constant(nu), 1.0);
}

inline dissiplab::StateVector unit_state() { return {1.0, 0.0, 1.0, 0.0}; }

// rho, theta in [0.1, 10], u in [-5, 5], q in [-2, 2] (q = 0 for equilibria)
inline dissiplab::StateVector random_state(std::mt19937_64& rng, bool equilibrium = false) {
  std::uniform_real_distribution<double> pos(0.1, 10.0), vel(-5.0, 5.0), flux(-2.0, 2.0);
  dissiplab::StateVector s;
  s.rho = pos(rng);
  s.u = vel(rng);
  s.theta = pos(rng);
  s.q = equilibrium ? 0.0 : flux(rng);
  return s;
}

}  // namespace testing
