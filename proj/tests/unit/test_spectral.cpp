#include <doctest.h>

#include <cmath>
#include <random>

#include "dissiplab/errors.hpp"
#include "dissiplab/spectral.hpp"
#include "helpers.hpp"

using namespace dissiplab;

TEST_CASE("reference speeds at the unit state") {
  const CharSpeeds cs = char_speeds_closed_form(testing::unit_state(), testing::unit_gas());
  CHECK(cs.b_tilde == doctest::Approx(-1.8).epsilon(1e-12));
  CHECK(cs.c_tilde == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(cs.discriminant == doctest::Approx(1.64).epsilon(1e-12));
  // m^2 = (1.8 -+ sqrt(1.64)) / 2, computed independently
  const double slow = std::sqrt((1.8 - std::sqrt(1.64)) / 2);
  const double fast = std::sqrt((1.8 + std::sqrt(1.64)) / 2);
  CHECK(cs.c_slow == doctest::Approx(slow).epsilon(1e-14));
  CHECK(cs.c_fast == doctest::Approx(fast).epsilon(1e-14));
  CHECK(std::abs(cs.c_slow - 0.509596) < 1e-5);
  CHECK(std::abs(cs.c_fast - 1.241097) < 1e-5);
  CHECK(cs.zeta[0] == doctest::Approx(-fast));
  CHECK(cs.zeta[3] == doctest::Approx(fast));
}

TEST_CASE("speeds are the roots of the quartic") {
  const CharSpeeds cs = char_speeds_closed_form(testing::unit_state(), testing::unit_gas());
  for (double z : cs.zeta) {
    const double m2 = z * z;
    CHECK(std::abs(m2 * m2 + cs.b_tilde * m2 + cs.c_tilde) < 1e-13);
  }
}

TEST_CASE("closed form matches the eigensolve on random states") {
  std::mt19937_64 rng(5);
  const FluidModel m = testing::unit_gas();
  for (int n = 0; n < 1000; ++n) {
    const StateVector s = testing::random_state(rng);
    const CharSpeeds cs = char_speeds_closed_form(s, m);
    const auto eig = char_speeds_eigen(assemble(s, m));
    const auto sym = char_speeds_symmetric(symmetric_system(s, m));
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(cs.zeta[i] - eig[i]) <= 1e-9);
      CHECK(std::abs(cs.zeta[i] - sym[i]) <= 1e-9);
    }
    CHECK(cs.discriminant > 0.0);
    const auto f = discriminant_forms(evaluate(m, s.rho, s.theta), s.rho, s.theta, m.tau());
    CHECK(std::abs(f.from_coefficients - f.sum_of_squares) <= 1e-12 * f.sum_of_squares);
    CHECK(std::abs(f.completed_square - f.sum_of_squares) <= 1e-12 * f.sum_of_squares);
    CHECK(strict_hyperbolicity_gap(cs) > 0.0);
  }
}

TEST_CASE("uncoupled limit: p_theta -> 0 separates acoustic and thermal speeds") {
  using P = PowerLawCoefficient;
  const StateVector s{2.0, 0.3, 1.5, 0.0};
  double prev_err = 1.0;
  for (double beta : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const FluidModel m = FluidModel::power_law(1.0, 1.4, beta, 2.0, P::constant(3.0), P::constant(0.0), 0.5);
    const ThermoEval t = evaluate(m, s.rho, s.theta);
    const double acoustic = std::sqrt(t.p_rho);
    const double thermal = std::sqrt(t.kappa / (s.rho * t.e_theta * m.tau()));
    const CharSpeeds cs = char_speeds_closed_form(s, m);
    const double err = std::abs(cs.c_slow - std::min(acoustic, thermal)) + std::abs(cs.c_fast - std::max(acoustic, thermal));
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 1e-7);
}

TEST_CASE("Fourier limit: tau -> 0 sends the slow speed to the isothermal one") {
  using P = PowerLawCoefficient;
  const StateVector s = testing::unit_state();
  double prev_err = 1.0;
  for (double tau : {1e-2, 1e-4, 1e-6}) {
    const FluidModel m = FluidModel::ideal_gas(1.0, 1.4, P::constant(1.0), P::constant(0.0), tau);
    const CharSpeeds cs = char_speeds_closed_form(s, m);
    const double err = std::abs(cs.c_slow - 1.0);
    CHECK(err < prev_err);
    CHECK(cs.c_fast > 1.0 / std::sqrt(2.5 * tau) * 0.99);
    prev_err = err;
  }
  CHECK(prev_err < 1e-5);
}

TEST_CASE("characteristic speeds shift with the flow velocity") {
  StateVector s = testing::unit_state();
  const auto base = char_speeds_closed_form(s, testing::unit_gas());
  s.u = 2.0;
  const auto moved = char_speeds_closed_form(s, testing::unit_gas());
  for (int i = 0; i < 4; ++i) CHECK(moved.zeta[i] == doctest::Approx(base.zeta[i] + 2.0));
}

TEST_CASE("degenerate spectrum has zero gap") {
  CHECK(strict_hyperbolicity_gap(std::array<double, 4>{-1.0, 0.0, 0.0, 1.0}) == 0.0);
  CHECK(strict_hyperbolicity_gap(std::array<double, 4>{-2.0, -1.0, 1.0, 2.0}) == doctest::Approx(1.0));
}

TEST_CASE("complex speeds are reported as loss of hyperbolicity") {
  SystemMatrices sm = assemble(testing::unit_state(), testing::unit_gas());
  sm.A1(1, 0) = -1.0;  // p_rho < 0: elliptic acoustic block
  CHECK_THROWS_AS(char_speeds_eigen(sm), HyperbolicityError);
}

TEST_CASE("closed form rejects a negative p_rho") {
  using P = PowerLawCoefficient;
  const FluidModel m = FluidModel::power_law(1.0, -1.0, 1.0, 2.5, P::constant(1.0), P::constant(0.0), 1.0);
  CHECK_THROWS_AS(char_speeds_closed_form(testing::unit_state(), m), HyperbolicityError);
}
