#include <doctest.h>

#include <random>

#include "dissiplab/errors.hpp"
#include "dissiplab/matrices.hpp"
#include "helpers.hpp"

using namespace dissiplab;

TEST_CASE("assembly at the unit state") {
  const SystemMatrices sm = assemble(testing::unit_state(), testing::unit_gas(0.1));
  Mat4 a0 = Mat4::Zero();
  a0.diagonal() << 1.0, 1.0, 2.5, 1.0;
  Mat4 a1;
  a1 << 0, 1, 0, 0,
        1, 0, 1, 0,
        0, 1, 0, 1,
        0, 0, 1, 0;
  CHECK((sm.A0 - a0).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((sm.A1 - a1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(sm.B(1, 1) == doctest::Approx(0.1));
  CHECK(sm.B.cwiseAbs().sum() == doctest::Approx(0.1));
  CHECK(sm.D(3, 3) == -1.0);
  CHECK(sm.Qvec.isZero());
}

TEST_CASE("production term and its Jacobian") {
  StateVector s = testing::unit_state();
  s.q = 0.7;
  const SystemMatrices sm = assemble(s, testing::unit_gas());
  CHECK(sm.Qvec(3) == doctest::Approx(-0.7));
  const double h = 1e-7;
  StateVector s2 = s;
  s2.q += h;
  CHECK((production(s2)(3) - production(s)(3)) / h == doctest::Approx(sm.D(3, 3)));
}

TEST_CASE("symmetrized matrices at the unit state") {
  const SymmetricSystem ss = symmetric_system(testing::unit_state(), testing::unit_gas(0.1));
  CHECK(ss.S.diagonal().isApprox(Vec4(1.0, 1.0, 1.0, 1.0)));
  CHECK(ss.L(3, 3) == doctest::Approx(1.0));
  CHECK(ss.A0h(2, 2) == doctest::Approx(2.5));
}

TEST_CASE("symmetrization over random states") {
  std::mt19937_64 rng(11);
  const FluidModel m = testing::unit_gas(0.1);
  for (int n = 0; n < 1000; ++n) {
    const StateVector s = testing::random_state(rng);
    const SymmetricSystem ss = symmetric_system(s, m);
    CHECK(symmetry_residual(ss.A0h) <= 1e-12);
    CHECK(symmetry_residual(ss.A1h) <= 1e-12 * std::max(1.0, ss.A1h.cwiseAbs().maxCoeff()));
    CHECK(symmetry_residual(ss.Bh) <= 1e-12);
    CHECK(symmetry_residual(ss.L) <= 1e-12);
    CHECK(min_eigenvalue(ss.A0h) > 0.0);
    CHECK(min_eigenvalue(ss.Bh) >= -1e-14);
    CHECK(min_eigenvalue(ss.L) >= -1e-14);
  }
}

TEST_CASE("equilibrium tolerance") {
  StateVector s = testing::unit_state();
  CHECK(is_equilibrium(s));
  s.q = 1e-13;
  CHECK(is_equilibrium(s));
  s.q = 1e-6;
  CHECK_FALSE(is_equilibrium(s));
  CHECK(is_equilibrium(s, 1e-5));
}

TEST_CASE("inadmissible state is rejected") {
  StateVector s = testing::unit_state();
  s.rho = -1.0;
  CHECK_THROWS_AS(assemble(s, testing::unit_gas()), DomainError);
}

TEST_CASE("asymmetric product raises SymmetryError") {
  SystemMatrices sm = assemble(testing::unit_state(), testing::unit_gas());
  sm.A1(0, 1) += 0.5;
  CHECK_THROWS_AS(symmetrize(sm), SymmetryError);
}
