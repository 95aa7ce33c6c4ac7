#include <doctest.h>

#include <cmath>

#include "diracsim/dirac.hpp"
#include "diracsim/field.hpp"
#include "diracsim/grid.hpp"
#include "diracsim/pauli.hpp"
#include "diracsim/split_step.hpp"
#include "oracles.hpp"

using namespace diracsim;

namespace {

SpinorField1D random_field(const Grid1D& g) {
  SpinorField1D::Amplitudes a(static_cast<Eigen::Index>(g.size()), 2);
  for (Eigen::Index j = 0; j < a.rows(); ++j)
    for (int s = 0; s < 2; ++s) a(j, s) = cplx(oracle::uniform(-1, 1), oracle::uniform(-1, 1));
  return SpinorField1D(g, a).normalized();
}

SpinorField1D gaussian_spinor(const Grid1D& g, real x0, real sigma, real p0, Vec2c spin) {
  const VecXc env = gaussian_packet(g, x0, sigma, p0);
  SpinorField1D::Amplitudes a(env.size(), 2);
  spin.normalize();
  a.col(0) = spin[0] * env;
  a.col(1) = spin[1] * env;
  return SpinorField1D(g, a);
}

}  // namespace

TEST_CASE("make_grid spacing and dual lattice") {
  const auto g = make_grid(8, -1.0, 1.0);
  CHECK(g.dx() == doctest::Approx(0.25));
  CHECK(g.dp() == doctest::Approx(pi));
  CHECK(g.p(1) == doctest::Approx(pi));
  CHECK(g.p(4) == doctest::Approx(-4 * pi));
  CHECK(g.p(7) == doctest::Approx(-pi));

  const auto fig = make_grid(1024, -150.0, 150.0);
  CHECK(fig.dx() == doctest::Approx(300.0 / 1024.0));
  CHECK(fig.dx() == doctest::Approx(0.293).epsilon(1e-3));

  CHECK_THROWS_AS(make_grid(7, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(4, -1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(make_grid(16, 1.0, -1.0), ConfigError);
}

TEST_CASE("DFT round trip is the identity and preserves the norm") {
  for (std::size_t n = 8; n <= 4096; n *= 2) {
    const auto g = make_grid(n, -10.0, 10.0);
    const auto f = random_field(g);
    const auto mom = to_momentum(f);
    CHECK(std::abs(mom.norm() - 1.0) < 1e-12);
    const auto back = to_position(mom);
    CHECK(l2_distance(back, f) < 1e-12);
  }
}

TEST_CASE("DFT of a plane wave peaks at its momentum") {
  const auto g = make_grid(64, -8.0, 8.0);
  const std::size_t k0 = 5;
  const real p0 = g.p(k0);
  SpinorField1D::Amplitudes a(64, 2);
  for (std::size_t j = 0; j < 64; ++j) {
    a(static_cast<Eigen::Index>(j), 0) = std::exp(cplx(0.0, p0 * g.x(j)));
    a(static_cast<Eigen::Index>(j), 1) = 0.0;
  }
  const auto mom = to_momentum(SpinorField1D(g, a).normalized());
  Eigen::Index peak;
  mom.amplitudes().col(0).cwiseAbs().maxCoeff(&peak);
  CHECK(peak == static_cast<Eigen::Index>(k0));
  CHECK(std::norm(mom.amplitudes()(peak, 0)) * g.dx() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transforms reject the wrong representation") {
  const auto g = make_grid(16, -1.0, 1.0);
  const auto f = random_field(g);
  CHECK_THROWS_AS(to_position(f), UsageError);
  CHECK_THROWS_AS(to_momentum(to_momentum(f)), UsageError);
}

TEST_CASE("pauli_exponential closed form") {
  SUBCASE("zero coefficients give the identity") {
    CHECK((pauli_exponential(PauliCoeffs{}, 1.3) - Mat2c::Identity()).norm() < 1e-15);
    CHECK((pauli_exponential(PauliCoeffs{}, 0.0) - Mat2c::Identity()).norm() < 1e-15);
  }
  SUBCASE("quarter rotation about x") {
    const Mat2c u = pauli_exponential(PauliCoeffs{0, 1, 0, 0}, pi / 2);
    CHECK((u - (-I) * sigma_x()).norm() < 1e-15);
  }
  SUBCASE("agrees with the series oracle on random draws") {
    for (int draw = 0; draw < 100; ++draw) {
      const PauliCoeffs c{oracle::uniform(-2, 2), oracle::uniform(-2, 2), oracle::uniform(-2, 2),
                          oracle::uniform(-2, 2)};
      const real theta = oracle::uniform(-3, 3);
      const Mat2c u = pauli_exponential(c, theta);
      CHECK((u - oracle::series_exponential(Mat2c(c.matrix()), theta)).norm() < 1e-10);
      CHECK((u * u.adjoint() - Mat2c::Identity()).norm() < 1e-13);
      CHECK(std::abs(std::abs(u.determinant()) - 1.0) < 1e-13);
    }
  }
}

TEST_CASE("matrix_exponential_4") {
  CHECK((matrix_exponential_4(Mat4c::Zero(), 2.0) - Mat4c::Identity()).norm() < 1e-14);

  const PauliCoeffs a{0.3, 0.1, -0.7, 0.4};
  const PauliCoeffs b{-1.0, 0.5, 0.2, -0.9};
  Mat4c h = Mat4c::Zero();
  h.block<2, 2>(0, 0) = a.matrix();
  h.block<2, 2>(2, 2) = b.matrix();
  const Mat4c u = matrix_exponential_4(h, 0.8);
  CHECK((u.block<2, 2>(0, 0) - pauli_exponential(a, 0.8)).norm() < 1e-13);
  CHECK((u.block<2, 2>(2, 2) - pauli_exponential(b, 0.8)).norm() < 1e-13);
  CHECK(u.block<2, 2>(0, 2).norm() < 1e-14);

  for (int draw = 0; draw < 50; ++draw) {
    const Mat4c r = oracle::random_hermitian<4>(2.0);
    const real theta = oracle::uniform(-2, 2);
    const Mat4c ur = matrix_exponential_4(r, theta);
    CHECK((ur - oracle::series_exponential(r, theta)).norm() < 1e-10);
    CHECK((ur * ur.adjoint() - Mat4c::Identity()).norm() < 1e-12);
  }

  Mat4c bad = Mat4c::Zero();
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(matrix_exponential_4(bad, 1.0), DomainError);
}

TEST_CASE("strang_step with zero potential is exact free evolution") {
  const auto g = make_grid(256, -40.0, 40.0);
  const SimParams params{1.0, 0.5, Vec3::UnitY()};
  const auto psi0 = gaussian_spinor(g, 0.0, 3.0, 0.7, Vec2c(1.0, 0.3));
  const real t = 2.4;
  const auto exact = evolve_free(psi0, params, t);
  for (int steps : {1, 3, 16}) {
    const real dt = t / steps;
    SplitPropagator<2> prop{g, dt, dirac_kinetic_phase_1p1(g, params, dt),
                            VecXc::Ones(static_cast<Eigen::Index>(g.size()))};
    const auto out = evolve_split(psi0, prop, static_cast<std::size_t>(steps));
    CHECK(l2_distance(out, exact) < 1e-12);
  }
}

TEST_CASE("strang_step is unitary and inverted by the negative step") {
  const auto g = make_grid(128, -20.0, 20.0);
  const SimParams params{1.0, 0.8, Vec3::UnitZ()};
  const auto psi = gaussian_spinor(g, -2.0, 2.0, 1.0, Vec2c(0.6, cplx(0.0, 0.8)));
  const auto harmonic = [](real x) { return 0.05 * x * x; };
  const real dt = 0.05;
  const auto fwd = strang_step(psi, dirac_kinetic_phase_1p1(g, params, dt),
                               potential_phase_table(g, dt / 2, harmonic));
  CHECK(std::abs(fwd.norm() - psi.norm()) < 1e-12);
  const auto back = strang_step(fwd, dirac_kinetic_phase_1p1(g, params, -dt),
                                potential_phase_table(g, -dt / 2, harmonic));
  CHECK(l2_distance(back, psi) < 1e-11);

  MatrixPotentialPhase<2> mat(g.size());
  const auto scalar = potential_phase_table(g, dt / 2, harmonic);
  for (std::size_t j = 0; j < g.size(); ++j) mat[j] = scalar[static_cast<Eigen::Index>(j)] * Mat2c::Identity();
  const auto via_matrix = strang_step(psi, dirac_kinetic_phase_1p1(g, params, dt), mat);
  CHECK(l2_distance(via_matrix, fwd) < 1e-14);

  CHECK_THROWS_AS(strang_step(psi, dirac_kinetic_phase_1p1(make_grid(64, -1, 1), params, dt),
                              scalar),
                  UsageError);
}

TEST_CASE("strang splitting is second order on a harmonic potential") {
  const auto g = make_grid(256, -30.0, 30.0);
  const SimParams params{1.0, 1.0, Vec3::UnitZ()};
  const auto psi0 = gaussian_spinor(g, 1.0, 2.0, 0.5, Vec2c(1.0, 0.5));
  const auto harmonic = [](real x) { return 0.02 * x * x; };
  const real t = 4.0;
  const auto run = [&](real dt) {
    const auto steps = steps_for(t, dt);
    const real h = t / static_cast<real>(steps);
    SplitPropagator<2> prop{g, h, dirac_kinetic_phase_1p1(g, params, h),
                            potential_phase_table(g, h / 2, harmonic)};
    return evolve_split(psi0, prop, steps);
  };
  const real dt = 0.2;
  const auto reference = run(dt / 16);
  const real e1 = l2_distance(run(dt), reference);
  const real e2 = l2_distance(run(dt / 2), reference);
  const real e4 = l2_distance(run(dt / 4), reference);
  const real order = std::log2(e1 / e2);
  MESSAGE("strang errors " << e1 << " " << e2 << " " << e4 << " order " << order);
  CHECK(order >= 1.9);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(std::log2(e2 / e4) >= 1.9);
}

TEST_CASE("boundary leak guard") {
  const auto g = make_grid(64, -10.0, 10.0);
  VecXd rho = VecXd::Zero(64);
  rho[32] = 1.0 / g.dx();
  CHECK(boundary_probability(g, rho) == doctest::Approx(0.0));
  CHECK_NOTHROW(check_boundary_leak(g, rho));
  rho[0] = 1e-3 / g.dx();
  CHECK(boundary_probability(g, rho) == doctest::Approx(1e-3));
  CHECK_THROWS_AS(check_boundary_leak(g, rho), NumericalGuardError);
}
