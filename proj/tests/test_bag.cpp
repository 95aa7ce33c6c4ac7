#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "diracsim/bag.hpp"
#include "oracles.hpp"

using namespace diracsim;

namespace {

// Literal 4x4 Pauli products on spin(1) (x) spin(3), index 2 s1 + s3.
Mat4c sx1() {
  Mat4c m = Mat4c::Zero();
  m(0, 2) = m(2, 0) = m(1, 3) = m(3, 1) = 1.0;
  return m;
}
Mat4c sx3() {
  Mat4c m = Mat4c::Zero();
  m(0, 1) = m(1, 0) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}
Mat4c sy1() {
  Mat4c m = Mat4c::Zero();
  m(0, 2) = m(1, 3) = cplx(0, -1);
  m(2, 0) = m(3, 1) = cplx(0, 1);
  return m;
}
Mat4c sy3() {
  Mat4c m = Mat4c::Zero();
  m(0, 1) = m(2, 3) = cplx(0, -1);
  m(1, 0) = m(3, 2) = cplx(0, 1);
  return m;
}

BagParams params(real c, real m, real v0, real pcm) {
  BagParams bp;
  bp.base.c = c;
  bp.base.m = m;
  bp.V0 = v0;
  bp.P_cm = pcm;
  return bp;
}

std::vector<real> sorted_eigenvalues(const Mat4c& h) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  std::vector<real> v(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(v.begin(), v.end());
  return v;
}

// Dense whole-grid Hamiltonian, index = component * n + j.
MatXc dense_bag(const Grid1D& g, const BagParams& bp) {
  const auto n = static_cast<Eigen::Index>(g.size());
  const MatXc f = oracle::dft_matrix(n);
  const MatXc p = f.adjoint() * g.momenta().cast<cplx>().asDiagonal() * f;
  const real c = bp.base.c, mc2 = bp.base.m * c * c;
  const Mat4c a = c * (sx1() - sx3());
  const Mat4c b = 0.5 * c * bp.P_cm * (sx1() + sx3()) + mc2 * (sy1() + sy3());
  MatXc h = MatXc::Zero(4 * n, 4 * n);
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      h.block(r * n, s * n, n, n) = a(r, s) * p + b(r, s) * MatXc::Identity(n, n);
    }
    for (Eigen::Index j = 0; j < n; ++j) h(r * n + j, r * n + j) += bp.V0 * g.x(j) * g.x(j);
  }
  return h;
}

VecXc stack(const FourSpinorField& f) {
  const auto n = f.amplitudes().rows();
  VecXc v(4 * n);
  for (int k = 0; k < 4; ++k) v.segment(k * n, n) = f.amplitudes().col(k);
  return v;
}

}  // namespace

TEST_CASE("bag_spin_kinetic_block matches literal Pauli products") {
  for (int draw = 0; draw < 20; ++draw) {
    const auto bp = params(oracle::uniform(0.3, 2), oracle::uniform(0, 2), 0.5,
                           oracle::uniform(-3, 3));
    const real p = oracle::uniform(-4, 4);
    const real c = bp.base.c;
    const Mat4c expected = c * p * (sx1() - sx3()) + 0.5 * c * bp.P_cm * (sx1() + sx3()) +
                           bp.base.m * c * c * (sy1() + sy3());
    const Mat4c k = bag_spin_kinetic_block(p, bp);
    CHECK((k - expected).norm() < 1e-13);
    CHECK((k - k.adjoint()).norm() < 1e-14);
    CHECK(std::abs(k.trace()) < 1e-13);
  }
}

TEST_CASE("bag_spin_kinetic_block spectra in the decoupled limits") {
  SUBCASE("massless, no centre-of-mass momentum") {
    const auto ev = sorted_eigenvalues(bag_spin_kinetic_block(1.7, params(1.3, 0, 0.5, 0)));
    CHECK(ev[0] == doctest::Approx(-2 * 1.3 * 1.7).epsilon(1e-12));
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(2 * 1.3 * 1.7).epsilon(1e-12));
  }
  SUBCASE("zero momenta") {
    const auto bp = params(1.0, 0.8, 0.5, 0);
    const auto ev = sorted_eigenvalues(bag_spin_kinetic_block(0, bp));
    CHECK(ev[0] == doctest::Approx(-1.6).epsilon(1e-12));
    CHECK(std::abs(ev[1]) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(ev[3] == doctest::Approx(1.6).epsilon(1e-12));
  }
}

TEST_CASE("prepare_initial builds Pi eigenstates") {
  const auto g = make_grid(1024, -40, 40);
  const auto plus = prepare_initial(0, 3, 0, +1, g);
  const auto minus = prepare_initial(0, 3, 0, -1, g);
  CHECK(std::abs(plus.norm() - 1) < 1e-12);
  CHECK(std::abs(pi_expectation(plus) - 1) < 1e-12);
  CHECK(std::abs(pi_expectation(minus) + 1) < 1e-12);

  const Vec4c spin = plus.amplitudes().row(512).transpose().normalized();
  const Vec4c expected = Vec4c(1, -1, 1, -1) / 2.0;
  CHECK(std::abs(std::abs(expected.dot(spin)) - 1) < 1e-12);

  SUBCASE("equal mixture of the two sectors") {
    FourSpinorField::Amplitudes a = plus.amplitudes() + minus.amplitudes();
    CHECK(std::abs(pi_expectation(FourSpinorField(g, a))) < 1e-12);
  }
  SUBCASE("moments") {
    const auto f = prepare_initial(1.5, 3, 2, +1, g);
    CHECK(mean_position(f) == doctest::Approx(1.5).epsilon(1e-10));
    const auto mom = to_momentum(f);
    const VecXd rho = mom.density();
    CHECK(g.momenta().dot(rho) / rho.sum() == doctest::Approx(2).epsilon(1e-3));
  }
  CHECK_THROWS_AS(prepare_initial(0, 3, 0, 0, g), DomainError);
}

TEST_CASE("bag tunneling radius and fraction") {
  const auto bp = params(1, 1, 0.5, 2);
  CHECK(bp.tunneling_radius() == doctest::Approx(2).epsilon(1e-14));
  const auto g = make_grid(1024, -40, 40);
  CHECK(klein_tunneling_fraction(prepare_initial(0, 0.2, 0, 1, g), bp) < 1e-12);
  // Gaussian mass outside |x| > 2 for sigma = 3: erfc(2 / (3 sqrt 2)).
  CHECK(klein_tunneling_fraction(prepare_initial(0, 3, 0, 1, g), bp) ==
        doctest::Approx(std::erfc(2 / (3 * std::sqrt(2.0)))).epsilon(1e-2));
  CHECK(klein_tunneling_fraction(prepare_initial(0, 3, 0, 1, g), params(1, 1, 0, 2)) == 0.0);
}

TEST_CASE("evolve_bag agrees with dense exponentiation on a small grid") {
  const auto g = make_grid(64, -8, 8);
  const auto bp = params(1, 0.5, 0.1, 1);
  const auto psi0 = prepare_initial(0.5, 1, 0.5, 1, g);
  // Guard-free stepping: the comparison is about the scheme on the same periodic grid.
  const auto strang = evolve_split<4>(psi0, bag_propagator(g, bp, 1e-3), 5000);
  const VecXc exact = oracle::dense_evolve(dense_bag(g, bp), stack(psi0), 5);
  const real dist = std::sqrt((stack(strang) - exact).squaredNorm() * g.dx());
  CHECK(dist < 1e-6);
  CHECK(std::abs(strang.norm() - 1) < 1e-12);
}

TEST_CASE("bag_energy is the expectation of the dense Hamiltonian") {
  const auto g = make_grid(64, -8, 8);
  const auto bp = params(1.2, 0.7, 0.3, -0.5);
  const auto psi = prepare_initial(-0.3, 1.2, 0.8, -1, g);
  const VecXc v = stack(psi);
  const real expected = (v.adjoint() * dense_bag(g, bp) * v)(0).real() * g.dx();
  CHECK(bag_energy(psi, bp) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("massless Pi sectors are invariant") {
  const auto g = make_grid(1024, -40, 40);
  const auto bp = params(1, 0, 0.02, 2);
  const auto run = evolve_bag_series(prepare_initial(0, 2, 1, +1, g), bp, 0.01, 8, {100});
  for (real pi_value : run.pi_values) CHECK(std::abs(pi_value - 1) < 1e-10);

  SUBCASE("free chiral motion without potential") {
    const auto free = evolve_bag(prepare_initial(0, 2, 0, +1, g), params(1, 0, 0, 0), 0.01, 5);
    // Pi = +1 has H = 2 c p: rigid translation by 2 c t.
    CHECK(mean_position(free) == doctest::Approx(10).epsilon(1e-6));
    const VecXd shifted = prepare_initial(10, 2, 0, +1, g).density();
    CHECK((free.density() - shifted).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("exchange with reflection maps the Pi = +1 run onto Pi = -1") {
  // Swapping particles 1 and 3 together with x_r -> -x_r leaves the
  // Hamiltonian invariant when P_cm = 0 and flips Pi.
  const auto g = make_grid(2048, -40, 40);
  const auto bp = params(1, 1, 0.5, 0);
  const auto plus = evolve_bag_series(prepare_initial(0, 3, 0, +1, g), bp, 0.01, 2, {50});
  const auto minus = evolve_bag_series(prepare_initial(0, 3, 0, -1, g), bp, 0.01, 2, {50});
  const auto n = static_cast<Eigen::Index>(g.size());
  real worst = 0;
  for (std::size_t s = 0; s < plus.densities.size(); ++s) {
    const VecXd& a = plus.densities[s];
    const VecXd& b = minus.densities[s];
    for (Eigen::Index j = 1; j < n; ++j) worst = std::max(worst, std::abs(a[j] - b[n - j]));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("bag series bookkeeping") {
  const auto g = make_grid(1024, -40, 40);
  const auto bp = params(1, 1, 0.5, 2);
  const auto psi0 = prepare_initial(0, 3, 2, +1, g);
  const auto run = evolve_bag_series(psi0, bp, 0.01, 2, {50});
  REQUIRE(run.times.size() == 5);
  CHECK(run.times.back() == doctest::Approx(2));
  const MatXd trace = density_trace(run);
  CHECK(trace.rows() == 5);
  CHECK((trace.row(0).transpose() - psi0.density()).norm() == 0.0);
  for (Eigen::Index r = 0; r < trace.rows(); ++r) {
    CHECK(std::abs(trace.row(r).sum() * g.dx() - 1) < 1e-9);
  }
  for (std::size_t s = 0; s < run.energies.size(); ++s) {
    CHECK(std::abs(run.energies[s] - run.energies[0]) < 1e-4 * std::abs(run.energies[0]));
  }
  CHECK(std::abs(pi_expectation(run.final_state)) < 1.0 - 1e-3);
  CHECK(l2_distance(evolve_bag(psi0, bp, 0.01, 2), run.final_state) < 1e-14);
}

TEST_CASE("count_local_maxima") {
  VecXd two(9);
  two << 0, 1, 3, 1, 0, 2, 4, 2, 0;
  CHECK(count_local_maxima(two) == 2);
  CHECK(count_local_maxima(two, 0.9) == 1);
  CHECK(count_local_maxima(VecXd::Ones(5)) == 0);
}

TEST_CASE("bag guards") {
  const auto g = make_grid(256, -10, 10);
  CHECK_THROWS_AS(evolve_bag(prepare_initial(0, 1, 0, 1, g), params(1, 1, -1, 0), 0.01, 1),
                  ConfigError);
  // Strong confinement on a coarse box aliases the momentum of escaping parts.
  CHECK_THROWS_AS(evolve_bag(prepare_initial(0, 3, 0, 1, make_grid(2048, -40, 40)),
                             params(1, 1, 0.5, 2), 0.01, 10),
                  NumericalGuardError);
}

TEST_CASE("absorbing layer books the removed probability") {
  const auto bp = params(1, 1, 0.5, 2);
  BagRunOptions opts;
  opts.snapshot_every = 100;
  opts.absorber_start = 15;
  const auto coarse_grid = make_grid(2048, -30, 30);
  const auto coarse = evolve_bag_series(prepare_initial(0, 3, 2, -1, coarse_grid), bp, 0.01, 12, opts);
  CHECK(coarse.final_absorbed > 0.05);
  for (std::size_t s = 0; s < coarse.norms.size(); ++s) {
    CHECK(std::abs(coarse.norms[s] + coarse.absorbed[s] - 1) < 1e-12);
  }

  opts.absorber_start = 25;
  opts.snapshot_every = 200;
  const auto fine_grid = make_grid(8192, -40, 40);
  const auto fine = evolve_bag_series(prepare_initial(0, 3, 2, -1, fine_grid), bp, 0.005, 12, opts);
  CHECK(klein_tunneling_fraction(coarse, bp) ==
        doctest::Approx(klein_tunneling_fraction(fine, bp)).epsilon(5e-3));

  SUBCASE("nothing reaches the mask") {
    const auto g = make_grid(1024, -40, 40);
    const auto psi0 = prepare_initial(0, 2, 0, 1, g);
    BagRunOptions far;
    far.absorber_start = 30;
    const auto free_bp = params(1, 0, 0, 0);
    const auto run = evolve_bag_series(psi0, free_bp, 0.01, 3, far);
    CHECK(run.final_absorbed < 1e-12);
    CHECK(l2_distance(run.final_state, evolve_bag(psi0, free_bp, 0.01, 3)) < 1e-12);
  }
  CHECK_THROWS_AS(evolve_bag_series(prepare_initial(0, 3, 2, -1, coarse_grid), bp, 0.01, 1,
                                    BagRunOptions{0, 40.0}),
                  ConfigError);
}
