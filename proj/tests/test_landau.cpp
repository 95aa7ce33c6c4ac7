#include <doctest.h>

#include <cmath>

#include "diracsim/landau.hpp"
#include "oracles.hpp"

using namespace diracsim;

namespace {

// Physicists' Hermite polynomial from the standard library, normalized.
real hermite_oracle(int n, real x) {
  const real norm = std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(pi));
  return std::hermite(static_cast<unsigned>(n), x) * std::exp(-0.5 * x * x) / norm;
}

// Direct quadrature of (1/2 pi) int f(x + s/2) g(x - s/2) e^{-i s p} ds.
cplx cross_wigner_quadrature(int m, int n, real x, real p) {
  const real ds = 0.01;
  cplx acc = 0.0;
  for (real s = -24.0; s <= 24.0; s += ds) {
    acc += hermite_oracle(m, x + s / 2) * hermite_oracle(n, x - s / 2) *
           std::exp(cplx(0.0, -s * p));
  }
  return acc * ds / (2.0 * pi);
}

SpinorField1D spinor(const Grid1D& g, int n_up, int n_down) {
  SpinorField1D::Amplitudes a = SpinorField1D::Amplitudes::Zero(static_cast<Eigen::Index>(g.size()), 2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (n_up >= 0) a(static_cast<Eigen::Index>(j), 0) = hermite_function(n_up, g.x(j));
    if (n_down >= 0) a(static_cast<Eigen::Index>(j), 1) = hermite_function(n_down, g.x(j));
  }
  return SpinorField1D(g, a).normalized();
}

PseudospinField level_field(int n, const JCParams& jp, const Grid1D& axis) {
  const auto rho = SpinOscillatorState::pure(jp.n_max, landau_state_vector(n, +1, jp));
  return pseudospin_field(wigner_from_density(rho, axis, axis), 1e-12);
}

}  // namespace

TEST_CASE("jc_hamiltonian structure and spectrum") {
  const JCParams jp{1.0, 0.5, 64};
  const MatXc h = jc_hamiltonian(jp);
  CHECK((h - h.adjoint()).norm() == 0.0);
  const auto dim = static_cast<Eigen::Index>(jp.fock_dim());
  CHECK(h(dim, dim).real() == doctest::Approx(-0.5));

  const JCParams massless{1.0, 0.0, 8};
  const MatXc h0 = jc_hamiltonian(massless);
  CHECK(std::abs(h0(0, 9 + 1) - std::sqrt(2.0)) < 1e-15);
  CHECK(landau_energy(1, +1, massless) == doctest::Approx(std::sqrt(2.0)));
  CHECK(landau_energy(1, -1, JCParams{1.0, 1.0, 8}) == doctest::Approx(-std::sqrt(3.0)));
  CHECK_THROWS_AS(landau_energy(-1, 1, jp), DomainError);

  Eigen::SelfAdjointEigenSolver<MatXc> es(h);
  const VecXd ev = es.eigenvalues();
  const auto nearest = [&](real e) { return (ev.array() - e).abs().minCoeff(); };
  CHECK(nearest(landau_energy(0, 1, jp)) < 1e-10);
  for (int n = 1; n <= 32; ++n) {
    CHECK(nearest(landau_energy(n, +1, jp)) < 1e-10);
    CHECK(nearest(landau_energy(n, -1, jp)) < 1e-10);
  }
}

TEST_CASE("landau state vectors are eigenvectors") {
  for (real m : {0.0, 0.5, 2.0}) {
    const JCParams jp{1.3, m, 40};
    const MatXc h = jc_hamiltonian(jp);
    for (int n = 0; n <= 20; ++n) {
      for (int sign : {-1, 1}) {
        const VecXc v = landau_state_vector(n, sign, jp);
        CHECK(std::abs(v.norm() - 1.0) < 1e-14);
        CHECK((h * v - landau_energy(n, sign, jp) * v).norm() < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(landau_state_vector(21, 1, JCParams{1.0, 0.5, 40}), DomainError);

  const auto heavy = landau_state_vector(1, +1, JCParams{1.0, 100.0, 8});
  CHECK(std::norm(heavy[0]) > 1.0 - 1e-4);
}

TEST_CASE("hermite functions") {
  CHECK(hermite_function(0, 0.7) == doctest::Approx(std::pow(pi, -0.25) * std::exp(-0.245)));
  CHECK(std::abs(hermite_function(3, 0.0)) < 1e-300);
  for (int n = 0; n <= 20; ++n) {
    for (real x : {-3.1, -0.4, 0.0, 1.2, 4.5}) {
      CHECK(std::abs(hermite_function(n, x) - hermite_oracle(n, x)) < 1e-12);
    }
  }
  const auto g = make_grid(1024, -25.0, 25.0);
  MatXd phi(1024, 61);
  for (std::size_t j = 0; j < g.size(); ++j) {
    phi.row(static_cast<Eigen::Index>(j)) = hermite_functions(60, g.x(j)).transpose();
  }
  const MatXd gram = phi.transpose() * phi * g.dx();
  CHECK((gram - MatXd::Identity(61, 61)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(std::isfinite(hermite_function(200, 12.0)));
  CHECK_THROWS_AS(hermite_function(201, 0.0), DomainError);
}

TEST_CASE("landau eigenstates solve the position-space equation") {
  const JCParams jp{1.0, 0.5, 16};
  const auto g = make_grid(256, -12.0, 12.0);
  CHECK_NOTHROW(landau_eigenstate(0, 1, jp, g));
  const auto ground = landau_eigenstate(0, 1, jp, g);
  CHECK(ground.amplitudes().col(0).norm() == 0.0);
  CHECK(ground.norm() == doctest::Approx(1.0));

  for (int n = 1; n <= 3; ++n) {
    for (int sign : {-1, 1}) {
      const auto psi = landau_eigenstate(n, sign, jp, g);
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-10));
      // H = m c^2 sigma_z + c [[0, x + ip], [x - ip, 0]] with p applied spectrally.
      auto mom = to_momentum(psi).amplitudes();
      for (std::size_t k = 0; k < g.size(); ++k) mom.row(static_cast<Eigen::Index>(k)) *= g.p(k);
      SpinorField1D::Amplitudes pa = mom;
      fft::transform_columns(pa, fft::Direction::backward);
      const auto& a = psi.amplitudes();
      SpinorField1D::Amplitudes h(a.rows(), 2);
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        const real x = g.x(static_cast<std::size_t>(j));
        const real mc2 = jp.m * jp.c * jp.c;
        h(j, 0) = mc2 * a(j, 0) + jp.c * (x * a(j, 1) + I * pa(j, 1));
        h(j, 1) = -mc2 * a(j, 1) + jp.c * (x * a(j, 0) - I * pa(j, 0));
      }
      const real e = landau_energy(n, sign, jp);
      CHECK(std::sqrt((h - e * a).squaredNorm() * g.dx()) < 1e-8);
    }
  }
}

TEST_CASE("spinor Wigner function") {
  const auto g = make_grid(128, -8.0, 8.0);
  const auto p_axis = make_grid(64, -6.0, 6.0);

  SUBCASE("Gaussian state") {
    const auto w = wigner_spinor(spinor(g, 0, -1), p_axis);
    CHECK_FALSE(w.accuracy_warning);
    const MatXd tr = (w.uu + w.dd).real();
    CHECK(tr.minCoeff() > -1e-12);
    CHECK(w.total() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(w.uu(64, 32).real() == doctest::Approx(1.0 / pi).epsilon(1e-8));
  }

  SUBCASE("first Fock state is negative at the origin") {
    const auto w = wigner_spinor(spinor(g, -1, 1), p_axis);
    CHECK((w.uu + w.dd)(64, 32).real() == doctest::Approx(-1.0 / pi).epsilon(1e-8));
    CHECK(w.total() == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("Hermitian and marginal") {
    const auto psi = landau_eigenstate(2, 1, JCParams{1.0, 0.5, 16}, g);
    const auto fine_p = make_grid(256, -16.0, 16.0);
    const auto w = wigner_spinor(psi, fine_p);
    CHECK((w.ud - w.du.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(w.uu.imag().cwiseAbs().maxCoeff() < 1e-12);
    const auto& a = psi.amplitudes();
    real worst = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Mat2c rho = a.row(i).transpose() * a.row(i).conjugate();
      Mat2c marginal = Mat2c::Zero();
      for (Eigen::Index j = 0; j < w.uu.cols(); ++j) marginal += w.at(i, j) * fine_p.dx();
      worst = std::max(worst, (marginal - rho).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("closed-form Fock cross-Wigner kernels") {
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; n <= 4; ++n) {
      for (const auto& [x, p] : {std::pair{0.0, 0.0}, {0.7, -0.3}, {-1.4, 1.1}}) {
        CHECK(std::abs(fock_cross_wigner(m, n, x, p) - cross_wigner_quadrature(m, n, x, p)) <
              1e-10);
      }
    }
  }
}

TEST_CASE("wigner_from_density") {
  const JCParams jp{1.0, 0.5, 16};
  const auto g = make_grid(256, -8.0, 8.0);
  const auto p_axis = make_grid(32, -4.0, 4.0);
  for (int n = 0; n <= 3; ++n) {
    const auto rho = SpinOscillatorState::pure(jp.n_max, landau_state_vector(n, 1, jp));
    const auto a = wigner_from_density(rho, g, p_axis);
    const auto b = wigner_spinor(landau_eigenstate(n, 1, jp, g), p_axis);
    const real diff = std::max({(a.uu - b.uu).cwiseAbs().maxCoeff(), (a.ud - b.ud).cwiseAbs().maxCoeff(),
                                (a.du - b.du).cwiseAbs().maxCoeff(), (a.dd - b.dd).cwiseAbs().maxCoeff()});
    CHECK(diff < 1e-8);
  }

  MatXc mixed = MatXc::Zero(34, 34);
  mixed(0, 0) = 0.5;
  mixed(17, 17) = 0.5;
  const auto w = wigner_from_density(SpinOscillatorState(16, mixed), p_axis, p_axis);
  const auto s = pseudospin_field(w);
  CHECK(s.raw_x.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(s.raw_y.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(s.raw_z.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("pseudospin field") {
  const auto axis = make_grid(32, -4.0, 4.0);
  const MatXc gauss = [&] {
    MatXc out(32, 32);
    for (Eigen::Index i = 0; i < 32; ++i)
      for (Eigen::Index j = 0; j < 32; ++j)
        out(i, j) = std::exp(-0.1 * (std::pow(axis.x(i), 2) + std::pow(axis.x(j), 2)));
    return out;
  }();
  const MatXc zero = MatXc::Zero(32, 32);
  const auto up = pseudospin_field(WignerField{axis, axis, gauss, zero, zero, zero});
  CHECK(up.valid.all());
  CHECK((up.sz.array() - 1.0).abs().maxCoeff() < 1e-15);
  const auto flat = pseudospin_field(WignerField{axis, axis, gauss, zero, zero, gauss});
  CHECK_FALSE(flat.valid.any());

  const JCParams jp{1.0, 0.5, 16};
  const auto s = level_field(1, jp, make_grid(128, -7.0, 7.0));
  CHECK(s.sz(64, 64) == doctest::Approx(1.0).epsilon(1e-3));
  Eigen::Index far_i = 64 + 40;
  CHECK(s.valid(far_i, 64));
  CHECK(s.sz(far_i, 64) < -0.8);
  for (Eigen::Index i = 0; i < 128; ++i)
    for (Eigen::Index j = 0; j < 128; ++j)
      if (s.valid(i, j)) CHECK(std::abs(s.at(i, j).norm() - 1.0) < 1e-10);
}

TEST_CASE("winding number of an analytic hedgehog") {
  const auto axis = make_grid(128, -5.0, 5.0);
  MatXd rx(128, 128), ry(128, 128), rz(128, 128);
  for (Eigen::Index i = 0; i < 128; ++i) {
    for (Eigen::Index j = 0; j < 128; ++j) {
      const real x = axis.x(i), p = axis.x(j);
      const real theta = pi * (1.0 - std::exp(-0.5 * (x * x + p * p)));
      const real phi = std::atan2(p, x);
      rx(i, j) = std::sin(theta) * std::cos(phi);
      ry(i, j) = std::sin(theta) * std::sin(phi);
      rz(i, j) = std::cos(theta);
    }
  }
  const auto s = pseudospin_from_raw(axis, axis, rx, ry, rz, 0.0);
  const auto r = winding_number(s);
  CHECK(std::abs(r.signed_degree) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.coverings == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.quality < 1e-3);

  // Uniformly tilted rim cannot be compactified to a point.
  MatXd tx = MatXd::Zero(128, 128), tz = MatXd::Zero(128, 128);
  for (Eigen::Index i = 0; i < 128; ++i)
    for (Eigen::Index j = 0; j < 128; ++j) {
      tx(i, j) = std::cos(axis.x(i));
      tz(i, j) = std::sin(axis.x(i));
    }
  CHECK_THROWS_AS(winding_number(pseudospin_from_raw(axis, axis, tx, MatXd::Zero(128, 128), tz, 0.0)),
                  DomainError);

  const Vec3 a = Vec3::UnitX(), b = Vec3::UnitY(), c = Vec3::UnitZ();
  CHECK(spherical_triangle_area(a, b, c) == doctest::Approx(pi / 2));
  CHECK(spherical_triangle_area(a, c, b) == doctest::Approx(-pi / 2));
}

TEST_CASE("landau level coverings and their robustness") {
  const JCParams jp{1.0, 0.5, 16};
  const auto axis = make_grid(128, -7.0, 7.0);
  for (int n = 1; n <= 3; ++n) {
    const auto s = level_field(n, jp, axis);
    const auto r = winding_number(s, pi / 2);
    MESSAGE("level " << n << " coverings " << r.coverings << " signed " << r.signed_degree);
    CHECK(std::abs(r.coverings - n) < 0.05);

    const MatXd phi = s.polar_angle();
    for (real gt : {0.5, 1.0, 2.0}) {
      const auto d = dephasing_map(s, gt);
      CHECK(std::abs(winding_number(d, pi / 2).coverings - n) < 0.05);
      CHECK((d.polar_angle().array() == phi.array()).all());
    }
  }

  const auto s0 = level_field(1, jp, axis);
  CHECK((dephasing_map(s0, 0.0).sx - s0.sx).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("noise channels") {
  const JCParams jp{1.0, 0.5, 8};
  const auto rho = SpinOscillatorState::pure(8, landau_state_vector(2, 1, jp));
  CHECK(rho.is_valid());
  CHECK((amplitude_damping(rho, 0.0).rho() - rho.rho()).norm() == 0.0);
  for (real p : {0.1, 0.5, 1.0}) {
    const auto out = amplitude_damping(rho, p);
    CHECK(std::abs(out.rho().trace() - cplx(1.0)) < 1e-12);
    CHECK(out.is_valid());
  }
  VecXc up3 = VecXc::Zero(18);
  up3[3] = 1.0;
  const auto decayed = amplitude_damping(SpinOscillatorState::pure(8, up3), 1.0);
  CHECK(std::abs(decayed.rho()(9 + 3, 9 + 3) - cplx(1.0)) < 1e-15);
  CHECK_THROWS_AS(amplitude_damping(rho, 1.5), DomainError);

  // Dephasing channel on the state equals the map on the pseudospin field.
  const auto axis = make_grid(64, -6.0, 6.0);
  const auto pure_field = pseudospin_field(wigner_from_density(rho, axis, axis), 1e-12);
  const auto channel = pseudospin_field(wigner_from_density(dephasing_channel(rho, 1.0), axis, axis), 1e-12);
  const auto mapped = dephasing_map(pure_field, 1.0);
  real worst = 0.0;
  for (Eigen::Index i = 0; i < 64; ++i)
    for (Eigen::Index j = 0; j < 64; ++j)
      if (mapped.valid(i, j) && channel.valid(i, j))
        worst = std::max(worst, (mapped.at(i, j) - channel.at(i, j)).norm());
  CHECK(worst < 1e-6);

  const auto fine = make_grid(128, -7.0, 7.0);
  const real undamped = winding_number(pseudospin_field(wigner_from_density(rho, fine, fine), 1e-12), pi / 2).coverings;
  for (real p : {0.1, 0.3, 0.5}) {
    const auto damped = amplitude_damping(rho, p);
    const auto r = winding_number(pseudospin_field(wigner_from_density(damped, fine, fine), 1e-12), pi / 2);
    CHECK(std::abs(r.coverings - undamped) < 0.05);
  }
}
