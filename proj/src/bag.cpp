#include "diracsim/bag.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <limits>

#include "diracsim/pauli.hpp"
#include "diracsim/split_step.hpp"

namespace diracsim {

namespace {

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat4c sigma_on_1(const Mat2c& s) { return kron(s, Mat2c::Identity()); }
Mat4c sigma_on_3(const Mat2c& s) { return kron(Mat2c::Identity(), s); }

void require_position(const FourSpinorField& psi, const char* what) {
  if (psi.representation() != Representation::position) {
    throw UsageError(std::string(what) + ": position representation required");
  }
}

}  // namespace

void BagParams::validate() const {
  base.validate();
  if (!(V0 >= 0.0) || !std::isfinite(V0)) throw ConfigError("BagParams: V0 must be non-negative");
  if (!std::isfinite(P_cm)) throw ConfigError("BagParams: P_cm must be finite");
}

real BagParams::tunneling_radius() const {
  if (V0 == 0.0) return std::numeric_limits<real>::infinity();
  return std::sqrt(2.0 * base.rest_energy() / V0);
}

Mat4c bag_spin_kinetic_block(real p_r, const BagParams& bp) {
  const real c = bp.base.c;
  const Mat4c sx1 = sigma_on_1(sigma_x()), sx3 = sigma_on_3(sigma_x());
  const Mat4c sy1 = sigma_on_1(sigma_y()), sy3 = sigma_on_3(sigma_y());
  return c * p_r * (sx1 - sx3) + 0.5 * c * bp.P_cm * (sx1 + sx3) +
         bp.base.rest_energy() * (sy1 + sy3);
}

SplitPropagator<4> bag_propagator(const Grid1D& grid, const BagParams& bp, real dt) {
  bp.validate();
  SplitPropagator<4> prop;
  prop.grid = grid;
  prop.dt = dt;
  prop.kinetic =
      kinetic_phase_table<4>(grid, dt, [&](real p) { return bag_spin_kinetic_block(p, bp); });
  prop.half_potential =
      potential_phase_table(grid, 0.5 * dt, [&](real x) { return bp.V0 * x * x; });
  return prop;
}

Mat4c pi_operator() { return 0.5 * (sigma_on_1(sigma_x()) - sigma_on_3(sigma_x())); }

FourSpinorField prepare_initial(real x0, real sigma, real p_r0, int pi_sign, const Grid1D& grid) {
  if (pi_sign != 1 && pi_sign != -1) {
    throw DomainError("prepare_initial: only Pi = +1 or -1 eigenstates are supported");
  }
  if (!(sigma > 0.0)) throw ConfigError("prepare_initial: sigma must be positive");
  const real s = static_cast<real>(pi_sign);
  const Vec2c a(1.0, s), b(1.0, -s);
  Vec4c spinor;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) spinor[2 * i + j] = a[i] * b[j] * 0.5;
  const VecXc env = gaussian_packet(grid, x0, sigma, p_r0);
  FourSpinorField::Amplitudes amps(env.size(), 4);
  for (int k = 0; k < 4; ++k) amps.col(k) = env * spinor[k];
  return FourSpinorField(grid, std::move(amps)).normalized();
}

BagRun evolve_bag_series(const FourSpinorField& psi0, const BagParams& bp, real dt, real t,
                         const BagRunOptions& options) {
  bp.validate();
  require_position(psi0, "evolve_bag");
  if (!(dt > 0.0)) throw ConfigError("evolve_bag: dt must be positive");
  if (!(t >= 0.0)) throw ConfigError("evolve_bag: t must be non-negative");
  const auto& grid = psi0.grid();
  const std::size_t steps = steps_for(t, dt);
  const real h = steps > 0 ? t / static_cast<real>(steps) : dt;
  const auto prop = bag_propagator(grid, bp, h);

  const bool absorbing = std::isfinite(options.absorber_start);
  VecXd mask = VecXd::Ones(static_cast<Eigen::Index>(grid.size()));
  if (absorbing) {
    const real edge = std::min(-grid.x_min(), grid.x(grid.size() - 1));
    if (!(options.absorber_start > 0.0) || options.absorber_start >= edge) {
      throw ConfigError("evolve_bag: absorber_start must lie inside the box");
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const real d = (std::abs(grid.x(j)) - options.absorber_start) / (edge - options.absorber_start);
      if (d > 0.0) {
        mask[static_cast<Eigen::Index>(j)] = std::pow(std::cos(0.5 * pi * std::min(d, 1.0)), 0.125);
      }
    }
  }

  BagRun run;
  real absorbed = 0.0;
  auto record = [&](std::size_t step, const FourSpinorField& f) {
    run.times.push_back(h * static_cast<real>(step));
    run.densities.push_back(f.density());
    run.pi_values.push_back(pi_expectation(f));
    run.energies.push_back(bag_energy(f, bp));
    run.norms.push_back(f.norm());
    run.absorbed.push_back(absorbed);
  };
  record(0, psi0);

  const std::size_t leak_every = std::max<std::size_t>(1, steps / 10);
  auto a = psi0.amplitudes();
  for (std::size_t s = 1; s <= steps; ++s) {
    a = prop.half_potential.asDiagonal() * a;
    fft::transform_columns(a, fft::Direction::forward);
    detail::apply_matrix_rows<4>(a, prop.kinetic);
    fft::transform_columns(a, fft::Direction::backward);
    a = prop.half_potential.asDiagonal() * a;
    if (absorbing) {
      const real before = a.squaredNorm();
      a = mask.cast<cplx>().asDiagonal() * a;
      absorbed += (before - a.squaredNorm()) * grid.dx();
    }
    const bool snapshot = options.snapshot_every > 0 &&
                          (s % options.snapshot_every == 0 || s == steps);
    if (snapshot || (!absorbing && (s % leak_every == 0 || s == steps))) {
      FourSpinorField f(grid, a);
      if (!absorbing) check_boundary_leak(grid, f.density(), 1e-6, "evolve_bag");
      if (snapshot) record(s, f);
    }
  }
  run.final_state = FourSpinorField(grid, std::move(a));
  run.final_absorbed = absorbed;
  return run;
}

FourSpinorField evolve_bag(const FourSpinorField& psi0, const BagParams& bp, real dt, real t) {
  return evolve_bag_series(psi0, bp, dt, t).final_state;
}

real klein_tunneling_fraction(const FourSpinorField& psi, const BagParams& bp) {
  require_position(psi, "klein_tunneling_fraction");
  const real r = bp.tunneling_radius();
  const VecXd rho = psi.density();
  const auto& g = psi.grid();
  real outside = 0.0, total = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const real w = rho[static_cast<Eigen::Index>(j)];
    total += w;
    if (std::abs(g.x(j)) > r) outside += w;
  }
  return total > 0.0 ? std::clamp(outside / total, 0.0, 1.0) : 0.0;
}

real klein_tunneling_fraction(const BagRun& run, const BagParams& bp) {
  const auto& f = run.final_state;
  const real inside_total = f.norm();
  const real outside = klein_tunneling_fraction(f, bp) * inside_total;
  const real total = inside_total + run.final_absorbed;
  return total > 0.0 ? std::clamp((outside + run.final_absorbed) / total, 0.0, 1.0) : 0.0;
}

real pi_expectation(const FourSpinorField& psi) {
  const auto& a = psi.amplitudes();
  const Mat4c pi = pi_operator();
  const real n = a.squaredNorm();
  if (!(n > 0.0)) throw DomainError("pi_expectation: zero field");
  return (a * pi.transpose()).cwiseProduct(a.conjugate()).sum().real() / n;
}

real bag_energy(const FourSpinorField& psi, const BagParams& bp) {
  require_position(psi, "bag_energy");
  const auto& g = psi.grid();
  const real n = psi.norm();
  if (!(n > 0.0)) throw DomainError("bag_energy: zero field");
  real potential = 0.0;
  const VecXd rho = psi.density();
  for (std::size_t j = 0; j < g.size(); ++j) {
    potential += bp.V0 * g.x(j) * g.x(j) * rho[static_cast<Eigen::Index>(j)];
  }
  const auto mom = to_momentum(psi).amplitudes();
  real kinetic = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec4c v = mom.row(static_cast<Eigen::Index>(k)).transpose();
    kinetic += (v.adjoint() * bag_spin_kinetic_block(g.p(k), bp) * v)(0).real();
  }
  return (kinetic + potential) * g.dx() / n;
}

MatXd density_trace(const BagRun& run) {
  if (run.densities.empty()) return {};
  MatXd out(static_cast<Eigen::Index>(run.densities.size()), run.densities.front().size());
  for (std::size_t r = 0; r < run.densities.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = run.densities[r].transpose();
  }
  return out;
}

std::size_t count_local_maxima(const VecXd& density, real floor) {
  if (density.size() < 3) return 0;
  const real cut = floor * density.maxCoeff();
  std::size_t count = 0;
  for (Eigen::Index j = 1; j + 1 < density.size(); ++j) {
    if (density[j] > cut && density[j] > density[j - 1] && density[j] >= density[j + 1]) ++count;
  }
  return count;
}

}  // namespace diracsim
