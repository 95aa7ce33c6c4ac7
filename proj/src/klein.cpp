#include "diracsim/klein.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "diracsim/split_step.hpp"

namespace diracsim {

namespace {

// Runs body(i) for i in [0, n) on a few worker threads. The first exception
// thrown is rethrown on the caller.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (error) std::rethrow_exception(error);
}

void require_z_mass(const KleinParams& kp) {
  if ((kp.base.mass_axis - Vec3::UnitZ()).norm() > 1e-12) {
    throw ConfigError("klein 2+1: the mass term must be m c^2 sigma_z");
  }
}

}  // namespace

void KleinParams::validate() const {
  base.validate();
  if (!std::isfinite(alpha) || alpha < 0.0) throw ConfigError("klein: alpha must be non-negative");
  if (!std::isfinite(x_center)) throw ConfigError("klein: x_center must be finite");
}

EffectiveMass effective_mass(real p_y, const SimParams& params) {
  const real mc2 = params.rest_energy();
  const real energy = std::hypot(params.c * p_y, mc2);
  EffectiveMass em;
  em.m_tilde = energy / (params.c * params.c);
  if (energy == 0.0) {
    em.degenerate = true;
    return em;
  }
  em.n_y = params.c * p_y / energy;
  em.n_z = mc2 / energy;
  return em;
}

SimParams slice_params(const EffectiveMass& em, real c) {
  return SimParams{c, em.m_tilde, Vec3(0.0, em.n_y, em.n_z)};
}

real transmission_formula(const EffectiveMass& em, const KleinParams& kp) {
  kp.validate();
  const real gap = em.m_tilde * kp.base.c * kp.base.c;
  if (kp.alpha == 0.0) return gap == 0.0 ? 1.0 : 0.0;
  return std::exp(-pi * gap * gap / (kp.base.c * kp.alpha));
}

real group_velocity(real p_x, real p_y, const SimParams& params) {
  const EffectiveMass em = effective_mass(p_y, params);
  const real c = params.c;
  const real gap = em.m_tilde * c * c;
  const real energy = std::hypot(c * p_x, gap);
  if (energy == 0.0) return 0.0;
  return c * c * p_x / energy;
}

KleinSliceEvolver::KleinSliceEvolver(const SpinorField1D& psi0, const KleinParams& kp,
                                     const EffectiveMass& em, real dt)
    : grid_(psi0.grid()), kp_(kp), slice_(slice_params(em, kp.base.c)), dt_(dt) {
  kp_.validate();
  if (!(dt > 0.0)) throw ConfigError("klein: dt must be positive");
  if (psi0.representation() != Representation::position) {
    throw UsageError("klein: position representation required");
  }
  chi_ = to_momentum(psi0).amplitudes();
}

void KleinSliceEvolver::advance_to(real t) {
  if (t < time_) throw UsageError("klein: cannot advance backwards in time");
  if (t == time_) return;
  const std::size_t steps = steps_for(t - time_, dt_);
  const real h = (t - time_) / static_cast<real>(steps);
  const std::size_t check_every = std::max<std::size_t>(1, steps / 10);
  for (std::size_t s = 1; s <= steps; ++s) {
    const real q_mid = carrier_ - 0.5 * kp_.alpha * h;
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      const Mat2c u = pauli_exponential(dirac_symbol_1p1(grid_.p(k) + q_mid, slice_), h);
      const Vec2c v = u * chi_.row(row).transpose();
      chi_.row(row) = v.transpose();
    }
    carrier_ -= kp_.alpha * h;
    phase_ += kp_.alpha * kp_.x_center * h;
    if (s % check_every == 0 || s == steps) {
      check_boundary_leak(grid_, density(), 1e-6, "evolve_klein_1p1");
    }
  }
  time_ = t;
}

SpinorField1D KleinSliceEvolver::field() const {
  auto a = chi_;
  fft::transform_columns(a, fft::Direction::backward);
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    a.row(static_cast<Eigen::Index>(j)) *= std::exp(cplx(0.0, phase_ + carrier_ * grid_.x(j)));
  }
  return SpinorField1D(grid_, std::move(a));
}

VecXd KleinSliceEvolver::density() const {
  auto a = chi_;
  fft::transform_columns(a, fft::Direction::backward);
  return a.rowwise().squaredNorm();
}

real KleinSliceEvolver::norm() const { return chi_.squaredNorm() * grid_.dx(); }

namespace {

real frame_energy(const Grid1D& grid, const SpinorField1D::Amplitudes& chi, real carrier,
                  const SimParams& slice, const KleinParams& kp) {
  real kinetic = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec2c v = chi.row(static_cast<Eigen::Index>(k)).transpose();
    const Mat2c h = dirac_symbol_1p1(grid.p(k) + carrier, slice).matrix();
    kinetic += std::real(v.dot(h * v));
  }
  auto a = chi;
  fft::transform_columns(a, fft::Direction::backward);
  const VecXd rho = a.rowwise().squaredNorm();
  real potential = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    potential += kp.potential(grid.x(j)) * rho[static_cast<Eigen::Index>(j)];
  }
  return (kinetic + potential) * grid.dx();
}

}  // namespace

real KleinSliceEvolver::energy() const { return frame_energy(grid_, chi_, carrier_, slice_, kp_); }

real klein_energy(const SpinorField1D& psi, const KleinParams& kp, const EffectiveMass& em) {
  return frame_energy(psi.grid(), to_momentum(psi).amplitudes(), 0.0,
                      slice_params(em, kp.base.c), kp);
}

SpinorField1D evolve_klein_1p1(const SpinorField1D& psi0, const KleinParams& kp,
                               const EffectiveMass& em, real dt, real t) {
  KleinSliceEvolver ev(psi0, kp, em, dt);
  ev.advance_to(t);
  return ev.field();
}

SpinorField1D evolve_klein_1p1(const SpinorField1D& psi0, const KleinParams& kp, real dt,
                               real t) {
  const real m = kp.base.m;
  const Vec3 n = kp.base.mass_axis;
  EffectiveMass em{m, n.y(), n.z(), m == 0.0};
  return evolve_klein_1p1(psi0, kp, em, dt, t);
}

SpinorField1D evolve_klein_1p1_position_space(const SpinorField1D& psi0, const KleinParams& kp,
                                              const EffectiveMass& em, real dt, real t) {
  kp.validate();
  if (!(dt > 0.0)) throw ConfigError("klein: dt must be positive");
  const Grid1D& grid = psi0.grid();
  const std::size_t steps = steps_for(t, dt);
  const real h = t / static_cast<real>(steps);
  const SimParams slice = slice_params(em, kp.base.c);
  SplitPropagator<2> prop{grid, h, dirac_kinetic_phase_1p1(grid, slice, h),
                          potential_phase_table(grid, h / 2,
                                                [&](real x) { return kp.potential(x); })};
  auto out = evolve_split(psi0, prop, steps);
  check_boundary_leak(grid, out.density(), 1e-6, "evolve_klein_1p1_position_space");
  return out;
}

real measure_transmission(const Grid1D& grid, const VecXd& density, real x_split, real window) {
  real total = 0.0, beyond = 0.0, near = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const real rho = density[static_cast<Eigen::Index>(j)] * grid.dx();
    const real x = grid.x(j);
    total += rho;
    if (x > x_split) beyond += rho;
    if (std::abs(x - x_split) < window) near += rho;
  }
  if (!(total > 0.0)) throw DomainError("measure_transmission: zero density");
  if (near / total > 1e-2) {
    throw InconclusiveError("measure_transmission: lobes overlap the split window");
  }
  return beyond / total;
}

real measure_transmission(const SpinorField1D& psi, real x_split, real window) {
  return measure_transmission(psi.grid(), psi.density(), x_split, window);
}

real transmission_split(const KleinParams& kp, real energy, real sigma_x) {
  if (!(kp.alpha > 0.0)) throw DomainError("transmission_split: requires alpha > 0");
  return kp.x_center + energy / kp.alpha + 3.0 * sigma_x;
}

real SpinorSlices2D::norm() const { return slice_norms().sum(); }

VecXd SpinorSlices2D::slice_norms() const {
  VecXd out(static_cast<Eigen::Index>(slices.size()));
  for (std::size_t k = 0; k < slices.size(); ++k) {
    out[static_cast<Eigen::Index>(k)] = slices[k].norm();
  }
  return out;
}

MatXd SpinorSlices2D::density() const {
  MatXd out(static_cast<Eigen::Index>(x_grid.size()), static_cast<Eigen::Index>(slices.size()));
  for (std::size_t k = 0; k < slices.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = slices[k].density();
  }
  return out;
}

real Field2D::norm() const {
  return (up.squaredNorm() + down.squaredNorm()) * x_grid.dx() * y_grid.dx();
}

MatXd Field2D::density() const { return up.cwiseAbs2() + down.cwiseAbs2(); }

VecXd Field2D::x_marginal() const { return density().rowwise().sum() * y_grid.dx(); }

real l2_distance(const Field2D& a, const Field2D& b) {
  if (!(a.x_grid == b.x_grid) || !(a.y_grid == b.y_grid)) {
    throw UsageError("l2_distance: fields live on different grids");
  }
  return std::sqrt(((a.up - b.up).squaredNorm() + (a.down - b.down).squaredNorm()) *
                   a.x_grid.dx() * a.y_grid.dx());
}

Field2D reconstruct_position_space(const SpinorSlices2D& psi) {
  const auto nx = static_cast<Eigen::Index>(psi.x_grid.size());
  const auto ny = static_cast<Eigen::Index>(psi.y_grid.size());
  if (psi.slices.size() != psi.y_grid.size()) {
    throw UsageError("reconstruct_position_space: slice count must match the y grid");
  }
  Field2D out{psi.x_grid, psi.y_grid, MatXc(nx, ny), MatXc(nx, ny)};
  for (Eigen::Index k = 0; k < ny; ++k) {
    const auto& s = psi.slices[static_cast<std::size_t>(k)];
    if (!(s.grid() == psi.x_grid) || s.representation() != Representation::position) {
      throw UsageError("reconstruct_position_space: slices must share the x grid");
    }
    out.up.col(k) = s.amplitudes().col(0);
    out.down.col(k) = s.amplitudes().col(1);
  }
  fft::transform_rows(out.up, fft::Direction::backward);
  fft::transform_rows(out.down, fft::Direction::backward);
  const real scale = 1.0 / std::sqrt(psi.y_grid.dx());
  out.up *= scale;
  out.down *= scale;
  return out;
}

SpinorSlices2D decompose_transverse(const Field2D& psi) {
  MatXc up = psi.up, down = psi.down;
  fft::transform_rows(up, fft::Direction::forward);
  fft::transform_rows(down, fft::Direction::forward);
  const real scale = std::sqrt(psi.y_grid.dx());
  SpinorSlices2D out{psi.x_grid, psi.y_grid, {}};
  out.slices.reserve(psi.y_grid.size());
  for (Eigen::Index k = 0; k < up.cols(); ++k) {
    SpinorField1D::Amplitudes a(up.rows(), 2);
    a.col(0) = up.col(k) * scale;
    a.col(1) = down.col(k) * scale;
    out.slices.emplace_back(psi.x_grid, std::move(a));
  }
  return out;
}

std::vector<SpinorSlices2D> evolve_klein_2p1_snapshots(const SpinorSlices2D& psi0,
                                                       const KleinParams& kp, real dt,
                                                       std::span<const real> times) {
  kp.validate();
  require_z_mass(kp);
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw UsageError("evolve_klein_2p1: snapshot times must be ascending and non-negative");
  }
  std::vector<SpinorSlices2D> out(times.size(), SpinorSlices2D{psi0.x_grid, psi0.y_grid, {}});
  for (auto& snap : out) snap.slices.resize(psi0.slices.size());
  parallel_for(psi0.slices.size(), [&](std::size_t k) {
    KleinSliceEvolver ev(psi0.slices[k], kp, effective_mass(psi0.p_y(k), kp.base), dt);
    for (std::size_t i = 0; i < times.size(); ++i) {
      ev.advance_to(times[i]);
      out[i].slices[k] = ev.field();
    }
  });
  return out;
}

SpinorSlices2D evolve_klein_2p1_decomposed(const SpinorSlices2D& psi0, const KleinParams& kp,
                                           real dt, real t) {
  const real times[] = {t};
  return std::move(evolve_klein_2p1_snapshots(psi0, kp, dt, times).front());
}

Field2D evolve_klein_2p1_direct(const Field2D& psi0, const KleinParams& kp, real dt, real t) {
  kp.validate();
  require_z_mass(kp);
  if (!(dt > 0.0)) throw ConfigError("klein: dt must be positive");
  const std::size_t nx = psi0.x_grid.size(), ny = psi0.y_grid.size();
  if (nx > 512 || ny > 512) {
    throw NumericalGuardError("evolve_klein_2p1_direct: grid above 512 x 512 refused");
  }
  const std::size_t steps = steps_for(t, dt);
  const real h = t / static_cast<real>(steps);
  const real c = kp.base.c, mc2 = kp.base.rest_energy();

  std::vector<Mat2c> kinetic(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const PauliCoeffs sym{0.0, c * psi0.x_grid.p(i), c * psi0.y_grid.p(j), mc2};
      kinetic[i + nx * j] = pauli_exponential(sym, h);
    }
  }
  const VecXc half =
      potential_phase_table(psi0.x_grid, h / 2, [&](real x) { return kp.potential(x); });

  Field2D psi = psi0;
  for (std::size_t s = 0; s < steps; ++s) {
    psi.up = half.asDiagonal() * psi.up;
    psi.down = half.asDiagonal() * psi.down;
    for (MatXc* comp : {&psi.up, &psi.down}) {
      fft::transform_columns(*comp, fft::Direction::forward);
      fft::transform_rows(*comp, fft::Direction::forward);
    }
    for (std::size_t j = 0; j < ny; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const auto r = static_cast<Eigen::Index>(i), col = static_cast<Eigen::Index>(j);
        const Vec2c v = kinetic[i + nx * j] * Vec2c(psi.up(r, col), psi.down(r, col));
        psi.up(r, col) = v[0];
        psi.down(r, col) = v[1];
      }
    }
    for (MatXc* comp : {&psi.up, &psi.down}) {
      fft::transform_rows(*comp, fft::Direction::backward);
      fft::transform_columns(*comp, fft::Direction::backward);
    }
    psi.up = half.asDiagonal() * psi.up;
    psi.down = half.asDiagonal() * psi.down;
  }
  check_boundary_leak(psi.x_grid, psi.x_marginal(), 1e-6, "evolve_klein_2p1_direct");
  const VecXd y_marginal = psi.density().colwise().sum().transpose() * psi.x_grid.dx();
  check_boundary_leak(psi.y_grid, y_marginal, 1e-6, "evolve_klein_2p1_direct");
  return psi;
}

SpinorField1D make_klein_packet_1p1(const Grid1D& grid, const SimParams& slice, real x0,
                                    real sigma_x, real p_x0) {
  const Mat2c proj = positive_energy_projector(p_x0, slice);
  const Vec2c spin = proj.col(0).norm() >= proj.col(1).norm() ? Vec2c(proj.col(0))
                                                               : Vec2c(proj.col(1));
  const VecXc env = gaussian_packet(grid, x0, sigma_x, p_x0);
  SpinorField1D::Amplitudes a(env.size(), 2);
  a.col(0) = spin[0] * env;
  a.col(1) = spin[1] * env;
  return project_positive_energy(SpinorField1D(grid, std::move(a)), slice).normalized();
}

SpinorSlices2D make_klein_packet(const Grid1D& x_grid, const Grid1D& y_grid,
                                 const KleinParams& kp, const KleinPacketSpec& spec) {
  kp.validate();
  require_z_mass(kp);
  const std::size_t ny = y_grid.size();
  VecXd weight(static_cast<Eigen::Index>(ny));
  for (std::size_t k = 0; k < ny; ++k) {
    const real d = (y_grid.p(k) - spec.p_y_center) / spec.sigma_p_y;
    weight[static_cast<Eigen::Index>(k)] = spec.uniform_p_y ? 1.0 : std::exp(-0.5 * d * d);
  }
  weight /= weight.sum();

  // Phase that centres the transverse profile in the middle of the y box.
  const real shift = y_grid.center() - y_grid.x_min();
  SpinorSlices2D out{x_grid, y_grid, {}};
  out.slices.reserve(ny);
  for (std::size_t k = 0; k < ny; ++k) {
    const real p_y = y_grid.p(k);
    const auto slice = slice_params(effective_mass(p_y, kp.base), kp.base.c);
    const auto psi = make_klein_packet_1p1(x_grid, slice, spec.x0, spec.sigma_x, spec.p_x0);
    const cplx factor =
        std::sqrt(weight[static_cast<Eigen::Index>(k)]) * std::exp(cplx(0.0, -p_y * shift));
    out.slices.emplace_back(x_grid, psi.amplitudes() * factor);
  }
  return out;
}

LobeWidths lobe_widths(const Grid1D& grid, const VecXd& density, real x_split) {
  real m[2] = {0, 0}, s1[2] = {0, 0}, s2[2] = {0, 0};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const real x = grid.x(j);
    const real w = density[static_cast<Eigen::Index>(j)] * grid.dx();
    const int side = x > x_split ? 0 : 1;
    m[side] += w;
    s1[side] += w * x;
    s2[side] += w * x * x;
  }
  const auto width = [&](int side) {
    if (!(m[side] > 0.0)) return 0.0;
    const real mean = s1[side] / m[side];
    return std::sqrt(std::max(0.0, s2[side] / m[side] - mean * mean));
  };
  return {m[0], m[1], width(0), width(1)};
}

LobeWidths2D lobe_widths_2d(const Field2D& psi, real x_split) {
  LobeWidths2D out;
  const VecXd marginal = psi.x_marginal();
  out.x = lobe_widths(psi.x_grid, marginal, x_split);
  const MatXd rho = psi.density();
  const auto& xg = psi.x_grid;
  const auto& yg = psi.y_grid;
  VecXd right = VecXd::Zero(static_cast<Eigen::Index>(yg.size()));
  VecXd left = right;
  for (std::size_t i = 0; i < xg.size(); ++i) {
    if (xg.x(i) > x_split) {
      right += rho.row(static_cast<Eigen::Index>(i)).transpose();
    } else {
      left += rho.row(static_cast<Eigen::Index>(i)).transpose();
    }
  }
  auto width = [&](const VecXd& w) {
    const real mass = w.sum();
    if (!(mass > 0.0)) return 0.0;
    const real mean = yg.positions().dot(w) / mass;
    const real second = yg.positions().cwiseProduct(yg.positions()).dot(w) / mass;
    return std::sqrt(std::max(0.0, second - mean * mean));
  };
  out.transmitted_y_width = width(right);
  out.reflected_y_width = width(left);
  return out;
}

}  // namespace diracsim
