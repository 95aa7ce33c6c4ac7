#include "diracsim/dirac.hpp"

#include <algorithm>
#include <cmath>

namespace diracsim {

void SimParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("SimParams: c must be positive");
  if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("SimParams: m must be non-negative");
  if (std::abs(mass_axis.norm() - 1.0) > 1e-12) {
    throw ConfigError("SimParams: mass_axis must be a unit vector");
  }
  if (std::abs(mass_axis.x()) > 1e-12) {
    throw ConfigError("SimParams: mass_axis must anticommute with sigma_x (lie in the y-z plane)");
  }
}

PauliCoeffs dirac_symbol_1p1(real p, const SimParams& params) {
  const real mc2 = params.rest_energy();
  return {0.0, params.c * p + mc2 * params.mass_axis.x(), mc2 * params.mass_axis.y(),
          mc2 * params.mass_axis.z()};
}

KineticPhase<2> dirac_kinetic_phase_1p1(const Grid1D& grid, const SimParams& params, real dt) {
  KineticPhase<2> table(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table[k] = pauli_exponential(dirac_symbol_1p1(grid.p(k), params), dt);
  }
  return table;
}

SpinorField1D evolve_free(const SpinorField1D& psi0, const SimParams& params, real t) {
  params.validate();
  if (t == 0.0) return psi0;
  auto mom = to_momentum(psi0);
  auto a = mom.amplitudes();
  detail::apply_matrix_rows<2>(a, dirac_kinetic_phase_1p1(psi0.grid(), params, t));
  return to_position(SpinorField1D(psi0.grid(), std::move(a), Representation::momentum));
}

Mat2c positive_energy_projector(real p, const SimParams& params) {
  const PauliCoeffs h = dirac_symbol_1p1(p, params);
  Vec3 n = h.vector();
  const real e = n.norm();
  n = e > 0.0 ? Vec3(n / e) : Vec3::UnitX();
  const PauliCoeffs half{0.5, 0.5 * n.x(), 0.5 * n.y(), 0.5 * n.z()};
  return half.matrix();
}

SpinorField1D project_positive_energy(const SpinorField1D& psi, const SimParams& params) {
  const bool in_position = psi.representation() == Representation::position;
  auto mom = in_position ? to_momentum(psi) : psi;
  auto a = mom.amplitudes();
  std::vector<Mat2c> table(psi.grid().size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    table[k] = positive_energy_projector(psi.grid().p(k), params);
  }
  detail::apply_matrix_rows<2>(a, table);
  SpinorField1D out(psi.grid(), std::move(a), Representation::momentum);
  return in_position ? to_position(out) : out;
}

std::vector<real> mean_position_trace(const SpinorField1D& psi0, const SimParams& params,
                                      std::span<const real> times) {
  if (!std::is_sorted(times.begin(), times.end())) {
    throw UsageError("mean_position_trace: times must be ascending");
  }
  params.validate();
  const auto mom0 = to_momentum(psi0);
  const Grid1D& grid = psi0.grid();
  std::vector<real> out;
  out.reserve(times.size());
  for (real t : times) {
    auto a = mom0.amplitudes();
    detail::apply_matrix_rows<2>(a, dirac_kinetic_phase_1p1(grid, params, t));
    const auto psi = to_position(SpinorField1D(grid, std::move(a), Representation::momentum));
    const VecXd rho = psi.density();
    check_boundary_leak(grid, rho, 1e-6, "mean_position_trace");
    out.push_back(grid.positions().dot(rho) * grid.dx());
  }
  return out;
}

real zb_frequency_estimate(real p0, const SimParams& params) {
  return 2.0 * params.energy(p0);
}

real zb_amplitude_estimate(real p0, const SimParams& params) {
  if (!(params.m > 0.0)) throw DomainError("zb_amplitude_estimate: requires m > 0");
  const real ratio = params.rest_energy() / params.energy(p0);
  return ratio * ratio / (2.0 * params.m * params.c);
}

namespace {

// Least-squares fit of series against the given basis columns.
VecXd least_squares(const MatXd& basis, const VecXd& y) {
  return basis.colPivHouseholderQr().solve(y);
}

}  // namespace

ZbMeasurement measure_zb_from_trace(std::span<const real> series, std::span<const real> times) {
  const auto n = series.size();
  if (n != times.size()) throw UsageError("measure_zb_from_trace: length mismatch");
  if (n < 64) throw UsageError("measure_zb_from_trace: need at least 64 samples");
  const real dt = (times.back() - times.front()) / static_cast<real>(n - 1);
  if (!(dt > 0.0)) throw UsageError("measure_zb_from_trace: times must increase");
  for (std::size_t i = 0; i < n; ++i) {
    const real expected = times.front() + static_cast<real>(i) * dt;
    if (std::abs(times[i] - expected) > 1e-6 * dt) {
      throw UsageError("measure_zb_from_trace: times must be uniformly spaced");
    }
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const Eigen::Map<const VecXd> y(series.data(), rows);
  const Eigen::Map<const VecXd> t(times.data(), rows);

  MatXd drift(rows, 2);
  drift.col(0).setOnes();
  drift.col(1) = t;
  const VecXd residual = y - drift * least_squares(drift, y);

  const real scale = 1.0 + y.cwiseAbs().maxCoeff();
  const real rms = std::sqrt(residual.squaredNorm() / static_cast<real>(n));
  if (rms < 1e-9 * scale) throw NoOscillationError();

  std::size_t padded = 1;
  while (padded < 16 * n) padded <<= 1;
  VecXc spec = VecXc::Zero(static_cast<Eigen::Index>(padded));
  spec.head(rows) = residual.cast<cplx>();
  fft::transform(spec.data(), padded, 1, 1, padded, fft::Direction::forward);
  const std::size_t half = padded / 2;
  VecXd mag(static_cast<Eigen::Index>(half));
  for (std::size_t k = 0; k < half; ++k) mag[static_cast<Eigen::Index>(k)] = std::abs(spec[static_cast<Eigen::Index>(k)]);

  std::size_t peak = 1;
  for (std::size_t k = 1; k < half; ++k) {
    if (mag[static_cast<Eigen::Index>(k)] > mag[static_cast<Eigen::Index>(peak)]) peak = k;
  }
  std::vector<real> sorted(mag.data() + 1, mag.data() + half);
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const real floor = sorted[sorted.size() / 2];
  if (mag[static_cast<Eigen::Index>(peak)] < 3.0 * floor) throw NoOscillationError();

  real offset = 0.0;
  if (peak + 1 < half) {
    const real a = std::log(mag[static_cast<Eigen::Index>(peak - 1)] + 1e-300);
    const real b = std::log(mag[static_cast<Eigen::Index>(peak)] + 1e-300);
    const real c = std::log(mag[static_cast<Eigen::Index>(peak + 1)] + 1e-300);
    const real denom = a - 2.0 * b + c;
    if (denom < 0.0) offset = 0.5 * (a - c) / denom;
  }
  const real omega =
      2.0 * pi * (static_cast<real>(peak) + offset) / (static_cast<real>(padded) * dt);

  const real span = times.back() - times.front();
  if (span * omega / (2.0 * pi) < 5.0) {
    throw UsageError("measure_zb_from_trace: trace spans fewer than 5 periods");
  }

  MatXd full(rows, 4);
  full.col(0).setOnes();
  full.col(1) = t;
  full.col(2) = (omega * t.array()).cos().matrix();
  full.col(3) = (omega * t.array()).sin().matrix();
  const VecXd coef = least_squares(full, y);
  const VecXd detrended = y - coef[0] * VecXd::Ones(rows) - coef[1] * t;
  const real centre = detrended.mean();
  return {omega, (detrended.array() - centre).abs().maxCoeff()};
}

Mat4c dirac_hamiltonian_3p1(const Vec3& p, const SimParams& params) {
  const Mat2c sp = params.c * (p.x() * sigma_x() + p.y() * sigma_y() + p.z() * sigma_z());
  const Mat2c mass = params.rest_energy() * I * Mat2c::Identity();
  Mat4c h = Mat4c::Zero();
  h.block<2, 2>(0, 2) = sp - mass;
  h.block<2, 2>(2, 0) = sp + mass;
  return h;
}

Mat4c dirac_velocity_3p1(int axis, const SimParams& params) {
  const Mat2c s = axis == 0 ? sigma_x() : axis == 1 ? sigma_y() : sigma_z();
  Mat4c v = Mat4c::Zero();
  v.block<2, 2>(0, 2) = params.c * s;
  v.block<2, 2>(2, 0) = params.c * s;
  return v;
}

FourSpinor evolve_free_3p1_mode(const FourSpinor& s, const Vec3& p, const SimParams& params,
                                real t) {
  params.validate();
  if (t == 0.0) return s;
  return matrix_exponential_4(dirac_hamiltonian_3p1(p, params), t) * s;
}

}  // namespace diracsim
