#ifndef DIRACSIM_SPLIT_STEP_HPP
#define DIRACSIM_SPLIT_STEP_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "diracsim/field.hpp"
#include "diracsim/pauli.hpp"

namespace diracsim {

template <int C>
using SpinMatrix = Eigen::Matrix<cplx, C, C>;

/// Per-momentum unitary table, indexed like Grid1D::momenta().
template <int C>
using KineticPhase = std::vector<SpinMatrix<C>>;

/// Per-position unitary table for spin-dependent potentials.
template <int C>
using MatrixPotentialPhase = std::vector<SpinMatrix<C>>;

/// Precomputed propagator pieces for e^{-iV dt/2} F^-1 e^{-iK dt} F e^{-iV dt/2}.
/// `half_potential` holds e^{-i V(x_j) dt/2} for a spin-independent V.
template <int C>
struct SplitPropagator {
  Grid1D grid;
  real dt = 0.0;
  KineticPhase<C> kinetic;
  VecXc half_potential;
};

/// Builds the kinetic table exp(-i dt K(p_k)) for a Hermitian spin-matrix
/// valued kinetic symbol K(p).
template <int C, typename KineticFn>
KineticPhase<C> kinetic_phase_table(const Grid1D& grid, real dt, KineticFn&& symbol) {
  KineticPhase<C> table(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const SpinMatrix<C> h = symbol(grid.p(k));
    table[k] = hermitian_exponential(h, dt, 1e-10);
  }
  return table;
}

/// e^{-i V(x_j) theta} for a scalar potential.
template <typename PotentialFn>
VecXc potential_phase_table(const Grid1D& grid, real theta, PotentialFn&& potential) {
  VecXc out(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = std::exp(cplx(0.0, -theta * potential(grid.x(j))));
  }
  return out;
}

namespace detail {

template <int C, typename Amps>
void apply_matrix_rows(Amps& a, const std::vector<SpinMatrix<C>>& table) {
  Eigen::Matrix<cplx, C, 1> v;
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    v = a.row(k).transpose();
    a.row(k) = (table[static_cast<std::size_t>(k)] * v).transpose();
  }
}

template <int C>
void check_sizes(const Grid1D& grid, std::size_t kinetic, std::size_t potential) {
  if (kinetic != grid.size() || potential != grid.size()) {
    throw UsageError("strang_step: phase tables do not match the grid size");
  }
}

}  // namespace detail

/// One Strang step with a scalar potential. `half_potential` = e^{-iV dt/2},
/// `kinetic` = e^{-iK dt} per momentum mode.
template <int C>
SpinorField<C> strang_step(const SpinorField<C>& psi, const KineticPhase<C>& kinetic,
                           const VecXc& half_potential) {
  if (psi.representation() != Representation::position) {
    throw UsageError("strang_step: position representation required");
  }
  detail::check_sizes<C>(psi.grid(), kinetic.size(),
                         static_cast<std::size_t>(half_potential.size()));
  auto a = psi.amplitudes();
  a = half_potential.asDiagonal() * a;
  fft::transform_columns(a, fft::Direction::forward);
  detail::apply_matrix_rows<C>(a, kinetic);
  fft::transform_columns(a, fft::Direction::backward);
  a = half_potential.asDiagonal() * a;
  return SpinorField<C>(psi.grid(), std::move(a));
}

/// One Strang step with a spin-dependent potential phase per position.
template <int C>
SpinorField<C> strang_step(const SpinorField<C>& psi, const KineticPhase<C>& kinetic,
                           const MatrixPotentialPhase<C>& half_potential) {
  if (psi.representation() != Representation::position) {
    throw UsageError("strang_step: position representation required");
  }
  detail::check_sizes<C>(psi.grid(), kinetic.size(), half_potential.size());
  auto a = psi.amplitudes();
  detail::apply_matrix_rows<C>(a, half_potential);
  fft::transform_columns(a, fft::Direction::forward);
  detail::apply_matrix_rows<C>(a, kinetic);
  fft::transform_columns(a, fft::Direction::backward);
  detail::apply_matrix_rows<C>(a, half_potential);
  return SpinorField<C>(psi.grid(), std::move(a));
}

template <int C>
SpinorField<C> strang_step(const SpinorField<C>& psi, const SplitPropagator<C>& prop) {
  return strang_step(psi, prop.kinetic, prop.half_potential);
}

/// Runs `steps` Strang steps. Adjacent half-potential factors are fused, which
/// is algebraically identical to repeated strang_step. `observer(step, field)`
/// is invoked after every `observe_every` steps (and at the end) when set.
template <int C>
SpinorField<C> evolve_split(
    const SpinorField<C>& psi, const SplitPropagator<C>& prop, std::size_t steps,
    const std::function<void(std::size_t, const SpinorField<C>&)>& observer = {},
    std::size_t observe_every = 0) {
  if (psi.representation() != Representation::position) {
    throw UsageError("evolve_split: position representation required");
  }
  detail::check_sizes<C>(psi.grid(), prop.kinetic.size(),
                         static_cast<std::size_t>(prop.half_potential.size()));
  if (steps == 0) return psi;
  const VecXc full_potential = prop.half_potential.cwiseProduct(prop.half_potential);
  auto a = psi.amplitudes();
  a = prop.half_potential.asDiagonal() * a;
  for (std::size_t s = 1; s <= steps; ++s) {
    fft::transform_columns(a, fft::Direction::forward);
    detail::apply_matrix_rows<C>(a, prop.kinetic);
    fft::transform_columns(a, fft::Direction::backward);
    const bool observe =
        observer && (s == steps || (observe_every > 0 && s % observe_every == 0));
    if (s == steps || observe) {
      a = prop.half_potential.asDiagonal() * a;
      if (observe) observer(s, SpinorField<C>(psi.grid(), a));
      if (s != steps) a = prop.half_potential.asDiagonal() * a;
    } else {
      a = full_potential.asDiagonal() * a;
    }
  }
  return SpinorField<C>(psi.grid(), std::move(a));
}

/// Default step rule dt <= 0.1 / E(p_max), E(p) = sqrt(c^2 p^2 + m^2 c^4).
real default_time_step(const Grid1D& grid, real c, real m);

/// Number of steps of size close to dt_max that exactly spans t.
std::size_t steps_for(real t, real dt_max);

}  // namespace diracsim

#endif  // DIRACSIM_SPLIT_STEP_HPP
