#ifndef DIRACSIM_DIRAC_HPP
#define DIRACSIM_DIRAC_HPP

#include <span>
#include <vector>

#include "diracsim/field.hpp"
#include "diracsim/pauli.hpp"
#include "diracsim/split_step.hpp"

namespace diracsim {

/// Simulated Dirac constants (hbar = 1). The mass term is m c^2 (n . sigma)
/// with n = mass_axis.
struct SimParams {
  real c = 1.0;
  real m = 0.0;
  Vec3 mass_axis = Vec3::UnitZ();

  real rest_energy() const { return m * c * c; }
  real energy(real p) const { return std::sqrt(c * c * p * p + rest_energy() * rest_energy()); }
  void validate() const;
};

/// c p sigma_x + m c^2 (mass_axis . sigma).
PauliCoeffs dirac_symbol_1p1(real p, const SimParams& params);

/// exp(-i dt (c sigma_x p + m c^2 sigma_axis)) for every grid momentum.
KineticPhase<2> dirac_kinetic_phase_1p1(const Grid1D& grid, const SimParams& params, real dt);

/// Exact free evolution: one phase application per momentum mode.
SpinorField1D evolve_free(const SpinorField1D& psi0, const SimParams& params, real t);

/// Rank-1 projector onto the positive-energy eigenvector of the 1+1 symbol
/// at momentum p. For a vanishing symbol the sigma_x = +1 projector is used.
Mat2c positive_energy_projector(real p, const SimParams& params);

/// Applies positive_energy_projector mode by mode. The result is not renormalized.
SpinorField1D project_positive_energy(const SpinorField1D& psi, const SimParams& params);

/// <x>(t) for each requested time via exact free evolution. Throws
/// NumericalGuardError if probability reaches the outer 5% of the box.
std::vector<real> mean_position_trace(const SpinorField1D& psi0, const SimParams& params,
                                      std::span<const real> times);

/// omega_ZB = 2 sqrt(c^2 p0^2 + m^2 c^4) (hbar = 1).
real zb_frequency_estimate(real p0, const SimParams& params);

/// R_ZB = (1/(2 m c)) (m c^2 / E)^2. Throws DomainError for m = 0.
real zb_amplitude_estimate(real p0, const SimParams& params);

struct ZbMeasurement {
  real frequency = 0.0;  // angular frequency
  real amplitude = 0.0;  // drift-removed peak magnitude
};

/// Thrown when a trace has no spectral peak above the floor.
class NoOscillationError : public DomainError {
 public:
  NoOscillationError() : DomainError("no oscillation detected") {}
};

/// Extracts the dominant oscillation of a uniformly sampled trace: removes a
/// linear drift, picks the strongest DFT peak (zero-padded), refines it by
/// quadratic interpolation, then re-fits drift jointly with the sinusoid.
ZbMeasurement measure_zb_from_trace(std::span<const real> series, std::span<const real> times);

using FourSpinor = Vec4c;

/// 3+1 Dirac Hamiltonian in the supersymmetric representation at momentum p:
/// [[0, c sigma.p - i m c^2], [c sigma.p + i m c^2, 0]].
Mat4c dirac_hamiltonian_3p1(const Vec3& p, const SimParams& params);

/// Velocity operator c alpha_k = c offdiag(sigma_k, sigma_k).
Mat4c dirac_velocity_3p1(int axis, const SimParams& params);

FourSpinor evolve_free_3p1_mode(const FourSpinor& s, const Vec3& p, const SimParams& params,
                                real t);

}  // namespace diracsim

#endif  // DIRACSIM_DIRAC_HPP
