#ifndef DIRACSIM_KLEIN_HPP
#define DIRACSIM_KLEIN_HPP

#include <span>
#include <vector>

#include "diracsim/dirac.hpp"

namespace diracsim {

/// Dirac particle in the linear potential alpha (x - x_center).
struct KleinParams {
  SimParams base;
  real alpha = 1.0;
  real x_center = 0.0;

  real potential(real x) const { return alpha * (x - x_center); }
  void validate() const;
};

/// c sigma_y p_y + m c^2 sigma_z = m~ c^2 (n_y sigma_y + n_z sigma_z).
struct EffectiveMass {
  real m_tilde = 0.0;
  real n_y = 0.0;
  real n_z = 1.0;
  bool degenerate = false;  // m = p_y = 0: direction fixed to (0, 1) by convention
};

EffectiveMass effective_mass(real p_y, const SimParams& params);

/// 1+1 parameters of one p_y slice: mass m~ along (0, n_y, n_z).
SimParams slice_params(const EffectiveMass& em, real c);

/// exp(-pi m~^2 c^4 / (hbar c alpha)), hbar = 1.
real transmission_formula(const EffectiveMass& em, const KleinParams& kp);

/// v_g = c^2 p_x / sqrt(c^2 p_x^2 + m~(p_y)^2 c^4).
real group_velocity(real p_x, real p_y, const SimParams& params);

/// Strang evolution of one 1+1 Klein slice.
///
/// The half-steps e^{-i alpha (x - x_c) dt/2} are applied as exact momentum
/// translations: the state is held as psi(x) = e^{i phase} e^{i q x} chi(x)
/// with chi band-limited on the grid, so the kinetic step uses the symbol at
/// p + q. This is the same operator sequence as position-space Strang, but
/// the momentum drift -alpha t never aliases on the lattice.
class KleinSliceEvolver {
 public:
  KleinSliceEvolver(const SpinorField1D& psi0, const KleinParams& kp, const EffectiveMass& em,
                    real dt);

  /// Advances to time t >= time() in steps of at most dt, landing exactly on t.
  void advance_to(real t);

  real time() const { return time_; }
  real carrier() const { return carrier_; }

  /// Lab-frame samples psi(x_j, t).
  SpinorField1D field() const;
  /// |psi(x_j, t)|^2 summed over spin.
  VecXd density() const;
  real norm() const;
  /// <c sigma_x p + m~ c^2 sigma~ + alpha (x - x_c)>.
  real energy() const;

 private:
  Grid1D grid_;
  KleinParams kp_;
  SimParams slice_;
  real dt_;
  real time_ = 0.0;
  real carrier_ = 0.0;
  real phase_ = 0.0;
  SpinorField1D::Amplitudes chi_;  // momentum representation
};

/// psi0 evolved to time t under c sigma_x p + m~ c^2 sigma~ + alpha (x - x_c).
/// Throws NumericalGuardError on boundary leak.
SpinorField1D evolve_klein_1p1(const SpinorField1D& psi0, const KleinParams& kp,
                               const EffectiveMass& em, real dt, real t);

/// Same as above with the base mass (p_y = 0).
SpinorField1D evolve_klein_1p1(const SpinorField1D& psi0, const KleinParams& kp, real dt,
                               real t);

/// Reference Strang evolution with the potential multiplied in position space
/// on the periodic grid (valid while the momentum stays inside the lattice).
SpinorField1D evolve_klein_1p1_position_space(const SpinorField1D& psi0, const KleinParams& kp,
                                              const EffectiveMass& em, real dt, real t);

/// Thrown when transmitted and reflected lobes overlap the split window.
class InconclusiveError : public NumericalGuardError {
 public:
  using NumericalGuardError::NumericalGuardError;
};

/// Probability beyond x_split. Throws InconclusiveError when more than 1e-2
/// of the probability lies within `window` of x_split.
real measure_transmission(const Grid1D& grid, const VecXd& density, real x_split, real window);
real measure_transmission(const SpinorField1D& psi, real x_split, real window);

/// Default split point: x_c + <E>/alpha + 3 sigma_x.
real transmission_split(const KleinParams& kp, real energy, real sigma_x);

/// 2+1 state in the mixed (x, p_y) representation. Slice k belongs to
/// p_y = y_grid.p(k); slice norms add up to the global norm.
struct SpinorSlices2D {
  Grid1D x_grid;
  Grid1D y_grid;
  std::vector<SpinorField1D> slices;

  real p_y(std::size_t k) const { return y_grid.p(k); }
  real norm() const;
  VecXd slice_norms() const;
  /// |psi(x, p_y)|^2 with rows = x, columns = p_y in FFT order.
  MatXd density() const;
};

/// Two-component field on an (x, y) grid; rows are x, columns are y.
struct Field2D {
  Grid1D x_grid;
  Grid1D y_grid;
  MatXc up;
  MatXc down;

  real norm() const;
  MatXd density() const;
  /// Marginal over y: sum_y |psi|^2 dy per x.
  VecXd x_marginal() const;
};

real l2_distance(const Field2D& a, const Field2D& b);

/// Inverse DFT along p_y: psi(x, p_y) -> psi(x, y).
Field2D reconstruct_position_space(const SpinorSlices2D& psi);
/// Forward DFT along y: psi(x, y) -> psi(x, p_y).
SpinorSlices2D decompose_transverse(const Field2D& psi);

/// Independent per-slice evolution with the effective mass of each p_y.
SpinorSlices2D evolve_klein_2p1_decomposed(const SpinorSlices2D& psi0, const KleinParams& kp,
                                           real dt, real t);

/// Snapshots at ascending times (t = 0 allowed).
std::vector<SpinorSlices2D> evolve_klein_2p1_snapshots(const SpinorSlices2D& psi0,
                                                       const KleinParams& kp, real dt,
                                                       std::span<const real> times);

/// Full 2D Strang evolution of c sigma_x p_x + c sigma_y p_y + m c^2 sigma_z +
/// alpha (x - x_c) with the potential applied in position space. Grids above
/// 512 x 512 are refused.
Field2D evolve_klein_2p1_direct(const Field2D& psi0, const KleinParams& kp, real dt, real t);

/// Initial 2+1 packet: Gaussian in x (width sigma_x, centre x0, mean p_x0)
/// times a p_y profile, projected slice by slice on positive energy.
struct KleinPacketSpec {
  real x0 = -40.0;
  real sigma_x = 5.0;
  real p_x0 = 2.0;
  real p_y_center = 0.0;
  real sigma_p_y = 0.5;
  bool uniform_p_y = false;  // equal slice weights instead of the Gaussian profile
};

SpinorSlices2D make_klein_packet(const Grid1D& x_grid, const Grid1D& y_grid,
                                 const KleinParams& kp, const KleinPacketSpec& spec);

/// Positive-energy projected Gaussian for a single 1+1 slice.
SpinorField1D make_klein_packet_1p1(const Grid1D& grid, const SimParams& slice, real x0,
                                    real sigma_x, real p_x0);

struct LobeWidths {
  real transmitted_mass = 0.0;
  real reflected_mass = 0.0;
  real transmitted_width = 0.0;  // standard deviation in x
  real reflected_width = 0.0;
};

/// Second moments of the density on either side of x_split.
LobeWidths lobe_widths(const Grid1D& grid, const VecXd& density, real x_split);

struct LobeWidths2D {
  LobeWidths x;                 // from the x marginal
  real transmitted_y_width = 0.0;  // standard deviation in y of each side
  real reflected_y_width = 0.0;
};

/// Lobe masses and second moments of an (x, y) field split at x_split.
LobeWidths2D lobe_widths_2d(const Field2D& psi, real x_split);

/// <H> of a 1+1 slice field (band-limited, position representation).
real klein_energy(const SpinorField1D& psi, const KleinParams& kp, const EffectiveMass& em);

}  // namespace diracsim

#endif  // DIRACSIM_KLEIN_HPP
