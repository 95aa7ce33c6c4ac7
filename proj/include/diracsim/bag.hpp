#ifndef DIRACSIM_BAG_HPP
#define DIRACSIM_BAG_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include "diracsim/dirac.hpp"
#include "diracsim/field.hpp"
#include "diracsim/split_step.hpp"

namespace diracsim {

/// Two 1+1 Dirac particles (labels 1 and 3) coupled by V0 x_r^2 in the
/// relative coordinate; P_cm is a conserved parameter. Spinor basis is
/// spin(1) (x) spin(3), index 2 s1 + s3, s = 0 for sigma_z = +1.
struct BagParams {
  SimParams base{};
  real V0 = 0.5;
  real P_cm = 2.0;

  void validate() const;
  /// sqrt(2 m c^2 / V0); infinite when V0 = 0.
  real tunneling_radius() const;
};

/// c (sx1 - sx3) p_r + c (sx1 + sx3) P_cm / 2 + m c^2 (sy1 + sy3).
Mat4c bag_spin_kinetic_block(real p_r, const BagParams& bp);

/// Strang pieces for step dt: e^{-i K(p) dt} per mode, e^{-i V0 x^2 dt/2}.
SplitPropagator<4> bag_propagator(const Grid1D& grid, const BagParams& bp, real dt);

/// (sx1 - sx3) / 2.
Mat4c pi_operator();

/// Gaussian in x_r times the Pi eigenstate |sx = s>_1 |sx = -s>_3, s = pi_sign.
FourSpinorField prepare_initial(real x0, real sigma, real p_r0, int pi_sign, const Grid1D& grid);

/// Strang evolution, 4x4 kinetic block exponentiated per momentum mode.
FourSpinorField evolve_bag(const FourSpinorField& psi0, const BagParams& bp, real dt, real t);

struct BagRunOptions {
  std::size_t snapshot_every = 0;  // steps between snapshots; 0 = final state only
  /// |x_r| where a cos^{1/8} absorbing mask begins; infinity disables it. With
  /// the mask on, outgoing flux is removed and booked in BagRun::absorbed
  /// instead of tripping the boundary-leak guard.
  real absorber_start = std::numeric_limits<real>::infinity();
};

struct BagRun {
  std::vector<real> times;
  std::vector<VecXd> densities;  // |psi(x_r, t)|^2 per snapshot
  std::vector<real> pi_values;
  std::vector<real> energies;
  std::vector<real> norms;
  std::vector<real> absorbed;  // probability removed by the mask so far
  FourSpinorField final_state;
  real final_absorbed = 0.0;
};

/// Same evolution with snapshots at t = 0, every `snapshot_every` steps and at t.
BagRun evolve_bag_series(const FourSpinorField& psi0, const BagParams& bp, real dt, real t,
                         const BagRunOptions& options = {});

/// Probability at |x_r| > tunneling_radius().
real klein_tunneling_fraction(const FourSpinorField& psi, const BagParams& bp);
/// Same, counting absorbed probability as tunneled.
real klein_tunneling_fraction(const BagRun& run, const BagParams& bp);
real pi_expectation(const FourSpinorField& psi);
real bag_energy(const FourSpinorField& psi, const BagParams& bp);

/// Row per snapshot, column per x_r.
MatXd density_trace(const BagRun& run);

/// Strict local maxima of a density row above `floor` times its peak.
std::size_t count_local_maxima(const VecXd& density, real floor = 0.05);

}  // namespace diracsim

#endif  // DIRACSIM_BAG_HPP
