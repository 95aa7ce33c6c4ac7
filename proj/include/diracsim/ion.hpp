#ifndef DIRACSIM_ION_HPP
#define DIRACSIM_ION_HPP

#include <optional>
#include <string>
#include <vector>

#include "diracsim/bag.hpp"
#include "diracsim/dirac.hpp"
#include "diracsim/klein.hpp"

namespace diracsim {

/// Sideband coupling of one motional mode: Lamb-Dicke parameter, ground-state
/// spread and sideband Rabi frequency.
struct ModeCoupling {
  real eta = 0.05;
  real Delta = 1.0;
  real Omega_tilde = 10.0;

  /// 2 eta Delta Omega_tilde.
  real speed_of_light() const { return 2.0 * eta * Delta * Omega_tilde; }
  void validate(const char* name) const;
};

/// Laboratory parameters. Mode-specific couplings fall back to `mode`.
/// Ion-side energies carry hbar explicitly; the default hbar = 1 reads them
/// directly in simulation units.
struct IonParams {
  ModeCoupling mode{};
  std::optional<ModeCoupling> cm, st, r;
  real Omega = 1.0;        // carrier Rabi frequency
  real nu = 1.0;           // trap frequency; nu_cm = nu, nu_st = sqrt(3) nu
  real Omega_0 = 0.0;      // sideband drive on ion 2 for the linear potential
  real Omega_3 = 0.0;      // drive on ion 2 for the quadratic potential
  real Delta_3 = 0.0;      // its detuning
  real hbar = 1.0;

  const ModeCoupling& coupling_cm() const { return cm ? *cm : mode; }
  const ModeCoupling& coupling_st() const { return st ? *st : mode; }
  const ModeCoupling& coupling_r() const { return r ? *r : mode; }
  real nu_cm() const { return nu; }
  real nu_st() const;
  void validate() const;
};

/// c = 2 eta Delta Omega_tilde, m c^2 = hbar Omega.
SimParams sim_from_ion(const IonParams& ip);
/// Adds alpha = hbar eta_cm Omega_0 / Delta_cm. Requires equal c on cm and st.
KleinParams klein_from_ion(const IonParams& ip);
/// Adds V0 = (hbar eta_cm Omega_3 / Delta_cm)^2 / (hbar Delta_3). Requires
/// equal c on the cm and r modes.
BagParams bag_from_ion(const IonParams& ip, real P_cm);

/// Parameters held fixed by the inversion; drives are solved for.
struct IonFixed {
  ModeCoupling mode{0.05, 1.0, 0.0};
  real Delta_3 = 100.0;
  real nu = 1.0;
  real hbar = 1.0;
  real max_drive = std::numeric_limits<real>::infinity();
};

struct IonInversion {
  IonParams ion;
  bool feasible = true;
  std::vector<std::string> notes;
};

IonInversion ion_from_sim(const SimParams& s, const IonFixed& fixed);
IonInversion ion_from_sim(const KleinParams& kp, const IonFixed& fixed);
IonInversion ion_from_sim(const BagParams& bp, const IonFixed& fixed);

/// 2 sqrt(N eta^2 Omega_tilde^2 + Omega^2).
real zb_ion_frequency(real N, const IonParams& ip);

struct ValidityReport {
  bool lamb_dicke_ok = false;
  real eta = 0.0;
  real dispersive_ratio = 0.0;  // Delta_3 / (eta Omega_3 2 sqrt(n)); infinite without a drive
  bool dispersive_ok = false;
  std::vector<std::string> notes;
};

inline constexpr real lamb_dicke_limit = 0.1;
inline constexpr real dispersive_margin = 10.0;

ValidityReport validity_check(const IonParams& ip, int n_max_phonons);

enum class IonModel { dirac3p1, klein2p1, bag };

/// One term of an ion Hamiltonian: coefficient * spin operator * mode operator.
/// `spin_matrix` acts on the internal space of the model: levels a, b, c, d for
/// dirac3p1; ion 1 (x) ion 2 for klein2p1; ion 1 (x) ion 2 (x) ion 3 for bag.
struct IonTerm {
  std::string spin;
  std::string mode;  // "1" for a constant term
  real coefficient = 0.0;
  MatXc spin_matrix;
};

struct IonHamiltonian {
  IonModel model = IonModel::dirac3p1;
  std::vector<IonTerm> terms;
};

IonHamiltonian build_ion_hamiltonian(IonModel model, const IonParams& ip);

/// Ion table rewritten in model variables: ion 2 is frozen in the + eigenstate
/// of sigma_x (klein2p1) or replaced by its dispersive shift (bag), and mode
/// operators are renamed (p_cm -> p_x, p_st -> p_y, x_cm -> x for klein2p1;
/// P_cm -> p_r, p_r -> P_cm/2, Q_cm^2 -> x_r^2 for bag). Spin matrices act on
/// the simulated spinor (4, 2 and 4 components).
std::vector<IonTerm> model_terms(const IonHamiltonian& h);

/// Sum of model_terms with mode operators replaced by numbers.
MatXc evaluate_terms(const std::vector<IonTerm>& terms,
                     const std::vector<std::pair<std::string, real>>& values);

struct NormalModes {
  Eigen::Matrix3d matrix;  // rows: cm, r, 3
  Vec3 Q;                  // Q_cm, Q_r, Q_3
  Vec3 P;                  // P_cm, p_r, P_3
};

/// Three equal ions: Q_cm = (x1+x2+x3)/sqrt3, Q_r = -(x1-x3)/sqrt2,
/// Q_3 = (x1-2x2+x3)/sqrt6, and the same rows for the momenta.
NormalModes normal_modes_3ions(const Vec3& x, const Vec3& p);

}  // namespace diracsim

#endif  // DIRACSIM_ION_HPP
