#ifndef DIRACSIM_LANDAU_HPP
#define DIRACSIM_LANDAU_HPP

#include <cstddef>

#include "diracsim/field.hpp"
#include "diracsim/pauli.hpp"

namespace diracsim {

/// Detuned Jaynes-Cummings model c sqrt(2) (sigma+ a + a^dag sigma-) + m c^2 sigma_z
/// in units eB = hbar = 1. Basis index = spin * (n_max + 1) + n, spin 0 = up.
struct JCParams {
  real c = 1.0;
  real m = 0.5;
  std::size_t n_max = 64;

  std::size_t fock_dim() const { return n_max + 1; }
  std::size_t dim() const { return 2 * fock_dim(); }
  void validate() const;
};

MatXc jc_hamiltonian(const JCParams& params);

/// sign * c sqrt(m^2 c^2 + 2n) for n >= 1; n = 0 gives -m c^2 whatever the sign.
real landau_energy(int n, int sign, const JCParams& params);

/// Normalized oscillator eigenfunction phi_n(x), 0 <= n <= 200.
real hermite_function(int n, real x);
/// phi_0..phi_n at x, from the normalized three-term recurrence.
VecXd hermite_functions(int n, real x);

/// Eigenvector of the sector-n block: n >= 1 spans |up, n-1>, |down, n>;
/// n = 0 is |down, 0>.
VecXc landau_state_vector(int n, int sign, const JCParams& params);

/// Position-space spinor (u phi_{n-1}, v phi_n); n = 0 gives (0, phi_0).
SpinorField1D landau_eigenstate(int n, int sign, const JCParams& params, const Grid1D& grid);

/// Density matrix on spin (x) Fock(n_max + 1), same index layout as JCParams.
class SpinOscillatorState {
 public:
  SpinOscillatorState(std::size_t n_max, MatXc rho);
  static SpinOscillatorState pure(std::size_t n_max, const VecXc& psi);

  std::size_t n_max() const { return n_max_; }
  std::size_t fock_dim() const { return n_max_ + 1; }
  const MatXc& rho() const { return rho_; }
  /// Hermitian, unit trace, positive semidefinite within tol.
  bool is_valid(real tol = 1e-10) const;

 private:
  std::size_t n_max_;
  MatXc rho_;
};

/// Spin amplitude damping: K0 = diag(sqrt(1 - p), 1), K1 = sqrt(p) |down><up|.
SpinOscillatorState amplitude_damping(const SpinOscillatorState& rho, real p_damp);
/// Pure dephasing along z: spin coherences scaled by e^{-gamma t}.
SpinOscillatorState dephasing_channel(const SpinOscillatorState& rho, real gamma_t);

/// 2x2 matrix-valued Wigner function sampled on an (x, p) lattice; entry
/// (i, j) belongs to x = x_axis.x(i), p = p_axis.x(j).
struct WignerField {
  Grid1D x_axis;
  Grid1D p_axis;
  MatXc uu, ud, du, dd;
  bool accuracy_warning = false;  // input not negligible at the box edge

  Mat2c at(Eigen::Index i, Eigen::Index j) const;
  /// Integral of Tr W over the lattice.
  real total() const;
};

/// W_ab(x, p) = (1/2 pi) int psi_a(x + s/2) psi_b^*(x - s/2) e^{-i s p} ds,
/// evaluated at the grid points of psi (s steps of 2 dx) and the p_axis points.
WignerField wigner_spinor(const SpinorField1D& psi, const Grid1D& p_axis);

/// Same function for a density matrix, through closed-form Fock-state
/// cross-Wigner kernels.
WignerField wigner_from_density(const SpinOscillatorState& rho, const Grid1D& x_axis,
                                const Grid1D& p_axis);

/// Wigner function of |m><n| at (x, p).
cplx fock_cross_wigner(int m, int n, real x, real p);

/// Unit Bloch vectors s = Tr{W sigma} / |Tr{W sigma}| with a validity mask.
struct PseudospinField {
  Grid1D x_axis;
  Grid1D p_axis;
  MatXd raw_x, raw_y, raw_z;  // Tr{W sigma} before normalization
  real transverse_scale = 1.0;  // factor applied to raw_x, raw_y (dephasing)
  MatXd sx, sy, sz;
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> valid;
  real threshold = 0.0;  // absolute cut on |Tr{W sigma}|

  Vec3 at(Eigen::Index i, Eigen::Index j) const { return {sx(i, j), sy(i, j), sz(i, j)}; }
  /// tan^-1(s_y / s_x) over the whole lattice; unaffected by transverse_scale.
  MatXd polar_angle() const;
};

/// relative_threshold is taken against the largest |Tr{W sigma}| on the lattice.
PseudospinField pseudospin_field(const WignerField& w, real relative_threshold = 1e-6);
/// Builds the field from raw components with a fixed absolute threshold.
PseudospinField pseudospin_from_raw(const Grid1D& x_axis, const Grid1D& p_axis, MatXd raw_x,
                                    MatXd raw_y, MatXd raw_z, real threshold,
                                    real transverse_scale = 1.0);

/// (s_x e^{-gamma t}, s_y e^{-gamma t}, s_z), renormalized; the absolute
/// threshold of the input applies.
PseudospinField dephasing_map(const PseudospinField& s, real gamma_t);

struct WindingReport {
  real signed_degree = 0.0;
  real coverings = 0.0;
  real quality = 0.0;              // |signed - round(signed)|
  real closure_solid_angle = 0.0;  // fan to the compactification point, signed
  std::size_t excluded_triangles = 0;
  real boundary_spread = 0.0;  // largest angle between rim vectors and their mean
};

/// Discrete degree of the pseudospin map. Valid lattice cells are split into
/// two triangles each; the rim of the valid region is closed by a fan to the
/// averaged rim vector. Throws DomainError ("non-compact field") when the
/// rim vectors spread more than max_spread radians from their mean.
WindingReport winding_number(const PseudospinField& s, real max_spread = 0.1);

/// Signed solid angle of the spherical triangle (a, b, c), unit vectors.
real spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace diracsim

#endif  // DIRACSIM_LANDAU_HPP
