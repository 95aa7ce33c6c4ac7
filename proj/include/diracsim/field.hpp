#ifndef DIRACSIM_FIELD_HPP
#define DIRACSIM_FIELD_HPP

#include <utility>

#include "diracsim/fft.hpp"
#include "diracsim/grid.hpp"
#include "diracsim/types.hpp"

namespace diracsim {

enum class Representation { position, momentum };

/// Multi-component complex amplitudes on a Grid1D.
///
/// Row j holds the spinor at x_j (position representation) or at p_j in FFT
/// order (momentum representation). The momentum amplitudes are unitary DFT
/// coefficients, so norm() = sum |a|^2 dx holds in both representations.
template <int Components>
class SpinorField {
 public:
  using Amplitudes = Eigen::Matrix<cplx, Eigen::Dynamic, Components>;
  static constexpr int components = Components;

  SpinorField() = default;
  SpinorField(Grid1D grid, Amplitudes amplitudes,
              Representation rep = Representation::position)
      : grid_(std::move(grid)), amps_(std::move(amplitudes)), rep_(rep) {
    if (static_cast<std::size_t>(amps_.rows()) != grid_.size()) {
      throw UsageError("field: amplitude rows do not match grid size");
    }
  }

  const Grid1D& grid() const { return grid_; }
  const Amplitudes& amplitudes() const { return amps_; }
  Representation representation() const { return rep_; }

  real norm() const { return amps_.squaredNorm() * grid_.dx(); }

  /// Probability density summed over components, per grid point.
  VecXd density() const { return amps_.rowwise().squaredNorm(); }

  SpinorField normalized() const {
    const real n = norm();
    if (!(n > 0.0)) throw DomainError("field: cannot normalize a zero field");
    return SpinorField(grid_, amps_ / std::sqrt(n), rep_);
  }

 private:
  Grid1D grid_;
  Amplitudes amps_;
  Representation rep_ = Representation::position;
};

using SpinorField1D = SpinorField<2>;
using FourSpinorField = SpinorField<4>;

template <int C>
SpinorField<C> to_momentum(const SpinorField<C>& f) {
  if (f.representation() != Representation::position) {
    throw UsageError("to_momentum: field is not in position representation");
  }
  auto a = f.amplitudes();
  fft::transform_columns(a, fft::Direction::forward);
  return SpinorField<C>(f.grid(), std::move(a), Representation::momentum);
}

template <int C>
SpinorField<C> to_position(const SpinorField<C>& f) {
  if (f.representation() != Representation::momentum) {
    throw UsageError("to_position: field is not in momentum representation");
  }
  auto a = f.amplitudes();
  fft::transform_columns(a, fft::Direction::backward);
  return SpinorField<C>(f.grid(), std::move(a), Representation::position);
}

/// L2 distance sqrt(sum |a - b|^2 dx) between two fields on the same grid.
template <int C>
real l2_distance(const SpinorField<C>& a, const SpinorField<C>& b) {
  if (!(a.grid() == b.grid()) || a.representation() != b.representation()) {
    throw UsageError("l2_distance: fields live on different grids/representations");
  }
  return std::sqrt((a.amplitudes() - b.amplitudes()).squaredNorm() * a.grid().dx());
}

/// <x> = sum x |psi|^2 dx for a position-representation field.
template <int C>
real mean_position(const SpinorField<C>& f) {
  if (f.representation() != Representation::position) {
    throw UsageError("mean_position: position representation required");
  }
  return f.grid().positions().dot(f.density()) * f.grid().dx();
}

/// Probability mass in the outer `fraction` of the box on either side.
real boundary_probability(const Grid1D& grid, const VecXd& density, real fraction = 0.05);

/// Throws NumericalGuardError when boundary_probability exceeds `limit`.
void check_boundary_leak(const Grid1D& grid, const VecXd& density, real limit = 1e-6,
                         const char* context = "run");

/// Gaussian envelope exp(-(x-x0)^2/(4 sigma^2) + i p0 x), normalized in L2,
/// where sigma is the standard deviation of |psi|^2.
VecXc gaussian_packet(const Grid1D& grid, real x0, real sigma, real p0);

}  // namespace diracsim

#endif  // DIRACSIM_FIELD_HPP
