#ifndef DIRACSIM_GRID_HPP
#define DIRACSIM_GRID_HPP

#include <cstddef>

#include "diracsim/types.hpp"

namespace diracsim {

/// Uniform periodic 1D grid together with its DFT-dual momentum lattice.
///
/// Position samples are x_j = x_min + j*dx for j in [0, n). Momenta are
/// stored in FFT order: index k holds p = 2*pi*k'/(n*dx) with
/// k' = k for k < n/2 and k' = k - n otherwise (hbar = 1).
class Grid1D {
 public:
  Grid1D() = default;

  std::size_t size() const { return n_; }
  real x_min() const { return x_min_; }
  real x_max() const { return x_max_; }
  real dx() const { return (x_max_ - x_min_) / static_cast<real>(n_); }
  real length() const { return x_max_ - x_min_; }
  real dp() const { return 2.0 * pi / length(); }
  real p_max() const { return pi / dx(); }
  real center() const { return 0.5 * (x_min_ + x_max_); }

  real x(std::size_t j) const { return x_min_ + static_cast<real>(j) * dx(); }
  real p(std::size_t k) const {
    const auto half = n_ / 2;
    const auto signed_k = k < half ? static_cast<real>(k)
                                   : static_cast<real>(k) - static_cast<real>(n_);
    return signed_k * dp();
  }

  const VecXd& positions() const { return x_; }
  const VecXd& momenta() const { return p_; }

  bool operator==(const Grid1D& other) const {
    return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
  }

  friend Grid1D make_grid(std::size_t n_points, real x_min, real x_max);

 private:
  std::size_t n_ = 0;
  real x_min_ = 0.0;
  real x_max_ = 0.0;
  VecXd x_;
  VecXd p_;
};

/// Builds a grid. Throws ConfigError unless n_points is a power of two >= 8
/// and x_max > x_min.
Grid1D make_grid(std::size_t n_points, real x_min, real x_max);

/// Grid of n_points centered on `center` with half-width `half_width`.
Grid1D make_centered_grid(std::size_t n_points, real center, real half_width);

bool is_power_of_two(std::size_t n);

}  // namespace diracsim

#endif  // DIRACSIM_GRID_HPP
