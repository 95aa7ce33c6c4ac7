#include "diracsim/grid.hpp"

#include <cmath>
#include <string>

namespace diracsim {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid1D make_grid(std::size_t n_points, real x_min, real x_max) {
  if (n_points < 8 || !is_power_of_two(n_points)) {
    throw ConfigError("grid: n_points must be a power of two >= 8, got " +
                      std::to_string(n_points));
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min)) {
    throw ConfigError("grid: require finite bounds with x_max > x_min");
  }
  Grid1D g;
  g.n_ = n_points;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.x_.resize(static_cast<Eigen::Index>(n_points));
  g.p_.resize(static_cast<Eigen::Index>(n_points));
  for (std::size_t j = 0; j < n_points; ++j) {
    g.x_[static_cast<Eigen::Index>(j)] = g.x(j);
    g.p_[static_cast<Eigen::Index>(j)] = g.p(j);
  }
  return g;
}

Grid1D make_centered_grid(std::size_t n_points, real center, real half_width) {
  return make_grid(n_points, center - half_width, center + half_width);
}

}  // namespace diracsim
