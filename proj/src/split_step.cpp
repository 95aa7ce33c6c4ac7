#include "diracsim/split_step.hpp"

#include <cmath>

namespace diracsim {

real default_time_step(const Grid1D& grid, real c, real m) {
  const real p = grid.p_max();
  const real e = std::sqrt(c * c * p * p + m * m * c * c * c * c);
  return 0.1 / e;
}

std::size_t steps_for(real t, real dt_max) {
  if (!(dt_max > 0.0)) throw ConfigError("time step must be positive");
  if (t < 0.0) throw ConfigError("evolution time must be non-negative");
  if (t == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(t / dt_max - 1e-9));
}

}  // namespace diracsim
