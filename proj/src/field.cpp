#include "diracsim/field.hpp"

#include <cmath>
#include <sstream>

namespace diracsim {

real boundary_probability(const Grid1D& grid, const VecXd& density, real fraction) {
  const real band = fraction * grid.length();
  const real lo = grid.x_min() + band;
  const real hi = grid.x_max() - band;
  real mass = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const real x = grid.x(j);
    if (x < lo || x >= hi) mass += density[static_cast<Eigen::Index>(j)];
  }
  return mass * grid.dx();
}

void check_boundary_leak(const Grid1D& grid, const VecXd& density, real limit,
                         const char* context) {
  const real leak = boundary_probability(grid, density);
  if (leak > limit) {
    std::ostringstream os;
    os << context << ": boundary leak " << leak << " exceeds " << limit;
    throw NumericalGuardError(os.str());
  }
}

VecXc gaussian_packet(const Grid1D& grid, real x0, real sigma, real p0) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_packet: sigma must be positive");
  VecXc psi(static_cast<Eigen::Index>(grid.size()));
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const real x = grid.x(j);
    const real u = (x - x0) / sigma;
    psi[static_cast<Eigen::Index>(j)] = std::exp(cplx(-0.25 * u * u, p0 * x));
  }
  psi /= std::sqrt(psi.squaredNorm() * grid.dx());
  return psi;
}

}  // namespace diracsim
