#ifndef DIRACSIM_TYPES_HPP
#define DIRACSIM_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diracsim {

using real = double;
using cplx = std::complex<double>;

inline constexpr real pi = 3.14159265358979323846;
inline constexpr cplx I{0.0, 1.0};

using Vec3 = Eigen::Vector3d;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Vec2c = Eigen::Vector2cd;
using Vec4c = Eigen::Vector4cd;
using VecXd = Eigen::VectorXd;
using VecXc = Eigen::VectorXcd;
using MatXc = Eigen::MatrixXcd;
using MatXd = Eigen::MatrixXd;

// Invalid parameters or grid specifications. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// API misuse: wrong representation, mismatched sizes.
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Mathematical domain violations (undefined quantity for the given input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical guard tripped during a run (boundary leak, memory guard,
// non-separated lobes). Maps to CLI exit code 3.
class NumericalGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace diracsim

#endif  // DIRACSIM_TYPES_HPP
