#ifndef DIRACSIM_PAULI_HPP
#define DIRACSIM_PAULI_HPP

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "diracsim/types.hpp"

namespace diracsim {

template <typename Scalar>
using Mat2 = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar = real>
Mat2<Scalar> sigma_x() {
  Mat2<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = real>
Mat2<Scalar> sigma_y() {
  using C = std::complex<Scalar>;
  Mat2<Scalar> m;
  m << C(0), C(0, -1), C(0, 1), C(0);
  return m;
}

template <typename Scalar = real>
Mat2<Scalar> sigma_z() {
  Mat2<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

/// Coefficients of a0*I + ax*sigma_x + ay*sigma_y + az*sigma_z.
template <typename Scalar>
struct BasicPauliCoeffs {
  Scalar a0 = 0;
  Scalar ax = 0;
  Scalar ay = 0;
  Scalar az = 0;

  Eigen::Matrix<Scalar, 3, 1> vector() const { return {ax, ay, az}; }

  Mat2<Scalar> matrix() const {
    using C = std::complex<Scalar>;
    Mat2<Scalar> m;
    m << C(a0 + az), C(ax, -ay), C(ax, ay), C(a0 - az);
    return m;
  }
};

using PauliCoeffs = BasicPauliCoeffs<real>;

/// exp(-i theta (a0 I + a.sigma)) in closed form:
/// e^{-i theta a0} (cos(theta|a|) I - i sin(theta|a|) a_hat.sigma).
template <typename Scalar>
Mat2<Scalar> pauli_exponential(const BasicPauliCoeffs<Scalar>& c, Scalar theta) {
  using C = std::complex<Scalar>;
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar len = sqrt(c.ax * c.ax + c.ay * c.ay + c.az * c.az);
  const C global = std::exp(C(0, -theta * c.a0));
  const Scalar phase = theta * len;
  const Scalar cs = cos(phase);
  // sin(theta|a|)/|a| with the |a| -> 0 limit theta.
  const Scalar sinc = len > Scalar(0) ? sin(phase) / len : theta;
  Mat2<Scalar> u;
  u << C(cs, -sinc * c.az), C(-sinc * c.ay, -sinc * c.ax),
       C(sinc * c.ay, -sinc * c.ax), C(cs, sinc * c.az);
  return global * u;
}

/// exp(-i theta H) for Hermitian H via eigendecomposition. Throws DomainError
/// when H deviates from Hermitian by more than `tol` (max-abs entry).
template <typename Derived>
auto hermitian_exponential(const Eigen::MatrixBase<Derived>& h, real theta, real tol = 1e-12) {
  using Matrix = typename Derived::PlainObject;
  const Matrix hm = h;
  if ((hm - hm.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw DomainError("hermitian_exponential: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hm);
  const auto& vals = es.eigenvalues();
  using Cvec = Eigen::Matrix<cplx, Matrix::RowsAtCompileTime, 1>;
  Cvec phases(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i) phases[i] = std::exp(cplx(0.0, -theta * vals[i]));
  const Matrix& v = es.eigenvectors();
  Matrix out = v * phases.asDiagonal() * v.adjoint();
  return out;
}

/// exp(-i theta H) for a 4x4 Hermitian H.
inline Mat4c matrix_exponential_4(const Mat4c& h, real theta) {
  return hermitian_exponential(h, theta);
}

/// Kronecker product of two 2x2 matrices (first factor is the major index).
inline Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace diracsim

#endif  // DIRACSIM_PAULI_HPP
