// Independent reference computations used only by the test suites.
#ifndef DIRACSIM_TESTS_ORACLES_HPP
#define DIRACSIM_TESTS_ORACLES_HPP

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "diracsim/types.hpp"

namespace oracle {

using diracsim::cplx;
using diracsim::real;

/// exp(-i theta H) by truncated Taylor series with scaling and squaring.
template <typename Matrix>
Matrix series_exponential(const Matrix& h, real theta, int terms = 20) {
  Matrix a = cplx(0.0, -theta) * h;
  const real norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.5) ++squarings;
  a /= std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(h.rows(), h.cols());
  Matrix sum = term;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / static_cast<real>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Dense exp(-i t H) applied to a vector through the Hermitian eigenbasis of
/// a full matrix (used for small whole-grid Hamiltonians).
inline Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v,
                                     real t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd coeff = es.eigenvectors().adjoint() * v;
  for (Eigen::Index i = 0; i < coeff.size(); ++i) {
    coeff[i] *= std::exp(cplx(0.0, -t * es.eigenvalues()[i]));
  }
  return es.eigenvectors() * coeff;
}

/// Dense DFT matrix F (unitary, forward sign) of size n.
inline Eigen::MatrixXcd dft_matrix(Eigen::Index n) {
  Eigen::MatrixXcd f(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      f(k, j) = std::exp(cplx(0.0, -2.0 * diracsim::pi * static_cast<real>(j * k) /
                                       static_cast<real>(n))) /
                std::sqrt(static_cast<real>(n));
  return f;
}

/// Classical fourth-order Runge-Kutta for i dpsi/dt = H psi with dense H.
inline Eigen::VectorXcd rk4_evolve(const Eigen::MatrixXcd& h, Eigen::VectorXcd v, real t,
                                   int steps) {
  const real dt = t / steps;
  const cplx mi(0.0, -1.0);
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = mi * (h * v);
    const Eigen::VectorXcd k2 = mi * (h * (v + 0.5 * dt * k1));
    const Eigen::VectorXcd k3 = mi * (h * (v + 0.5 * dt * k2));
    const Eigen::VectorXcd k4 = mi * (h * (v + dt * k3));
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 engine(20240917ULL);
  return engine;
}

inline real uniform(real lo, real hi) {
  return std::uniform_real_distribution<real>(lo, hi)(rng());
}

template <int N>
Eigen::Matrix<cplx, N, N> random_hermitian(real scale = 1.0) {
  Eigen::Matrix<cplx, N, N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) m(i, j) = cplx(uniform(-scale, scale), uniform(-scale, scale));
  return (m + m.adjoint()) / 2.0;
}

}  // namespace oracle

#endif  // DIRACSIM_TESTS_ORACLES_HPP
