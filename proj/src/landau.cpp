#include "diracsim/landau.hpp"

#include <cmath>
#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace diracsim {

void JCParams::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("jc: c must be positive");
  if (!(m >= 0.0) || !std::isfinite(m)) throw ConfigError("jc: m must be non-negative");
  if (n_max < 1) throw ConfigError("jc: n_max must be positive");
}

MatXc jc_hamiltonian(const JCParams& params) {
  params.validate();
  const auto n = static_cast<Eigen::Index>(params.fock_dim());
  const real mc2 = params.m * params.c * params.c;
  MatXc h = MatXc::Zero(2 * n, 2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    h(k, k) = mc2;
    h(n + k, n + k) = -mc2;
  }
  // <up, k| H |down, k+1> = c sqrt(2) sqrt(k + 1)
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const real g = params.c * std::sqrt(2.0 * static_cast<real>(k + 1));
    h(k, n + k + 1) = g;
    h(n + k + 1, k) = g;
  }
  return h;
}

real landau_energy(int n, int sign, const JCParams& params) {
  params.validate();
  if (n < 0) throw DomainError("landau_energy: n must be non-negative");
  if (n == 0) return -params.m * params.c * params.c;
  const real e = params.c * std::sqrt(params.m * params.m * params.c * params.c + 2.0 * n);
  return sign >= 0 ? e : -e;
}

VecXd hermite_functions(int n, real x) {
  if (n < 0 || n > 200) throw DomainError("hermite_function: n must lie in [0, 200]");
  VecXd out(n + 1);
  out[0] = std::pow(pi, -0.25) * std::exp(-0.5 * x * x);
  if (n >= 1) out[1] = std::sqrt(2.0) * x * out[0];
  for (int k = 1; k < n; ++k) {
    out[k + 1] = std::sqrt(2.0 / (k + 1)) * x * out[k] - std::sqrt(static_cast<real>(k) / (k + 1)) * out[k - 1];
  }
  return out;
}

real hermite_function(int n, real x) { return hermite_functions(n, x)[n]; }

VecXc landau_state_vector(int n, int sign, const JCParams& params) {
  params.validate();
  if (n < 0) throw DomainError("landau_state_vector: n must be non-negative");
  if (2 * static_cast<std::size_t>(n) > params.n_max) {
    throw DomainError("landau_state_vector: n exceeds n_max / 2 (truncation)");
  }
  const auto dim = static_cast<Eigen::Index>(params.fock_dim());
  VecXc out = VecXc::Zero(2 * dim);
  if (n == 0) {
    out[dim] = 1.0;
    return out;
  }
  const real mc2 = params.m * params.c * params.c;
  const real g = params.c * std::sqrt(2.0 * n);
  const real e = landau_energy(n, sign, params);
  const real norm = std::hypot(g, e - mc2);
  out[n - 1] = g / norm;
  out[dim + n] = (e - mc2) / norm;
  return out;
}

SpinorField1D landau_eigenstate(int n, int sign, const JCParams& params, const Grid1D& grid) {
  const VecXc v = landau_state_vector(n, sign, params);
  const auto dim = static_cast<Eigen::Index>(params.fock_dim());
  const cplx u_up = n >= 1 ? v[n - 1] : cplx(0.0);
  const cplx u_down = v[dim + n];
  SpinorField1D::Amplitudes a(static_cast<Eigen::Index>(grid.size()), 2);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const VecXd phi = hermite_functions(n, grid.x(j));
    const auto row = static_cast<Eigen::Index>(j);
    a(row, 0) = n >= 1 ? u_up * phi[n - 1] : cplx(0.0);
    a(row, 1) = u_down * phi[n];
  }
  return SpinorField1D(grid, std::move(a));
}

SpinOscillatorState::SpinOscillatorState(std::size_t n_max, MatXc rho)
    : n_max_(n_max), rho_(std::move(rho)) {
  const auto dim = static_cast<Eigen::Index>(2 * (n_max + 1));
  if (rho_.rows() != dim || rho_.cols() != dim) {
    throw UsageError("SpinOscillatorState: density matrix has the wrong dimension");
  }
}

SpinOscillatorState SpinOscillatorState::pure(std::size_t n_max, const VecXc& psi) {
  return SpinOscillatorState(n_max, psi * psi.adjoint() / psi.squaredNorm());
}

bool SpinOscillatorState::is_valid(real tol) const {
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(rho_.trace() - cplx(1.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<MatXc> es(rho_, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

SpinOscillatorState amplitude_damping(const SpinOscillatorState& state, real p_damp) {
  if (!(p_damp >= 0.0 && p_damp <= 1.0)) {
    throw DomainError("amplitude_damping: p_damp must lie in [0, 1]");
  }
  const auto n = static_cast<Eigen::Index>(state.fock_dim());
  const MatXc& r = state.rho();
  MatXc out = r;
  const real keep = std::sqrt(1.0 - p_damp);
  out.topLeftCorner(n, n) = (1.0 - p_damp) * r.topLeftCorner(n, n);
  out.topRightCorner(n, n) = keep * r.topRightCorner(n, n);
  out.bottomLeftCorner(n, n) = keep * r.bottomLeftCorner(n, n);
  out.bottomRightCorner(n, n) = r.bottomRightCorner(n, n) + p_damp * r.topLeftCorner(n, n);
  return SpinOscillatorState(state.n_max(), std::move(out));
}

SpinOscillatorState dephasing_channel(const SpinOscillatorState& state, real gamma_t) {
  if (!(gamma_t >= 0.0)) throw DomainError("dephasing_channel: gamma t must be non-negative");
  const auto n = static_cast<Eigen::Index>(state.fock_dim());
  MatXc out = state.rho();
  const real f = std::exp(-gamma_t);
  out.topRightCorner(n, n) *= f;
  out.bottomLeftCorner(n, n) *= f;
  return SpinOscillatorState(state.n_max(), std::move(out));
}

Mat2c WignerField::at(Eigen::Index i, Eigen::Index j) const {
  Mat2c w;
  w << uu(i, j), ud(i, j), du(i, j), dd(i, j);
  return w;
}

real WignerField::total() const {
  return (uu + dd).real().sum() * x_axis.dx() * p_axis.dx();
}

WignerField wigner_spinor(const SpinorField1D& psi, const Grid1D& p_axis) {
  if (psi.representation() != Representation::position) {
    throw UsageError("wigner_spinor: position representation required");
  }
  const Grid1D& grid = psi.grid();
  const auto nx = static_cast<Eigen::Index>(grid.size());
  const auto np = static_cast<Eigen::Index>(p_axis.size());
  WignerField w{grid, p_axis, MatXc::Zero(nx, np), MatXc::Zero(nx, np), MatXc::Zero(nx, np),
                MatXc::Zero(nx, np)};
  w.accuracy_warning = boundary_probability(grid, psi.density()) > 1e-8;

  const auto& a = psi.amplitudes();
  const real dx = grid.dx();
  const real weight = dx / pi;  // (1/2 pi) * ds with ds = 2 dx
  for (Eigen::Index i = 0; i < nx; ++i) {
    const Eigen::Index kmax = std::min(i, nx - 1 - i);
    for (Eigen::Index j = 0; j < np; ++j) {
      const real p = p_axis.x(static_cast<std::size_t>(j));
      const cplx step = std::exp(cplx(0.0, -2.0 * dx * p));
      cplx phase = std::exp(cplx(0.0, 2.0 * dx * p * static_cast<real>(kmax)));
      cplx s00 = 0, s01 = 0, s10 = 0, s11 = 0;
      for (Eigen::Index k = -kmax; k <= kmax; ++k) {
        const cplx a0 = a(i + k, 0), a1 = a(i + k, 1);
        const cplx b0 = std::conj(a(i - k, 0)), b1 = std::conj(a(i - k, 1));
        s00 += a0 * b0 * phase;
        s01 += a0 * b1 * phase;
        s10 += a1 * b0 * phase;
        s11 += a1 * b1 * phase;
        phase *= step;
      }
      w.uu(i, j) = weight * s00;
      w.ud(i, j) = weight * s01;
      w.du(i, j) = weight * s10;
      w.dd(i, j) = weight * s11;
    }
  }
  return w;
}

cplx fock_cross_wigner(int m, int n, real x, real p) {
  if (m < n) return std::conj(fock_cross_wigner(n, m, x, p));
  const int d = m - n;
  const real r2 = x * x + p * p;
  const real pref = (n % 2 == 0 ? 1.0 : -1.0) / pi *
                    std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
  const cplx z = std::sqrt(2.0) * cplx(x, -p);
  return pref * std::pow(z, d) * std::assoc_laguerre(static_cast<unsigned>(n),
                                                     static_cast<unsigned>(d), 2.0 * r2) *
         std::exp(-r2);
}

WignerField wigner_from_density(const SpinOscillatorState& state, const Grid1D& x_axis,
                                const Grid1D& p_axis) {
  const auto dim = static_cast<Eigen::Index>(state.fock_dim());
  const MatXc& r = state.rho();
  // Highest Fock index with a non-negligible entry bounds the kernel set.
  Eigen::Index top = 0;
  for (Eigen::Index i = 0; i < 2 * dim; ++i)
    for (Eigen::Index j = 0; j < 2 * dim; ++j)
      if (std::abs(r(i, j)) > 1e-15) top = std::max({top, i % dim, j % dim});

  const auto nx = static_cast<Eigen::Index>(x_axis.size());
  const auto np = static_cast<Eigen::Index>(p_axis.size());
  WignerField w{x_axis, p_axis, MatXc::Zero(nx, np), MatXc::Zero(nx, np), MatXc::Zero(nx, np),
                MatXc::Zero(nx, np)};
  MatXc kernel(top + 1, top + 1);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const real x = x_axis.x(static_cast<std::size_t>(i));
      const real p = p_axis.x(static_cast<std::size_t>(j));
      for (Eigen::Index k = 0; k <= top; ++k)
        for (Eigen::Index l = 0; l <= top; ++l)
          kernel(k, l) = fock_cross_wigner(static_cast<int>(k), static_cast<int>(l), x, p);
      cplx acc[2][2] = {{0, 0}, {0, 0}};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (Eigen::Index k = 0; k <= top; ++k)
            for (Eigen::Index l = 0; l <= top; ++l)
              acc[a][b] += r(a * dim + k, b * dim + l) * kernel(k, l);
      w.uu(i, j) = acc[0][0];
      w.ud(i, j) = acc[0][1];
      w.du(i, j) = acc[1][0];
      w.dd(i, j) = acc[1][1];
    }
  }
  return w;
}

MatXd PseudospinField::polar_angle() const {
  MatXd out(sx.rows(), sx.cols());
  for (Eigen::Index i = 0; i < sx.rows(); ++i)
    for (Eigen::Index j = 0; j < sx.cols(); ++j) out(i, j) = std::atan2(raw_y(i, j), raw_x(i, j));
  return out;
}

PseudospinField pseudospin_from_raw(const Grid1D& x_axis, const Grid1D& p_axis, MatXd raw_x,
                                    MatXd raw_y, MatXd raw_z, real threshold,
                                    real transverse_scale) {
  PseudospinField s{x_axis, p_axis, std::move(raw_x), std::move(raw_y), std::move(raw_z),
                    transverse_scale, {}, {}, {}, {}, threshold};
  const Eigen::Index nx = s.raw_x.rows(), np = s.raw_x.cols();
  s.sx = MatXd::Zero(nx, np);
  s.sy = MatXd::Zero(nx, np);
  s.sz = MatXd::Zero(nx, np);
  s.valid.resize(nx, np);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const Vec3 v(transverse_scale * s.raw_x(i, j), transverse_scale * s.raw_y(i, j),
                   s.raw_z(i, j));
      const real norm = v.norm();
      s.valid(i, j) = norm > threshold && norm > 0.0;
      if (s.valid(i, j)) {
        s.sx(i, j) = v.x() / norm;
        s.sy(i, j) = v.y() / norm;
        s.sz(i, j) = v.z() / norm;
      }
    }
  }
  return s;
}

PseudospinField pseudospin_field(const WignerField& w, real relative_threshold) {
  const MatXd rx = (w.ud + w.du).real();
  const MatXd ry = (cplx(0.0, 1.0) * (w.ud - w.du)).real();
  const MatXd rz = (w.uu - w.dd).real();
  const real peak = (rx.array().square() + ry.array().square() + rz.array().square()).sqrt().maxCoeff();
  return pseudospin_from_raw(w.x_axis, w.p_axis, rx, ry, rz, relative_threshold * peak);
}

PseudospinField dephasing_map(const PseudospinField& s, real gamma_t) {
  if (!(gamma_t >= 0.0)) throw DomainError("dephasing_map: gamma t must be non-negative");
  const real f = std::exp(-gamma_t);
  return pseudospin_from_raw(s.x_axis, s.p_axis, s.raw_x, s.raw_y, s.raw_z, s.threshold,
                             s.transverse_scale * f);
}

real spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  const real num = a.dot(b.cross(c));
  const real den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
  return 2.0 * std::atan2(num, den);
}

WindingReport winding_number(const PseudospinField& s, real max_spread) {
  const Eigen::Index nx = s.sx.rows(), np = s.sx.cols();
  const auto id = [np](Eigen::Index i, Eigen::Index j) {
    return static_cast<std::uint64_t>(i * np + j);
  };
  const auto vec = [&](std::uint64_t k) {
    return s.at(static_cast<Eigen::Index>(k) / np, static_cast<Eigen::Index>(k) % np);
  };
  const auto edge_key = [](std::uint64_t a, std::uint64_t b) { return (a << 32) | b; };

  WindingReport report;
  real signed_sum = 0.0, abs_sum = 0.0;
  std::vector<std::array<std::uint64_t, 3>> triangles;
  std::unordered_set<std::uint64_t> edges;
  for (Eigen::Index i = 0; i + 1 < nx; ++i) {
    for (Eigen::Index j = 0; j + 1 < np; ++j) {
      const std::uint64_t v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1),
                          v11 = id(i + 1, j + 1);
      for (const auto& t : {std::array{v00, v10, v11}, std::array{v00, v11, v01}}) {
        const bool ok = s.valid(static_cast<Eigen::Index>(t[0]) / np, static_cast<Eigen::Index>(t[0]) % np) &&
                        s.valid(static_cast<Eigen::Index>(t[1]) / np, static_cast<Eigen::Index>(t[1]) % np) &&
                        s.valid(static_cast<Eigen::Index>(t[2]) / np, static_cast<Eigen::Index>(t[2]) % np);
        if (!ok) {
          ++report.excluded_triangles;
          continue;
        }
        triangles.push_back(t);
        for (int e = 0; e < 3; ++e) edges.insert(edge_key(t[e], t[(e + 1) % 3]));
        const real omega = spherical_triangle_area(vec(t[0]), vec(t[1]), vec(t[2]));
        signed_sum += omega;
        abs_sum += std::abs(omega);
      }
    }
  }
  if (triangles.empty()) throw DomainError("winding_number: no valid triangles");

  // Rim of the valid region: directed edges whose reverse is absent.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rim;
  for (const auto& t : triangles) {
    for (int e = 0; e < 3; ++e) {
      const auto a = t[e], b = t[(e + 1) % 3];
      if (!edges.count(edge_key(b, a))) rim.emplace_back(a, b);
    }
  }
  Vec3 mean = Vec3::Zero();
  for (const auto& [a, b] : rim) mean += vec(a) + vec(b);
  if (mean.norm() < 1e-12) throw DomainError("winding_number: non-compact field");
  const Vec3 pole = mean.normalized();
  for (const auto& [a, b] : rim) {
    for (auto k : {a, b}) {
      report.boundary_spread =
          std::max(report.boundary_spread, std::acos(std::clamp(vec(k).dot(pole), -1.0, 1.0)));
    }
  }
  if (report.boundary_spread > max_spread) {
    throw DomainError("winding_number: non-compact field (rim spread " +
                      std::to_string(report.boundary_spread) + " rad)");
  }
  for (const auto& [a, b] : rim) {
    const real omega = spherical_triangle_area(vec(b), vec(a), pole);
    report.closure_solid_angle += omega;
    signed_sum += omega;
    abs_sum += std::abs(omega);
  }
  report.signed_degree = signed_sum / (4.0 * pi);
  report.coverings = abs_sum / (4.0 * pi);
  report.quality = std::abs(report.signed_degree - std::round(report.signed_degree));
  return report;
}

}  // namespace diracsim
