#include "diracsim/ion.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace diracsim {

namespace {

bool same_speed(real a, real b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

// Single-ion operators.
Mat2c op(char which) {
  switch (which) {
    case 'x': return sigma_x();
    case 'y': return sigma_y();
    case 'z': return sigma_z();
    default: return Mat2c::Identity();
  }
}

// Kronecker product of single-ion operators, ion 1 leftmost.
MatXc kron_ops(const std::string& ops) {
  MatXc out = MatXc::Identity(1, 1);
  for (char o : ops) {
    const Mat2c s = op(o);
    MatXc next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * s;
    out = std::move(next);
  }
  return out;
}

// sigma^{ij}_x or sigma^{ij}_y on the four levels a, b, c, d.
MatXc level_pauli(char i, char j, char axis) {
  MatXc m = MatXc::Zero(4, 4);
  const int a = i - 'a', b = j - 'a';
  if (axis == 'x') {
    m(a, b) = 1.0;
    m(b, a) = 1.0;
  } else {
    m(a, b) = cplx(0, -1);
    m(b, a) = cplx(0, 1);
  }
  return m;
}

// <v| M |v> on the factor `ion` (0-based) of an n-ion operator.
MatXc project_ion(const MatXc& m, int ions, int ion, const Vec2c& v) {
  const Eigen::Index dim = Eigen::Index(1) << (ions - 1);
  MatXc out = MatXc::Zero(dim, dim);
  const int shift = ions - 1 - ion;
  auto expand = [&](Eigen::Index reduced, int bit) {
    const Eigen::Index high = reduced >> shift;
    const Eigen::Index low = reduced & ((Eigen::Index(1) << shift) - 1);
    return (((high << 1) | bit) << shift) | low;
  };
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          out(r, c) += std::conj(v[k]) * m(expand(r, k), expand(c, l)) * v[l];
  return out;
}

std::string fixed_note(const char* what, real value, real limit) {
  std::ostringstream os;
  os << what << " = " << value << " exceeds max_drive = " << limit;
  return os.str();
}

}  // namespace

void ModeCoupling::validate(const char* name) const {
  const std::string n(name);
  if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("IonParams: " + n + ".eta must be positive");
  if (!(Delta > 0.0) || !std::isfinite(Delta)) throw ConfigError("IonParams: " + n + ".Delta must be positive");
  if (!(Omega_tilde >= 0.0) || !std::isfinite(Omega_tilde)) {
    throw ConfigError("IonParams: " + n + ".Omega_tilde must be non-negative");
  }
}

real IonParams::nu_st() const { return std::sqrt(3.0) * nu; }

void IonParams::validate() const {
  mode.validate("mode");
  if (cm) cm->validate("cm");
  if (st) st->validate("st");
  if (r) r->validate("r");
  for (auto [name, v] : {std::pair{"Omega", Omega}, {"nu", nu}, {"Omega_0", Omega_0},
                         {"Omega_3", Omega_3}, {"Delta_3", Delta_3}}) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("IonParams: ") + name + " must be non-negative");
    }
  }
  if (!(hbar > 0.0)) throw ConfigError("IonParams: hbar must be positive");
}

SimParams sim_from_ion(const IonParams& ip) {
  ip.validate();
  const real c = ip.mode.speed_of_light();
  if (!(c > 0.0)) throw ConfigError("sim_from_ion: Omega_tilde = 0 gives c = 0");
  return SimParams{c, ip.hbar * ip.Omega / (c * c), Vec3::UnitZ()};
}

KleinParams klein_from_ion(const IonParams& ip) {
  ip.validate();
  const real c = ip.coupling_cm().speed_of_light();
  if (!(c > 0.0)) throw ConfigError("klein_from_ion: Omega_tilde = 0 gives c = 0");
  if (!same_speed(c, ip.coupling_st().speed_of_light())) {
    throw ConfigError("klein_from_ion: cm and st modes give different c");
  }
  KleinParams kp;
  kp.base = SimParams{c, ip.hbar * ip.Omega / (c * c), Vec3::UnitZ()};
  const auto& cm = ip.coupling_cm();
  kp.alpha = ip.hbar * cm.eta * ip.Omega_0 / cm.Delta;
  return kp;
}

BagParams bag_from_ion(const IonParams& ip, real P_cm) {
  ip.validate();
  const real c = ip.coupling_cm().speed_of_light();
  if (!(c > 0.0)) throw ConfigError("bag_from_ion: Omega_tilde = 0 gives c = 0");
  if (!same_speed(c, ip.coupling_r().speed_of_light())) {
    throw ConfigError("bag_from_ion: cm and r modes give different c");
  }
  if (ip.Omega_3 > 0.0 && !(ip.Delta_3 > 0.0)) {
    throw ConfigError("bag_from_ion: Delta_3 must be positive when Omega_3 is set");
  }
  BagParams bp;
  bp.base = SimParams{c, ip.hbar * ip.Omega / (c * c), Vec3::UnitY()};
  const auto& cm = ip.coupling_cm();
  const real g = ip.hbar * cm.eta * ip.Omega_3 / cm.Delta;
  bp.V0 = ip.Omega_3 > 0.0 ? g * g / (ip.hbar * ip.Delta_3) : 0.0;
  bp.P_cm = P_cm;
  return bp;
}

IonInversion ion_from_sim(const SimParams& s, const IonFixed& fixed) {
  s.validate();
  fixed.mode.validate("fixed");
  if (!(fixed.hbar > 0.0)) throw ConfigError("ion_from_sim: hbar must be positive");
  IonInversion out;
  out.ion.mode = fixed.mode;
  out.ion.mode.Omega_tilde = s.c / (2.0 * fixed.mode.eta * fixed.mode.Delta);
  out.ion.Omega = s.rest_energy() / fixed.hbar;
  out.ion.nu = fixed.nu;
  out.ion.Delta_3 = fixed.Delta_3;
  out.ion.hbar = fixed.hbar;
  if (out.ion.mode.Omega_tilde > fixed.max_drive) {
    out.feasible = false;
    out.notes.push_back(fixed_note("Omega_tilde", out.ion.mode.Omega_tilde, fixed.max_drive));
  }
  if (out.ion.Omega > fixed.max_drive) {
    out.feasible = false;
    out.notes.push_back(fixed_note("Omega", out.ion.Omega, fixed.max_drive));
  }
  return out;
}

IonInversion ion_from_sim(const KleinParams& kp, const IonFixed& fixed) {
  kp.validate();
  IonInversion out = ion_from_sim(kp.base, fixed);
  out.ion.Omega_0 = kp.alpha * fixed.mode.Delta / (fixed.hbar * fixed.mode.eta);
  if (out.ion.Omega_0 > fixed.max_drive) {
    out.feasible = false;
    out.notes.push_back(fixed_note("Omega_0", out.ion.Omega_0, fixed.max_drive));
  }
  return out;
}

IonInversion ion_from_sim(const BagParams& bp, const IonFixed& fixed) {
  bp.validate();
  if (!(fixed.Delta_3 > 0.0)) throw ConfigError("ion_from_sim: Delta_3 must be positive");
  IonInversion out = ion_from_sim(bp.base, fixed);
  out.ion.Omega_3 =
      fixed.mode.Delta * std::sqrt(bp.V0 * fixed.hbar * fixed.Delta_3) / (fixed.hbar * fixed.mode.eta);
  if (out.ion.Omega_3 > fixed.max_drive) {
    out.feasible = false;
    out.notes.push_back(fixed_note("Omega_3", out.ion.Omega_3, fixed.max_drive));
  }
  return out;
}

real zb_ion_frequency(real N, const IonParams& ip) {
  if (!(N >= 0.0)) throw DomainError("zb_ion_frequency: N must be non-negative");
  const real g = ip.mode.eta * ip.mode.Omega_tilde;
  return 2.0 * std::sqrt(N * g * g + ip.Omega * ip.Omega);
}

ValidityReport validity_check(const IonParams& ip, int n_max_phonons) {
  ip.validate();
  if (n_max_phonons < 1) throw ConfigError("validity_check: n_max_phonons must be >= 1");
  ValidityReport rep;
  rep.eta = ip.mode.eta;
  for (const auto* m : {&ip.coupling_cm(), &ip.coupling_st(), &ip.coupling_r()}) {
    rep.eta = std::max(rep.eta, m->eta);
  }
  rep.lamb_dicke_ok = rep.eta <= lamb_dicke_limit;
  if (!rep.lamb_dicke_ok) {
    rep.notes.push_back("eta above the Lamb-Dicke limit 0.1: sideband Hamiltonians not justified");
  }
  const real drive = ip.coupling_cm().eta * ip.Omega_3 * 2.0 * std::sqrt(static_cast<real>(n_max_phonons));
  if (drive > 0.0) {
    rep.dispersive_ratio = ip.Delta_3 / drive;
  } else {
    rep.dispersive_ratio = std::numeric_limits<real>::infinity();
    rep.notes.push_back("no potential drive: dispersive condition not applicable");
  }
  rep.dispersive_ok = rep.dispersive_ratio >= dispersive_margin;
  if (!rep.dispersive_ok) {
    std::ostringstream os;
    os << "dispersive ratio " << rep.dispersive_ratio << " < " << dispersive_margin
       << ": raise Delta_3 to at least " << dispersive_margin * drive;
    rep.notes.push_back(os.str());
  }
  return rep;
}

IonHamiltonian build_ion_hamiltonian(IonModel model, const IonParams& ip) {
  ip.validate();
  IonHamiltonian h;
  h.model = model;
  auto add = [&](std::string spin, std::string mode, real coeff, MatXc m) {
    h.terms.push_back(IonTerm{std::move(spin), std::move(mode), coeff, std::move(m)});
  };
  switch (model) {
    case IonModel::dirac3p1: {
      const real c = ip.mode.speed_of_light();
      add("sigma^ad_x + sigma^bc_x", "p_x", c, level_pauli('a', 'd', 'x') + level_pauli('b', 'c', 'x'));
      add("sigma^ad_y - sigma^bc_y", "p_y", c, level_pauli('a', 'd', 'y') - level_pauli('b', 'c', 'y'));
      add("sigma^ac_x - sigma^bd_x", "p_z", c, level_pauli('a', 'c', 'x') - level_pauli('b', 'd', 'x'));
      add("sigma^ac_y + sigma^bd_y", "1", ip.hbar * ip.Omega,
          level_pauli('a', 'c', 'y') + level_pauli('b', 'd', 'y'));
      break;
    }
    case IonModel::klein2p1: {
      const auto& cm = ip.coupling_cm();
      add("sigma_x,1", "p_cm", cm.speed_of_light(), kron_ops("x1"));
      add("sigma_y,1", "p_st", ip.coupling_st().speed_of_light(), kron_ops("y1"));
      add("sigma_z,1", "1", ip.hbar * ip.Omega, kron_ops("z1"));
      add("sigma_x,2", "x_cm", ip.hbar * cm.eta * ip.Omega_0 / cm.Delta, kron_ops("1x"));
      break;
    }
    case IonModel::bag: {
      const auto& cm = ip.coupling_cm();
      add("sigma_x,1 - sigma_x,3", "P_cm", cm.speed_of_light(), kron_ops("x11") - kron_ops("11x"));
      add("sigma_x,1 + sigma_x,3", "p_r", ip.coupling_r().speed_of_light(),
          kron_ops("x11") + kron_ops("11x"));
      add("sigma_y,1", "1", ip.hbar * ip.Omega, kron_ops("y11"));
      add("sigma_y,3", "1", ip.hbar * ip.Omega, kron_ops("11y"));
      add("sigma_x,2", "Q_cm", ip.hbar * cm.eta * ip.Omega_3 / cm.Delta, kron_ops("1x1"));
      add("sigma_z,2", "1", ip.hbar * ip.Delta_3, kron_ops("1z1"));
      break;
    }
  }
  return h;
}

std::vector<IonTerm> model_terms(const IonHamiltonian& h) {
  std::vector<IonTerm> out;
  switch (h.model) {
    case IonModel::dirac3p1:
      return h.terms;
    case IonModel::klein2p1: {
      const Vec2c plus = Vec2c(1.0, 1.0) / std::sqrt(2.0);
      for (const auto& t : h.terms) {
        IonTerm m = t;
        m.spin_matrix = project_ion(t.spin_matrix, 2, 1, plus);
        if (t.mode == "p_cm") m.mode = "p_x";
        if (t.mode == "p_st") m.mode = "p_y";
        if (t.mode == "x_cm") {
          m.mode = "x";
          m.spin = "1";
        }
        out.push_back(std::move(m));
      }
      return out;
    }
    case IonModel::bag: {
      const Vec2c up(1.0, 0.0);
      real g = 0.0, detuning = 0.0;
      for (const auto& t : h.terms) {
        if (t.spin == "sigma_x,2") {
          g = t.coefficient;
          continue;
        }
        if (t.spin == "sigma_z,2") {
          detuning = t.coefficient;  // constant shift of the + state, dropped
          continue;
        }
        IonTerm m = t;
        m.spin_matrix = project_ion(t.spin_matrix, 3, 1, up);
        if (t.mode == "P_cm") m.mode = "p_r";
        if (t.mode == "p_r") m.mode = "P_cm/2";
        out.push_back(std::move(m));
      }
      if (g != 0.0) {
        if (!(detuning > 0.0)) throw ConfigError("model_terms: dispersive limit needs Delta_3 > 0");
        out.push_back(IonTerm{"1", "x_r^2", g * g / detuning, MatXc::Identity(4, 4)});
      }
      return out;
    }
  }
  return out;
}

MatXc evaluate_terms(const std::vector<IonTerm>& terms,
                     const std::vector<std::pair<std::string, real>>& values) {
  if (terms.empty()) return {};
  MatXc h = MatXc::Zero(terms.front().spin_matrix.rows(), terms.front().spin_matrix.cols());
  for (const auto& t : terms) {
    real v = 1.0;
    if (t.mode != "1") {
      bool found = false;
      for (const auto& [name, value] : values) {
        if (name == t.mode) {
          v = value;
          found = true;
        }
      }
      if (!found) throw UsageError("evaluate_terms: no value for mode operator " + t.mode);
    }
    h += t.coefficient * v * t.spin_matrix;
  }
  return h;
}

NormalModes normal_modes_3ions(const Vec3& x, const Vec3& p) {
  NormalModes nm;
  const real s3 = std::sqrt(3.0), s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  nm.matrix << 1 / s3, 1 / s3, 1 / s3,
               -1 / s2, 0, 1 / s2,
               1 / s6, -2 / s6, 1 / s6;
  nm.Q = nm.matrix * x;
  nm.P = nm.matrix * p;
  return nm;
}

}  // namespace diracsim
