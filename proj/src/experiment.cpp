#include "diracsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include <json.hpp>

#include "diracsim/bag.hpp"
#include "diracsim/dirac.hpp"
#include "diracsim/dump.hpp"
#include "diracsim/ion.hpp"
#include "diracsim/klein.hpp"
#include "diracsim/landau.hpp"

namespace diracsim {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = kind;
  j["config_sha256"] = config_sha256;
  auto files_json = nlohmann::ordered_json::array();
  for (const auto& f : files) {
    files_json.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  j["files"] = files_json;
  nlohmann::ordered_json s = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) s[k] = v;
  j["summary"] = s;
  j["notes"] = notes;
  return j.dump(2) + "\n";
}

void Manifest::save() const {
  std::filesystem::create_directories(out_dir);
  std::ofstream os(out_dir / "manifest.json", std::ios::binary);
  const auto text = to_json();
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!os) throw std::runtime_error("manifest: cannot write " + (out_dir / "manifest.json").string());
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Collects outputs for one run and records them in the manifest.
class Writer {
 public:
  explicit Writer(Manifest& m) : m_(m) { std::filesystem::create_directories(m.out_dir); }

  void bytes(const std::string& rel, const std::string& data) {
    const auto path = m_.out_dir / rel;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    os.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!os) throw std::runtime_error("cannot write " + path.string());
    m_.files.push_back({rel, sha256_hex(data), data.size()});
  }

  void dump(const std::string& rel, const GridDump& d) { bytes(rel, serialize_dump(d)); }

  void csv(const std::string& rel, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + fmt(row[i]);
      out += "\n";
    }
    bytes(rel, out);
  }

 private:
  Manifest& m_;
};

std::string tag(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

SimParams base_params(const ExperimentConfig& cfg) {
  SimParams s{cfg.real_value("c"), cfg.real_value("m"), Vec3::UnitZ()};
  s.validate();
  return s;
}

KleinParams klein_params(const ExperimentConfig& cfg) {
  KleinParams kp{base_params(cfg), cfg.real_value("alpha"), cfg.real_value("x_center")};
  kp.validate();
  return kp;
}

void run_zitterbewegung(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  const auto grid = make_grid(static_cast<std::size_t>(cfg.int_value("n_points")),
                              cfg.real_value("x_min"), cfg.real_value("x_max"));
  // Mass along sigma_y so that the spin-up packet mixes both energy branches.
  const SimParams params{cfg.real_value("c"), cfg.real_value("m"), Vec3::UnitY()};
  params.validate();
  const real p0 = cfg.real_value("p0");
  SpinorField1D::Amplitudes a = SpinorField1D::Amplitudes::Zero(static_cast<Eigen::Index>(grid.size()), 2);
  a.col(0) = gaussian_packet(grid, cfg.real_value("x0"), cfg.real_value("sigma"), p0);
  const SpinorField1D psi0 = SpinorField1D(grid, a).normalized();

  const auto n = static_cast<std::size_t>(cfg.int_value("n_samples"));
  const real t_end = cfg.real_value("t_end");
  std::vector<real> times(n), means(n);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < n; ++k) {
    times[k] = t_end * static_cast<real>(k) / static_cast<real>(n - 1);
    const auto psi = evolve_free(psi0, params, times[k]);
    means[k] = mean_position(psi);
    rows.push_back({times[k], means[k], psi.norm()});
    check_boundary_leak(grid, psi.density(), 1e-6, "zitterbewegung");
  }
  w.csv("trace.csv", {"t", "mean_x", "norm"}, rows);
  w.dump("psi_final.dump", to_dump(evolve_free(psi0, params, t_end)));

  m.summary["zb_frequency_formula"] = zb_frequency_estimate(p0, params);
  m.summary["zb_amplitude_formula"] = zb_amplitude_estimate(p0, params);
  try {
    const auto zb = measure_zb_from_trace(means, times);
    m.summary["zb_frequency"] = zb.frequency;
    m.summary["zb_amplitude"] = zb.amplitude;
  } catch (const DomainError& e) {
    m.notes.push_back(std::string("zitterbewegung not measured: ") + e.what());
  }
}

void run_klein1d(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  const auto kp = klein_params(cfg);
  const auto grid = make_grid(static_cast<std::size_t>(cfg.int_value("n_points")),
                              cfg.real_value("x_min"), cfg.real_value("x_max"));
  const auto em = effective_mass(cfg.real_value("p_y"), kp.base);
  const real sigma = cfg.real_value("sigma");
  const auto psi0 = make_klein_packet_1p1(grid, slice_params(em, kp.base.c), cfg.real_value("x0"),
                                          sigma, cfg.real_value("p0"));
  KleinSliceEvolver ev(psi0, kp, em, cfg.real_value("dt"));
  const real e0 = ev.energy();
  const real t_end = cfg.real_value("t_end");

  std::vector<real> shots = cfg.list_value("t_snapshots");
  std::size_t next_shot = 0;
  constexpr int rows = 101;
  MatXd heat(rows, static_cast<Eigen::Index>(grid.size()));
  std::vector<std::vector<double>> series;
  for (int r = 0; r < rows; ++r) {
    const real t = t_end * r / (rows - 1);
    while (next_shot < shots.size() && shots[next_shot] <= t) {
      ev.advance_to(shots[next_shot]);
      w.dump("psi_t" + tag(shots[next_shot]) + ".dump", to_dump(ev.field()));
      ++next_shot;
    }
    ev.advance_to(t);
    heat.row(r) = ev.density().transpose();
    series.push_back({t, ev.norm(), ev.energy()});
  }
  const real dt_row = t_end / (rows - 1);
  w.dump("density_xt.dump", to_dump(heat, 0.0, rows * dt_row, grid.x_min(), grid.x_max()));
  w.csv("series.csv", {"t", "norm", "energy"}, series);

  const real split = transmission_split(kp, e0, sigma);
  const real measured = measure_transmission(grid, ev.density(), split, 2.0 * sigma);
  const real formula = transmission_formula(em, kp);
  w.csv("transmission.csv", {"p_y", "T_measured", "T_formula"},
        {{cfg.real_value("p_y"), measured, formula}});
  m.summary["transmission"] = measured;
  m.summary["transmission_formula"] = formula;
  m.summary["energy_drift"] = std::abs(ev.energy() - e0);
  for (; next_shot < shots.size(); ++next_shot) {
    ev.advance_to(shots[next_shot]);
    w.dump("psi_t" + tag(shots[next_shot]) + ".dump", to_dump(ev.field()));
  }
}

/// Columns reordered from FFT order to ascending p_y.
MatXd ascending_p_y(const MatXd& fft_order) {
  const Eigen::Index ny = fft_order.cols(), half = ny / 2;
  MatXd out(fft_order.rows(), ny);
  for (Eigen::Index k = 0; k < ny; ++k) out.col(k) = fft_order.col((k + half) % ny);
  return out;
}

void run_klein2d(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  const auto kp = klein_params(cfg);
  const auto gx = make_grid(static_cast<std::size_t>(cfg.int_value("nx")), cfg.real_value("x_min"),
                            cfg.real_value("x_max"));
  const real hw = cfg.real_value("y_half_width");
  const auto gy = make_grid(static_cast<std::size_t>(cfg.int_value("ny")), -hw, hw);
  const KleinPacketSpec spec{cfg.real_value("x0"),         cfg.real_value("sigma_x"),
                             cfg.real_value("p0"),         cfg.real_value("p_y_center"),
                             cfg.real_value("sigma_p_y"), cfg.bool_value("uniform_p_y")};
  const auto psi0 = make_klein_packet(gx, gy, kp, spec);
  const real dt = cfg.real_value("dt");
  const auto& times = cfg.list_value("t_snapshots");

  std::vector<SpinorSlices2D> slices;
  std::vector<Field2D> fields;
  if (cfg.string_value("method") == "direct") {
    Field2D f = reconstruct_position_space(psi0);
    real t_prev = 0.0;
    for (real t : times) {
      if (t > t_prev) f = evolve_klein_2p1_direct(f, kp, dt, t - t_prev);
      t_prev = t;
      fields.push_back(f);
      slices.push_back(decompose_transverse(f));
    }
  } else {
    slices = evolve_klein_2p1_snapshots(psi0, kp, dt, times);
    for (const auto& s : slices) fields.push_back(reconstruct_position_space(s));
  }

  const real p_max = gy.p_max();
  std::vector<std::vector<double>> norms;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const std::string t = tag(times[i]);
    w.dump("xy_t" + t + ".dump", to_dump(fields[i].density(), gx.x_min(), gx.x_max(), gy.x_min(), gy.x_max()));
    w.dump("xpy_t" + t + ".dump", to_dump(ascending_p_y(slices[i].density()), gx.x_min(), gx.x_max(), -p_max, p_max));
    norms.push_back({times[i], fields[i].norm()});
  }
  w.csv("norm.csv", {"t", "norm"}, norms);

  // Per-slice transmission at the last snapshot.
  const auto& last = slices.back();
  const VecXd weights = last.slice_norms();
  std::vector<std::vector<double>> sweep;
  for (std::size_t k = 0; k < last.slices.size(); ++k) {
    const real wk = weights[static_cast<Eigen::Index>(k)];
    if (!(wk > 1e-12)) continue;
    const real p_y = gy.p(k);
    const auto em = effective_mass(p_y, kp.base);
    const auto slice = psi0.slices[k];
    const real e0 = klein_energy(slice.normalized(), kp, em);
    const real split = transmission_split(kp, e0, spec.sigma_x);
    try {
      const real t_meas = measure_transmission(gx, last.slices[k].density() / wk, split, 2.0 * spec.sigma_x);
      sweep.push_back({p_y, t_meas, transmission_formula(em, kp)});
    } catch (const InconclusiveError&) {
      m.notes.push_back("p_y = " + fmt(p_y) + ": lobes not separated at the last snapshot");
    }
  }
  std::sort(sweep.begin(), sweep.end());
  w.csv("transmission.csv", {"p_y", "T_measured", "T_formula"}, sweep);

  const real e_center = klein_energy(psi0.slices.front().normalized(), kp, effective_mass(0.0, kp.base));
  const auto widths = lobe_widths_2d(fields.back(), transmission_split(kp, e_center, spec.sigma_x));
  m.summary["transmitted_mass"] = widths.x.transmitted_mass;
  m.summary["reflected_mass"] = widths.x.reflected_mass;
  m.summary["transmitted_y_width"] = widths.transmitted_y_width;
  m.summary["reflected_y_width"] = widths.reflected_y_width;
  m.summary["final_norm"] = fields.back().norm();
}

void run_landau(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  const JCParams jp{cfg.real_value("c"), cfg.real_value("m"),
                    static_cast<std::size_t>(cfg.int_value("n_max"))};
  jp.validate();
  const auto axis = make_grid(static_cast<std::size_t>(cfg.int_value("axis_points")),
                              -cfg.real_value("half_width"), cfg.real_value("half_width"));
  const int sign = static_cast<int>(cfg.int_value("sign"));
  const real damping = cfg.real_value("damping");
  const real gamma_t = cfg.real_value("gamma_t");

  std::vector<std::vector<double>> report;
  for (double level : cfg.list_value("levels")) {
    const int n = static_cast<int>(level);
    auto rho = SpinOscillatorState::pure(jp.n_max, landau_state_vector(n, sign, jp));
    if (damping > 0.0) rho = amplitude_damping(rho, damping);
    const auto wig = wigner_from_density(rho, axis, axis);
    if (wig.accuracy_warning) m.notes.push_back("level " + std::to_string(n) + ": Wigner box edge not negligible");
    auto s = pseudospin_field(wig, cfg.real_value("threshold"));
    if (gamma_t > 0.0) s = dephasing_map(s, gamma_t);
    const std::string name = "level" + std::to_string(n);
    const auto lo = axis.x_min(), hi = axis.x_max();
    w.dump(name + "_angle.dump", to_dump(s.polar_angle(), lo, hi, lo, hi));
    w.dump(name + "_sz.dump", to_dump(s.sz, lo, hi, lo, hi));
    const auto wn = winding_number(s, cfg.real_value("max_spread"));
    report.push_back({level, wn.signed_degree, wn.coverings, wn.quality, wn.closure_solid_angle,
                      static_cast<double>(wn.excluded_triangles), wn.boundary_spread});
    m.summary[name + "_coverings"] = wn.coverings;
    m.summary[name + "_signed_degree"] = wn.signed_degree;
  }
  w.csv("winding.csv",
        {"level", "signed_degree", "coverings", "quality", "closure_solid_angle",
         "excluded_triangles", "boundary_spread"},
        report);
}

struct BagCase {
  std::string name;
  real p_r0;
  int pi_sign;
  BagRun run;
};

void run_bag(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  const BagParams bp{base_params(cfg), cfg.real_value("V0"), cfg.real_value("P_cm")};
  bp.validate();
  const real hw = cfg.real_value("x_half_width");
  const auto grid = make_grid(static_cast<std::size_t>(cfg.int_value("n_points")), -hw, hw);
  const real dt = cfg.real_value("dt");
  const real snap = cfg.real_value("snapshot_dt");
  BagRunOptions opts;
  opts.snapshot_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(snap / dt)));
  if (cfg.real_value("absorber_start") > 0.0) opts.absorber_start = cfg.real_value("absorber_start");
  const real t_end = cfg.real_value("t_end");

  const auto& p = cfg.list_value("p_r0");
  const auto& s = cfg.list_value("pi_sign");
  std::vector<BagCase> cases;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cases.push_back({std::string(1, static_cast<char>('a' + i)), p[i], static_cast<int>(s[i]), {}});
  }
  std::vector<std::exception_ptr> errors(cases.size());
  {
    std::vector<std::jthread> workers;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      workers.emplace_back([&, i] {
        try {
          const auto psi0 = prepare_initial(cfg.real_value("x0"), cfg.real_value("sigma"),
                                            cases[i].p_r0, cases[i].pi_sign, grid);
          cases[i].run = evolve_bag_series(psi0, bp, dt, t_end, opts);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& c : cases) {
    const auto& run = c.run;
    const MatXd heat = density_trace(run);
    // Snapshots are uniform except possibly the last one.
    const real step = run.times.size() > 1 ? run.times[1] - run.times[0] : t_end;
    w.dump("case_" + c.name + "_density.dump",
           to_dump(heat, 0.0, step * static_cast<real>(heat.rows()), grid.x_min(), grid.x_max()));
    std::vector<std::vector<double>> long_rows;
    for (std::size_t r = 0; r < run.times.size(); ++r)
      for (std::size_t j = 0; j < grid.size(); ++j)
        long_rows.push_back({run.times[r], grid.x(j), run.densities[r][static_cast<Eigen::Index>(j)]});
    w.csv("case_" + c.name + "_density.csv", {"t", "x_r", "density"}, long_rows);
    std::vector<std::vector<double>> series;
    for (std::size_t r = 0; r < run.times.size(); ++r)
      series.push_back({run.times[r], run.pi_values[r], run.energies[r], run.norms[r], run.absorbed[r]});
    w.csv("case_" + c.name + "_series.csv", {"t", "pi", "energy", "norm", "absorbed"}, series);
    w.dump("case_" + c.name + "_final.dump", to_dump(run.final_state));
    m.summary["case_" + c.name + "_tunneled_fraction"] = klein_tunneling_fraction(run, bp);
    m.summary["case_" + c.name + "_final_pi"] = run.pi_values.back();
  }
  m.summary["tunneling_radius"] = bp.tunneling_radius();
}

void run_ion_map(const ExperimentConfig& cfg, Manifest& m) {
  Writer w(m);
  IonParams ip;
  ip.mode = {cfg.real_value("eta"), cfg.real_value("Delta"), cfg.real_value("Omega_tilde")};
  ip.Omega = cfg.real_value("Omega");
  ip.nu = cfg.real_value("nu");
  ip.Omega_0 = cfg.real_value("Omega_0");
  ip.Omega_3 = cfg.real_value("Omega_3");
  ip.Delta_3 = cfg.real_value("Delta_3");
  ip.hbar = cfg.real_value("hbar");
  ip.validate();

  const auto kp = klein_from_ion(ip);
  const auto bp = bag_from_ion(ip, cfg.real_value("P_cm"));
  const auto v = validity_check(ip, static_cast<int>(cfg.int_value("n_max_phonons")));
  const real zb = zb_ion_frequency(cfg.real_value("n_phonons"), ip);

  std::vector<std::pair<std::string, double>> params{
      {"c", kp.base.c},          {"m", kp.base.m},
      {"rest_energy", kp.base.rest_energy()},
      {"alpha", kp.alpha},       {"V0", bp.V0},
      {"P_cm", bp.P_cm},         {"zb_frequency", zb},
      {"eta", v.eta},            {"dispersive_ratio", v.dispersive_ratio}};
  std::string csv = "name,value\n";
  for (const auto& [k, val] : params) {
    csv += k + "," + fmt(val) + "\n";
    m.summary[k] = val;
  }
  w.bytes("params.csv", csv);

  std::string report;
  report += "lamb_dicke: " + std::string(v.lamb_dicke_ok ? "ok" : "violated") + " (eta = " + fmt(v.eta) +
            ", limit " + fmt(lamb_dicke_limit) + ")\n";
  report += "dispersive: " + std::string(v.dispersive_ok ? "ok" : "violated") + " (ratio = " +
            fmt(v.dispersive_ratio) + ", margin " + fmt(dispersive_margin) + ")\n";
  for (const auto& [k, val] : params) report += k + " = " + fmt(val) + "\n";
  for (const auto& note : v.notes) {
    report += "note: " + note + "\n";
    m.notes.push_back(note);
  }
  w.bytes("report.txt", report);
  m.summary["lamb_dicke_ok"] = v.lamb_dicke_ok ? 1.0 : 0.0;
  m.summary["dispersive_ok"] = v.dispersive_ok ? 1.0 : 0.0;
}

}  // namespace

Manifest run_experiment(const ExperimentConfig& cfg) {
  Manifest m;
  m.kind = to_string(cfg.kind);
  m.config_sha256 = sha256_hex(cfg.canonical());
  m.out_dir = cfg.out_dir;
  const std::string ctx = m.kind + ": ";
  try {
    switch (cfg.kind) {
      case ExperimentKind::zitterbewegung: run_zitterbewegung(cfg, m); break;
      case ExperimentKind::klein1d: run_klein1d(cfg, m); break;
      case ExperimentKind::klein2d: run_klein2d(cfg, m); break;
      case ExperimentKind::landau: run_landau(cfg, m); break;
      case ExperimentKind::bag: run_bag(cfg, m); break;
      case ExperimentKind::ion_map: run_ion_map(cfg, m); break;
    }
  } catch (const NumericalGuardError& e) {
    throw NumericalGuardError(ctx + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(ctx + e.what());
  } catch (const DomainError& e) {
    throw DomainError(ctx + e.what());
  }
  std::string canonical = cfg.canonical();
  m.files.insert(m.files.begin(), {"config.txt", sha256_hex(canonical), canonical.size()});
  {
    std::ofstream os(m.out_dir / "config.txt", std::ios::binary);
    os << canonical;
  }
  m.save();
  return m;
}

Manifest emit_plot_data(const Manifest& in) {
  Manifest m = in;
  Writer w(m);
  std::string readme =
      "Plot data for " + m.kind + "\n\n"
      "Each .dat file is a whitespace-separated matrix in gnuplot \"matrix nonuniform\" layout:\n"
      "the first row holds the column count followed by the column-axis values, and every\n"
      "further row starts with its row-axis value followed by the samples.\n"
      "Example: plot 'file.dat' nonuniform matrix with image\n\n";
  for (const auto& f : in.files) {
    if (!f.path.ends_with(".dump")) continue;
    const auto d = load_field(m.out_dir / f.path);
    if (d.rank() != 2 || d.type != PayloadType::real64 || d.components != 1) continue;
    std::string out = std::to_string(d.dims[1]);
    for (std::uint64_t j = 0; j < d.dims[1]; ++j) out += " " + fmt(d.coordinate(1, j));
    out += "\n";
    for (std::uint64_t i = 0; i < d.dims[0]; ++i) {
      out += fmt(d.coordinate(0, i));
      for (std::uint64_t j = 0; j < d.dims[1]; ++j) out += " " + fmt(d.payload[i * d.dims[1] + j]);
      out += "\n";
    }
    const std::string name = f.path.substr(0, f.path.size() - 5) + ".dat";
    w.bytes(name, out);
    readme += name + ": " + std::to_string(d.dims[0]) + " x " + std::to_string(d.dims[1]) +
              ", rows " + fmt(d.axis_min[0]) + " .. " + fmt(d.axis_max[0]) + ", columns " +
              fmt(d.axis_min[1]) + " .. " + fmt(d.axis_max[1]) + "\n";
  }
  readme += "\nCSV files carry a header row naming their columns.\n";
  w.bytes("plot_README.txt", readme);
  m.save();
  return m;
}

}  // namespace diracsim
