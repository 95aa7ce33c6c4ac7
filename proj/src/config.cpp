#include "diracsim/config.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace diracsim {

namespace {

enum class Type { boolean, integer, number, text, list };

using Check = std::function<std::optional<std::string>(const ConfigValue&)>;

struct KeySpec {
  std::string name;
  Type type;
  std::optional<ConfigValue> fallback;  // nullopt = required
  Check check;
};

const char* type_name(Type t) {
  switch (t) {
    case Type::boolean: return "a boolean";
    case Type::integer: return "an integer";
    case Type::number: return "a number";
    case Type::text: return "a string";
    case Type::list: return "a list of numbers";
  }
  return "?";
}

Check positive() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const real x = std::holds_alternative<double>(v) ? std::get<double>(v) : static_cast<real>(std::get<long long>(v));
    if (!(x > 0.0)) return "must be positive";
    return std::nullopt;
  };
}

Check non_negative() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const real x = std::holds_alternative<double>(v) ? std::get<double>(v) : static_cast<real>(std::get<long long>(v));
    if (!(x >= 0.0)) return "must be non-negative";
    return std::nullopt;
  };
}

Check unit_interval() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const real x = std::get<double>(v);
    if (!(x >= 0.0 && x <= 1.0)) return "must lie in [0, 1]";
    return std::nullopt;
  };
}

Check power_of_two() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const long long n = std::get<long long>(v);
    if (n < 8 || !std::has_single_bit(static_cast<unsigned long long>(n))) {
      return "must be a power of two >= 8";
    }
    return std::nullopt;
  };
}

Check at_least(long long lo) {
  return [lo](const ConfigValue& v) -> std::optional<std::string> {
    if (std::get<long long>(v) < lo) return "must be at least " + std::to_string(lo);
    return std::nullopt;
  };
}

Check sign() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const long long s = std::get<long long>(v);
    if (s != 1 && s != -1) return "must be +1 or -1";
    return std::nullopt;
  };
}

Check one_of(std::vector<std::string> options) {
  return [options](const ConfigValue& v) -> std::optional<std::string> {
    for (const auto& o : options)
      if (std::get<std::string>(v) == o) return std::nullopt;
    std::string msg = "must be one of";
    for (const auto& o : options) msg += " " + o;
    return msg;
  };
}

Check ascending_times() {
  return [](const ConfigValue& v) -> std::optional<std::string> {
    const auto& l = std::get<std::vector<double>>(v);
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!(l[i] >= 0.0)) return "times must be non-negative";
      if (i > 0 && !(l[i] > l[i - 1])) return "times must be strictly ascending";
    }
    return std::nullopt;
  };
}

KeySpec num(std::string name, std::optional<double> fallback, Check check = {}) {
  return {std::move(name), Type::number,
          fallback ? std::optional<ConfigValue>(*fallback) : std::nullopt, std::move(check)};
}
KeySpec integer(std::string name, std::optional<long long> fallback, Check check = {}) {
  return {std::move(name), Type::integer,
          fallback ? std::optional<ConfigValue>(*fallback) : std::nullopt, std::move(check)};
}
KeySpec list(std::string name, std::optional<std::vector<double>> fallback, Check check = {}) {
  return {std::move(name), Type::list,
          fallback ? std::optional<ConfigValue>(*fallback) : std::nullopt, std::move(check)};
}
KeySpec text(std::string name, std::string fallback, Check check = {}) {
  return {std::move(name), Type::text, ConfigValue(std::move(fallback)), std::move(check)};
}
KeySpec flag(std::string name, bool fallback) {
  return {std::move(name), Type::boolean, ConfigValue(fallback), {}};
}

std::vector<KeySpec> schema(ExperimentKind kind) {
  std::vector<KeySpec> s{text("kind", ""), text("out", "out"), integer("seed", 0, at_least(0))};
  auto add = [&](std::initializer_list<KeySpec> keys) { s.insert(s.end(), keys); };
  switch (kind) {
    case ExperimentKind::zitterbewegung:
      add({num("c", 1.0, positive()), num("m", 0.5, non_negative()),
           integer("n_points", 1024, power_of_two()), num("x_min", -150.0), num("x_max", 150.0),
           num("x0", 0.0), num("sigma", 10.0, positive()), num("p0", 0.0),
           num("t_end", 60.0, positive()), integer("n_samples", 241, at_least(64))});
      break;
    case ExperimentKind::klein1d:
      add({num("c", 1.0, positive()), num("m", 0.5, non_negative()), num("alpha", 1.0, non_negative()),
           num("x_center", 0.0), num("p_y", 0.0), integer("n_points", 2048, power_of_two()),
           num("x_min", -160.0), num("x_max", 110.0), num("x0", -40.0),
           num("sigma", 5.0, positive()), num("p0", 2.0), num("t_end", 50.0, positive()),
           num("dt", std::nullopt, positive()), list("t_snapshots", std::vector<double>{}, ascending_times())});
      break;
    case ExperimentKind::klein2d:
      add({num("c", 1.0, positive()), num("m", 0.5, non_negative()), num("alpha", 1.0, non_negative()),
           num("x_center", 0.0), integer("nx", 2048, power_of_two()), integer("ny", 64, power_of_two()),
           num("x_min", -200.0), num("x_max", 120.0), num("y_half_width", 16.0 * std::numbers::pi, positive()),
           num("x0", -40.0), num("sigma_x", 5.0, positive()), num("p0", 2.0),
           num("p_y_center", 0.0), num("sigma_p_y", 0.5, positive()), flag("uniform_p_y", false),
           num("dt", std::nullopt, positive()), list("t_snapshots", std::nullopt, ascending_times()),
           text("method", "decomposed", one_of({"decomposed", "direct"}))});
      break;
    case ExperimentKind::landau:
      add({num("c", 1.0, positive()), num("m", 0.5, non_negative()), integer("n_max", 64, at_least(2)),
           list("levels", std::vector<double>{1, 2, 3}), integer("sign", 1, sign()),
           integer("axis_points", 128, power_of_two()), num("half_width", 7.0, positive()),
           num("threshold", 1e-12, positive()), num("max_spread", std::numbers::pi / 2, positive()),
           num("damping", 0.0, unit_interval()), num("gamma_t", 0.0, non_negative())});
      break;
    case ExperimentKind::bag:
      add({num("c", 1.0, positive()), num("m", 1.0, non_negative()), num("V0", 0.5, non_negative()),
           num("P_cm", 2.0), integer("n_points", 2048, power_of_two()),
           num("x_half_width", 30.0, positive()), num("absorber_start", 15.0, non_negative()),
           num("x0", 0.0), num("sigma", 3.0, positive()), list("p_r0", std::vector<double>{0, 2, 0, 2}),
           list("pi_sign", std::vector<double>{1, 1, -1, -1}), num("t_end", 60.0, positive()),
           num("dt", std::nullopt, positive()), num("snapshot_dt", 0.5, positive())});
      break;
    case ExperimentKind::ion_map:
      add({num("eta", 0.05, positive()), num("Delta", 1.0, positive()),
           num("Omega_tilde", 10.0, positive()), num("Omega", 1.0, non_negative()),
           num("nu", 1.0, non_negative()), num("Omega_0", 0.0, non_negative()),
           num("Omega_3", 0.0, non_negative()), num("Delta_3", 0.0, non_negative()),
           num("hbar", 1.0, positive()), integer("n_max_phonons", 25, at_least(1)),
           num("n_phonons", 0.0, non_negative()), num("P_cm", 2.0)});
      break;
  }
  return s;
}

std::optional<ConfigValue> convert(const YAML::Node& node, Type type) {
  try {
    switch (type) {
      case Type::boolean:
        if (!node.IsScalar()) return std::nullopt;
        return ConfigValue(node.as<bool>());
      case Type::integer: {
        if (!node.IsScalar()) return std::nullopt;
        return ConfigValue(node.as<long long>());
      }
      case Type::number: {
        if (!node.IsScalar()) return std::nullopt;
        const double v = node.as<double>();
        if (!std::isfinite(v)) return std::nullopt;
        return ConfigValue(v);
      }
      case Type::text:
        if (!node.IsScalar()) return std::nullopt;
        return ConfigValue(node.as<std::string>());
      case Type::list: {
        if (!node.IsSequence()) return std::nullopt;
        std::vector<double> out;
        for (const auto& item : node) {
          const double v = item.as<double>();
          if (!std::isfinite(v)) return std::nullopt;
          out.push_back(v);
        }
        return ConfigValue(std::move(out));
      }
    }
  } catch (const YAML::Exception&) {
  }
  return std::nullopt;
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string format_value(const ConfigValue& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          std::string s = "[";
          for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_real(x[i]);
          return s + "]";
        }
      },
      v);
}

void cross_checks(const ExperimentConfig& cfg, std::vector<std::string>& errors) {
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) errors.push_back(msg);
  };
  switch (cfg.kind) {
    case ExperimentKind::zitterbewegung:
    case ExperimentKind::klein1d:
      need(cfg.real_value("x_min") < cfg.real_value("x_max"), "x_min: must be below x_max");
      break;
    case ExperimentKind::klein2d:
      need(cfg.real_value("x_min") < cfg.real_value("x_max"), "x_min: must be below x_max");
      need(!cfg.list_value("t_snapshots").empty(), "t_snapshots: at least one time required");
      if (cfg.string_value("method") == "direct") {
        need(cfg.int_value("nx") <= 512 && cfg.int_value("ny") <= 512,
             "method: direct evolution is limited to 512 x 512 grids");
      }
      break;
    case ExperimentKind::landau:
      for (double level : cfg.list_value("levels")) {
        const bool integral = level == std::floor(level) && level >= 1;
        need(integral, "levels: entries must be integers >= 1");
        if (integral) {
          need(2 * static_cast<long long>(level) <= cfg.int_value("n_max"),
               "levels: level " + format_real(level) + " needs n_max >= " + format_real(2 * level));
        }
      }
      need(!cfg.list_value("levels").empty(), "levels: at least one level required");
      break;
    case ExperimentKind::bag: {
      const auto& p = cfg.list_value("p_r0");
      const auto& s = cfg.list_value("pi_sign");
      need(!p.empty(), "p_r0: at least one case required");
      need(p.size() == s.size(), "pi_sign: must have as many entries as p_r0");
      need(p.size() <= 26, "p_r0: at most 26 cases");
      for (double v : s) need(v == 1.0 || v == -1.0, "pi_sign: entries must be +1 or -1");
      const real start = cfg.real_value("absorber_start");
      need(start == 0.0 || start < cfg.real_value("x_half_width"),
           "absorber_start: must be 0 (off) or inside x_half_width");
      break;
    }
    case ExperimentKind::ion_map:
      if (cfg.real_value("Omega_3") > 0.0) {
        need(cfg.real_value("Delta_3") > 0.0, "Delta_3: must be positive when Omega_3 is set");
      }
      break;
  }
}

}  // namespace

ConfigErrors::ConfigErrors(std::vector<std::string> errors)
    : ConfigError([&] {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        return msg;
      }()),
      errors_(std::move(errors)) {}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::zitterbewegung: return "zitterbewegung";
    case ExperimentKind::klein1d: return "klein1d";
    case ExperimentKind::klein2d: return "klein2d";
    case ExperimentKind::landau: return "landau";
    case ExperimentKind::bag: return "bag";
    case ExperimentKind::ion_map: return "ion-map";
  }
  return "?";
}

std::vector<std::string> experiment_names() {
  return {"zitterbewegung", "klein1d", "klein2d", "landau", "bag", "ion-map"};
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::zitterbewegung, ExperimentKind::klein1d, ExperimentKind::klein2d,
                 ExperimentKind::landau, ExperimentKind::bag, ExperimentKind::ion_map}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown experiment kind '" + name + "'");
}

namespace {

template <typename T>
const T& typed(const std::map<std::string, ConfigValue>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) throw UsageError("config: no key '" + key + "'");
  if (!std::holds_alternative<T>(it->second)) throw UsageError("config: key '" + key + "' has another type");
  return std::get<T>(it->second);
}

}  // namespace

real ExperimentConfig::real_value(const std::string& key) const { return typed<double>(values, key); }
long long ExperimentConfig::int_value(const std::string& key) const { return typed<long long>(values, key); }
bool ExperimentConfig::bool_value(const std::string& key) const { return typed<bool>(values, key); }
const std::string& ExperimentConfig::string_value(const std::string& key) const {
  return typed<std::string>(values, key);
}
const std::vector<double>& ExperimentConfig::list_value(const std::string& key) const {
  return typed<std::vector<double>>(values, key);
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : values) {
    if (k != "out") out += k + " = " + format_value(v) + "\n";
  }
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides,
                              const std::string& kind_hint) {
  std::vector<std::string> errors;
  std::map<std::string, YAML::Node> raw;
  std::vector<std::string> order;

  try {
    const YAML::Node doc = YAML::Load(text);
    if (doc.IsMap()) {
      for (const auto& kv : doc) {
        const auto key = kv.first.as<std::string>();
        if (!raw.count(key)) order.push_back(key);
        raw[key] = kv.second;
      }
    } else if (!doc.IsNull()) {
      errors.push_back("document: expected a key-value mapping");
    }
  } catch (const YAML::Exception& e) {
    throw ConfigErrors({std::string("document: ") + e.what()});
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) {
      errors.push_back("--set " + o + ": expected key=value");
      continue;
    }
    const std::string key = o.substr(0, eq);
    try {
      if (!raw.count(key)) order.push_back(key);
      raw[key] = YAML::Load(o.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      errors.push_back("--set " + key + ": " + e.what());
    }
  }

  std::string kind_name = kind_hint;
  if (raw.count("kind")) {
    const auto doc_kind = convert(raw["kind"], Type::text);
    if (!doc_kind) {
      errors.push_back("kind: must be a string");
    } else if (!kind_hint.empty() && std::get<std::string>(*doc_kind) != kind_hint) {
      errors.push_back("kind: document says '" + std::get<std::string>(*doc_kind) +
                       "' but the subcommand is '" + kind_hint + "'");
    } else {
      kind_name = std::get<std::string>(*doc_kind);
    }
  }
  if (kind_name.empty()) {
    errors.push_back("kind: missing");
    throw ConfigErrors(std::move(errors));
  }
  ExperimentConfig cfg;
  try {
    cfg.kind = parse_kind(kind_name);
  } catch (const ConfigError& e) {
    errors.push_back(std::string("kind: ") + e.what());
    throw ConfigErrors(std::move(errors));
  }

  const auto keys = schema(cfg.kind);
  std::set<std::string> known;
  for (const auto& spec : keys) {
    known.insert(spec.name);
    const auto it = raw.find(spec.name);
    if (it == raw.end()) {
      if (spec.fallback) {
        cfg.values[spec.name] = *spec.fallback;
      } else {
        errors.push_back(spec.name + ": required field missing");
      }
      continue;
    }
    auto value = convert(it->second, spec.type);
    if (!value && spec.type == Type::number) {
      // integers are accepted where numbers are expected
      if (auto i = convert(it->second, Type::integer)) value = ConfigValue(static_cast<double>(std::get<long long>(*i)));
    }
    if (!value) {
      errors.push_back(spec.name + ": must be " + type_name(spec.type));
      continue;
    }
    if (spec.check) {
      if (auto problem = spec.check(*value)) {
        errors.push_back(spec.name + ": " + *problem);
        continue;
      }
    }
    cfg.values[spec.name] = std::move(*value);
  }
  for (const auto& key : order) {
    if (!known.count(key)) errors.push_back(key + ": unknown key for " + to_string(cfg.kind));
  }
  cfg.values["kind"] = to_string(cfg.kind);
  if (errors.empty()) cross_checks(cfg, errors);
  if (!errors.empty()) throw ConfigErrors(std::move(errors));
  cfg.out_dir = cfg.string_value("out");
  cfg.seed = static_cast<std::uint64_t>(cfg.int_value("seed"));
  return cfg;
}

}  // namespace diracsim
