#ifndef DIRACSIM_CONFIG_HPP
#define DIRACSIM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "diracsim/types.hpp"

namespace diracsim {

enum class ExperimentKind { zitterbewegung, klein1d, klein2d, landau, bag, ion_map };

std::string to_string(ExperimentKind kind);
/// Accepts the subcommand spelling ("ion-map" etc.). Throws ConfigError.
ExperimentKind parse_kind(const std::string& name);
std::vector<std::string> experiment_names();

using ConfigValue = std::variant<bool, long long, double, std::string, std::vector<double>>;

/// Validation failure carrying every problem found, not only the first.
class ConfigErrors : public ConfigError {
 public:
  explicit ConfigErrors(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// Fully validated experiment description; every schema key of the kind is
/// present (defaults filled in).
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::zitterbewegung;
  std::map<std::string, ConfigValue> values;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 0;

  real real_value(const std::string& key) const;
  long long int_value(const std::string& key) const;
  bool bool_value(const std::string& key) const;
  const std::string& string_value(const std::string& key) const;
  const std::vector<double>& list_value(const std::string& key) const;

  /// Sorted "key = value" lines with round-trip float formatting; the output
  /// directory is left out so reruns elsewhere hash identically.
  std::string canonical() const;
};

/// Parses a flat YAML mapping ("key: value", lists as [a, b, c]). `overrides`
/// are "key=value" strings applied on top of the document (flags win).
/// `kind_hint` fills in or must match the document's `kind`.
/// Throws ConfigErrors listing all problems.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {},
                              const std::string& kind_hint = {});

}  // namespace diracsim

#endif  // DIRACSIM_CONFIG_HPP
