#ifndef DIRACSIM_EXPERIMENT_HPP
#define DIRACSIM_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "diracsim/config.hpp"

namespace diracsim {

struct ManifestFile {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Everything an experiment wrote, with content hashes and summary scalars.
struct Manifest {
  std::string kind;
  std::string config_sha256;
  std::filesystem::path out_dir;
  std::vector<ManifestFile> files;
  std::map<std::string, double> summary;
  std::vector<std::string> notes;

  /// Deterministic JSON text (sorted keys, no timestamps).
  std::string to_json() const;
  /// Writes manifest.json into out_dir (not listed in `files`).
  void save() const;
};

std::string sha256_hex(std::string_view bytes);

/// Runs the experiment described by a validated config, writing dumps and
/// CSVs into cfg.out_dir. Module errors propagate with the experiment name
/// prefixed; NumericalGuardError keeps its type.
Manifest run_experiment(const ExperimentConfig& cfg);

/// Converts every rank-2 real dump of the manifest into a whitespace-separated
/// matrix (<name>.dat, gnuplot "matrix nonuniform" layout with axis values in
/// the first row and column) and writes plot_README.txt describing the files.
/// Returns the manifest extended with the new files and saves it.
Manifest emit_plot_data(const Manifest& m);

}  // namespace diracsim

#endif  // DIRACSIM_EXPERIMENT_HPP
