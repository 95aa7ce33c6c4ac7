#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "diracsim/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw diracsim::ConfigError("cannot read config file " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirac-equation simulations and trapped-ion parameter maps"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  bool plots = true;
  for (const auto& name : diracsim::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "YAML config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--set", overrides, "key=value override, repeatable")->take_all();
    sub->add_flag("!--no-plot-data", plots, "skip the gnuplot matrix files");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string kind = app.get_subcommands().front()->get_name();
  try {
    if (!out_dir.empty()) overrides.push_back("out=" + out_dir);
    const auto cfg = diracsim::parse_config(read_file(config_path), overrides, kind);
    auto manifest = diracsim::run_experiment(cfg);
    if (plots) manifest = diracsim::emit_plot_data(manifest);
    std::cout << kind << ": wrote " << manifest.files.size() << " files to " << manifest.out_dir.string()
              << "\n";
    for (const auto& [key, value] : manifest.summary) std::cout << "  " << key << " = " << value << "\n";
    for (const auto& note : manifest.notes) std::cout << "  note: " << note << "\n";
    return 0;
  } catch (const diracsim::ConfigErrors& e) {
    std::cerr << "invalid configuration:\n";
    for (const auto& msg : e.errors()) std::cerr << "  " << msg << "\n";
    return 2;
  } catch (const diracsim::ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const diracsim::NumericalGuardError& e) {
    std::cerr << "numerical guard: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
