// Command-line driver: runs experiment configurations, built-in presets,
// and plot-script emission.  Exit statuses: 0 success, 1 declared gate
// failed, 2 configuration error, 3 solver abort.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kgh/dynamics.hpp"
#include "kgh/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kgh::ConfigError("cannot read config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon equation with a fractional-potential nonlinearity: "
               "frequency-splitting experiments and inequality probes"};
  app.require_subcommand(1);

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Execute a JSON experiment configuration");
  run->add_option("config", config_path, "path to the configuration file")->required();

  std::string preset_name;
  std::vector<std::string> overrides;
  CLI::App* preset = app.add_subcommand(
      "preset",
      "Run a built-in experiment: recombine, exponents, strichartz-slope, hls, "
      "commutator, lemma6, bootstrap-table");
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--override", overrides,
                     "dotted.path=value assignment applied to the preset document");

  std::string csv_path;
  CLI::App* plots = app.add_subcommand("plots", "Emit gnuplot scripts for a report CSV");
  plots->add_option("csv", csv_path, "path to a CSV written by run/preset")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return kgh::run_experiment(kgh::parse_config(read_file(config_path)));
    }
    if (preset->parsed()) {
      std::string document = kgh::preset_json(preset_name);
      for (const std::string& assignment : overrides)
        document = kgh::apply_override(document, assignment);
      return kgh::run_experiment(kgh::parse_config(document));
    }
    if (plots->parsed()) {
      for (const std::string& script : kgh::emit_plots(csv_path)) std::cout << script << "\n";
      return 0;
    }
  } catch (const kgh::ConfigError& error) {
    std::cerr << "config error: " << error.what() << "\n";
    return 2;
  } catch (const kgh::SolverAbort& error) {
    std::cerr << "solver abort: " << error.what() << "\n";
    return 3;
  }
  return 0;
}
