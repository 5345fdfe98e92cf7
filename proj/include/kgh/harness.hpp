#pragma once

// Experiment configuration, execution, and plot-script emission behind the
// command-line driver.  A configuration is a JSON document with flat
// sections mirroring the library layers:
//
//   {
//     "grid":   {"n": 32, "L": 6.2832, "gamma": 2.5},
//     "solver": {"dt": 0.015625, "T": 0.5},
//     "split":  {"J": 3, "s": 0.7},                //  or "J_list": [3,4,5]
//     "seed":   1,
//     "output": "out",
//     "probes": { "recombine": {}, "hls": {"p": 2.0, "count": 100}, ... },
//     "gates":  { "exponent": {"s": 0.65, "r1": 3.3, "r2": 40.0} }
//   }
//
// Unknown keys are rejected at every level, and every referenced
// module-level invariant (grid admissibility, solver step contract, dyadic
// ranges, exponent windows) is re-validated before anything runs.  Presence
// of a probe object enables that probe; "split" is required exactly when an
// enabled probe consumes it.  Exit statuses used by the driver:
//   0  success,
//   1  a declared gate failed,
//   2  configuration error,
//   3  solver abort (non-finite state mid-run).

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgh {

// Invalid configuration input; the message carries a field path or, for
// syntax errors, the parser's position diagnostic.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExponentsParams {};  // closed-form table of the grid's gamma

struct HlsParams {
  double p = 2.0;
  int count = 100;
};

struct CommutatorParams {
  double r = 4.0;
  std::vector<int> j_list{3, 4, 5, 6};
};

struct SlopeParams {
  int j = 5;
  double r = 4.0;
  std::vector<double> h_list{1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0};
  int trials = 8;
  double T = 1.5;  // pre-wrap window of its own, independent of solver.T
};

struct Lemma6Params {
  double r1 = 3.3;
  double r2 = 40.0;
  double delta = 0.05;  // spectral-envelope offset of the synthetic data
};

struct BootstrapParams {
  double r1 = 3.3;
  double r2 = 40.0;
  double es = 1.0;  // data size entering the lifetime formula
};

struct RecombineParams {};  // uses grid + solver + split

struct GateParams {
  double s = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
};

struct ExperimentConfig {
  // grid
  int n = 32;
  double L = 2.0 * 3.14159265358979323846;
  double gamma = 2.5;
  // solver
  double dt = 1.0 / 64.0;
  double T = 0.5;
  // split (empty / NaN when the section is absent)
  std::vector<int> J_list;
  double s = std::numeric_limits<double>::quiet_NaN();

  std::uint64_t seed = 1;
  std::string output_dir = "kgh-out";

  std::optional<ExponentsParams> exponents;
  std::optional<HlsParams> hls;
  std::optional<CommutatorParams> commutator;
  std::optional<SlopeParams> strichartz_slope;
  std::optional<Lemma6Params> lemma6;
  std::optional<BootstrapParams> bootstrap_table;
  std::optional<RecombineParams> recombine;
  std::optional<GateParams> exponent_gate_declared;

  // normalized echo of the source document, embedded in the manifest
  std::string source_json;
};

// Parses and fully validates a configuration document.  Throws ConfigError
// on syntax errors, unknown keys, type mismatches, and any violated
// module-level invariant.
ExperimentConfig parse_config(const std::string& json_text);

// The built-in experiment documents, one per pipeline pillar: "recombine",
// "exponents", "strichartz-slope", "hls", "commutator", "lemma6",
// "bootstrap-table".  Unknown names are rejected.
std::string preset_json(const std::string& name);

// Applies one `dotted.path=value` assignment to a JSON document (value
// parsed as JSON when possible, else taken as a string) and returns the
// updated document.  Intermediate objects are created as needed; whether
// the resulting key is legal is decided by parse_config.
std::string apply_override(const std::string& json_text, const std::string& assignment);

// Runs every enabled probe, writing one CSV per probe plus manifest.json
// into the output directory.  Returns 0 on success or 1 when a declared
// gate fails; solver blow-ups propagate as SolverAbort.
int run_experiment(const ExperimentConfig& config);

// Reads a CSV produced by run_experiment and writes one gnuplot script per
// sweep group next to it (log-log axes for slope sweeps, a warning comment
// when there is nothing to plot).  Returns the script paths.  Malformed
// CSV input throws ConfigError.
std::vector<std::string> emit_plots(const std::string& csv_path);

}  // namespace kgh
