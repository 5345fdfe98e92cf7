#include "kgh/harness.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "json.hpp"
#include "kgh/dynamics.hpp"
#include "kgh/lp.hpp"
#include "kgh/probes.hpp"
#include "kgh/propagator.hpp"
#include "kgh/random_fields.hpp"
#include "kgh/report.hpp"
#include "kgh/spectral_ops.hpp"
#include "kgh/splitting.hpp"

namespace kgh {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

// --- JSON field access with path-carrying diagnostics ------------------------

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

const json& require_object(const json& value, const std::string& path) {
  if (!value.is_object()) fail(path, "must be an object");
  return value;
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* key) { return it.key() == key; });
    if (!known) fail(path, "unknown key '" + it.key() + "'");
  }
}

double read_number(const json& obj, const std::string& path, const char* key,
                   double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "must be a number");
  return v.get<double>();
}

int read_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "must be an integer");
  return v.get<int>();
}

std::vector<int> read_int_list(const json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "must be an array of integers");
  std::vector<int> out;
  for (const json& item : value) {
    if (!item.is_number_integer()) fail(path, "must be an array of integers");
    out.push_back(item.get<int>());
  }
  return out;
}

std::vector<double> read_number_list(const json& value, const std::string& path) {
  if (!value.is_array()) fail(path, "must be an array of numbers");
  std::vector<double> out;
  for (const json& item : value) {
    if (!item.is_number()) fail(path, "must be an array of numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

// --- section parsers ----------------------------------------------------------

void parse_grid(const json& obj, ExperimentConfig& cfg) {
  reject_unknown_keys(obj, "grid", {"n", "L", "gamma"});
  cfg.n = read_int(obj, "grid", "n", cfg.n);
  cfg.L = read_number(obj, "grid", "L", cfg.L);
  cfg.gamma = read_number(obj, "grid", "gamma", cfg.gamma);
}

void parse_solver(const json& obj, ExperimentConfig& cfg) {
  reject_unknown_keys(obj, "solver", {"dt", "T"});
  cfg.dt = read_number(obj, "solver", "dt", cfg.dt);
  cfg.T = read_number(obj, "solver", "T", cfg.T);
}

void parse_split(const json& obj, ExperimentConfig& cfg) {
  reject_unknown_keys(obj, "split", {"J", "J_list", "s"});
  if (obj.contains("J") && obj.contains("J_list"))
    fail("split", "give either J or J_list, not both");
  if (obj.contains("J")) cfg.J_list = {read_int(obj, "split", "J", 0)};
  if (obj.contains("J_list")) cfg.J_list = read_int_list(obj.at("J_list"), "split.J_list");
  if (cfg.J_list.empty()) fail("split", "requires J or a nonempty J_list");
  if (!obj.contains("s")) fail("split", "requires s");
  cfg.s = read_number(obj, "split", "s", cfg.s);
}

void parse_probes(const json& obj, ExperimentConfig& cfg) {
  reject_unknown_keys(obj, "probes",
                      {"exponents", "hls", "commutator", "strichartz-slope", "lemma6",
                       "bootstrap-table", "recombine"});
  if (obj.contains("exponents")) {
    const json& p = require_object(obj.at("exponents"), "probes.exponents");
    reject_unknown_keys(p, "probes.exponents", {});
    cfg.exponents.emplace();
  }
  if (obj.contains("hls")) {
    const json& p = require_object(obj.at("hls"), "probes.hls");
    reject_unknown_keys(p, "probes.hls", {"p", "count"});
    HlsParams params;
    params.p = read_number(p, "probes.hls", "p", params.p);
    params.count = read_int(p, "probes.hls", "count", params.count);
    cfg.hls = params;
  }
  if (obj.contains("commutator")) {
    const json& p = require_object(obj.at("commutator"), "probes.commutator");
    reject_unknown_keys(p, "probes.commutator", {"r", "j_list"});
    CommutatorParams params;
    params.r = read_number(p, "probes.commutator", "r", params.r);
    if (p.contains("j_list"))
      params.j_list = read_int_list(p.at("j_list"), "probes.commutator.j_list");
    cfg.commutator = params;
  }
  if (obj.contains("strichartz-slope")) {
    const json& p = require_object(obj.at("strichartz-slope"), "probes.strichartz-slope");
    reject_unknown_keys(p, "probes.strichartz-slope", {"j", "r", "h_list", "trials", "T"});
    SlopeParams params;
    params.j = read_int(p, "probes.strichartz-slope", "j", params.j);
    params.r = read_number(p, "probes.strichartz-slope", "r", params.r);
    if (p.contains("h_list"))
      params.h_list = read_number_list(p.at("h_list"), "probes.strichartz-slope.h_list");
    params.trials = read_int(p, "probes.strichartz-slope", "trials", params.trials);
    params.T = read_number(p, "probes.strichartz-slope", "T", params.T);
    cfg.strichartz_slope = params;
  }
  if (obj.contains("lemma6")) {
    const json& p = require_object(obj.at("lemma6"), "probes.lemma6");
    reject_unknown_keys(p, "probes.lemma6", {"r1", "r2", "delta"});
    Lemma6Params params;
    params.r1 = read_number(p, "probes.lemma6", "r1", params.r1);
    params.r2 = read_number(p, "probes.lemma6", "r2", params.r2);
    params.delta = read_number(p, "probes.lemma6", "delta", params.delta);
    cfg.lemma6 = params;
  }
  if (obj.contains("bootstrap-table")) {
    const json& p = require_object(obj.at("bootstrap-table"), "probes.bootstrap-table");
    reject_unknown_keys(p, "probes.bootstrap-table", {"r1", "r2", "es"});
    BootstrapParams params;
    params.r1 = read_number(p, "probes.bootstrap-table", "r1", params.r1);
    params.r2 = read_number(p, "probes.bootstrap-table", "r2", params.r2);
    params.es = read_number(p, "probes.bootstrap-table", "es", params.es);
    cfg.bootstrap_table = params;
  }
  if (obj.contains("recombine")) {
    const json& p = require_object(obj.at("recombine"), "probes.recombine");
    reject_unknown_keys(p, "probes.recombine", {});
    cfg.recombine.emplace();
  }
}

void parse_gates(const json& obj, ExperimentConfig& cfg) {
  reject_unknown_keys(obj, "gates", {"exponent"});
  if (obj.contains("exponent")) {
    const json& p = require_object(obj.at("exponent"), "gates.exponent");
    reject_unknown_keys(p, "gates.exponent", {"s", "r1", "r2"});
    GateParams params;
    for (const char* key : {"s", "r1", "r2"})
      if (!p.contains(key)) fail("gates.exponent", std::string("requires ") + key);
    params.s = read_number(p, "gates.exponent", "s", 0.0);
    params.r1 = read_number(p, "gates.exponent", "r1", 0.0);
    params.r2 = read_number(p, "gates.exponent", "r2", 0.0);
    cfg.exponent_gate_declared = params;
  }
}

// --- whole-config validation ----------------------------------------------------

// Re-runs every module-level constructor/validator the enabled probes will
// rely on, so a bad document is rejected before anything runs.
void validate_experiment(const ExperimentConfig& cfg, const std::string& path_hint) {
  auto wrap = [&](const char* section, const std::function<void()>& check) {
    try {
      check();
    } catch (const std::invalid_argument& e) {
      fail(path_hint + section, e.what());
    }
  };

  GridSpec grid = [&] {
    try {
      return GridSpec(cfg.n, cfg.L, cfg.gamma);
    } catch (const std::invalid_argument& e) {
      fail(path_hint + "grid", e.what());
    }
  }();

  wrap("grid", [&] { derive_exponents(cfg.gamma); });
  wrap("solver", [&] {
    SolverConfig solver;
    solver.dt = cfg.dt;
    solver.T = cfg.T;
    kgh::validate_config(solver);
  });

  const bool wants_split =
      cfg.lemma6.has_value() || cfg.bootstrap_table.has_value() || cfg.recombine.has_value();
  if (wants_split && (cfg.J_list.empty() || !std::isfinite(cfg.s)))
    fail(path_hint + "split", "required by the enabled probes (J or J_list, and s)");

  const bool wants_bank = cfg.lemma6.has_value() || cfg.recombine.has_value() ||
                          cfg.commutator.has_value() || cfg.strichartz_slope.has_value();
  std::optional<DyadicBank> bank;
  if (wants_bank) {
    try {
      bank = DyadicBank::build(grid);
    } catch (const std::invalid_argument& e) {
      fail(path_hint + "grid", e.what());
    }
  }

  auto check_levels = [&](const std::vector<int>& levels, int lo, const char* section) {
    for (int j : levels)
      if (j < lo || j > bank->j_max())
        fail(path_hint + section, "level " + std::to_string(j) + " outside [" +
                                      std::to_string(lo) + ", " +
                                      std::to_string(bank->j_max()) + "]");
  };

  if (cfg.lemma6 || cfg.recombine) check_levels(cfg.J_list, 0, "split");
  if (cfg.hls) {
    wrap("probes.hls", [&] { hls_exponent(cfg.hls->p, cfg.gamma); });
    if (cfg.hls->count < 1) fail(path_hint + "probes.hls", "count must be positive");
  }
  if (cfg.commutator) {
    if (cfg.commutator->j_list.empty())
      fail(path_hint + "probes.commutator", "j_list must be nonempty");
    check_levels(cfg.commutator->j_list, 2, "probes.commutator");
    if (!(cfg.commutator->r > 2.0) || !std::isfinite(cfg.commutator->r))
      fail(path_hint + "probes.commutator", "requires 2 < r < infinity");
  }
  if (cfg.strichartz_slope) {
    const SlopeParams& p = *cfg.strichartz_slope;
    if (p.h_list.size() < 3)
      fail(path_hint + "probes.strichartz-slope", "needs at least three radii");
    for (double h : p.h_list)
      if (!(h > 0.0) || h >= 1.0 / 8.0)
        fail(path_hint + "probes.strichartz-slope", "each radius must lie in (0, 1/8)");
    if (!(p.r >= 2.0)) fail(path_hint + "probes.strichartz-slope", "requires r >= 2");
    if (!(p.T > 0.0) || p.T > cfg.L / 4.0)
      fail(path_hint + "probes.strichartz-slope", "requires 0 < T <= L/4 (pre-wrap window)");
    if (p.trials < 1) fail(path_hint + "probes.strichartz-slope", "trials must be positive");
    // j is the frequency scale of the ball window, not a dyadic-bank level;
    // mirror the probe's feasibility rule for hosting level-j balls below
    // the dealiased band.
    const double h_max = *std::max_element(p.h_list.begin(), p.h_list.end());
    const double scale = std::ldexp(1.0, p.j);
    const double center = std::min(scale, grid.dealias_band() - h_max * scale - 1e-9);
    if (!(center >= std::ldexp(1.0, p.j - 2)))
      fail(path_hint + "probes.strichartz-slope", "grid cannot host level-j balls");
  }
  if (cfg.lemma6) {
    wrap("probes.lemma6", [&] {
      BootstrapConstants constants;
      constants.r1 = cfg.lemma6->r1;
      constants.r2 = cfg.lemma6->r2;
      validate_constants(constants, cfg.gamma);
    });
    if (!(cfg.lemma6->delta > 0.0)) fail(path_hint + "probes.lemma6", "delta must be positive");
  }
  if (cfg.bootstrap_table) {
    wrap("probes.bootstrap-table", [&] {
      BootstrapConstants constants;
      constants.r1 = cfg.bootstrap_table->r1;
      constants.r2 = cfg.bootstrap_table->r2;
      validate_constants(constants, cfg.gamma);
    });
    if (!(cfg.bootstrap_table->es > 0.0))
      fail(path_hint + "probes.bootstrap-table", "es must be positive");
    for (int J : cfg.J_list)
      if (J < 0) fail(path_hint + "split", "bootstrap levels must be nonnegative");
  }
  if (cfg.exponent_gate_declared) {
    wrap("gates.exponent", [&] {
      BootstrapConstants constants;
      constants.r1 = cfg.exponent_gate_declared->r1;
      constants.r2 = cfg.exponent_gate_declared->r2;
      validate_constants(constants, cfg.gamma);
    });
  }
  if (cfg.output_dir.empty()) fail(path_hint + "output", "must be a nonempty path");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  require_object(doc, "config");
  reject_unknown_keys(doc, "config",
                      {"grid", "solver", "split", "seed", "output", "probes", "gates"});

  ExperimentConfig cfg;
  if (doc.contains("grid")) parse_grid(require_object(doc.at("grid"), "grid"), cfg);
  if (doc.contains("solver")) parse_solver(require_object(doc.at("solver"), "solver"), cfg);
  if (doc.contains("split")) parse_split(require_object(doc.at("split"), "split"), cfg);
  if (doc.contains("seed")) {
    const json& v = doc.at("seed");
    if (!v.is_number_unsigned()) fail("seed", "must be a nonnegative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (doc.contains("output")) {
    const json& v = doc.at("output");
    if (!v.is_string()) fail("output", "must be a string");
    cfg.output_dir = v.get<std::string>();
  }
  if (doc.contains("probes")) parse_probes(require_object(doc.at("probes"), "probes"), cfg);
  if (doc.contains("gates")) parse_gates(require_object(doc.at("gates"), "gates"), cfg);

  validate_experiment(cfg, "");
  cfg.source_json = doc.dump(2);
  return cfg;
}

std::string preset_json(const std::string& name) {
  json doc;
  auto grid = [&](int n, double L, double gamma) {
    doc["grid"] = {{"n", n}, {"L", L}, {"gamma", gamma}};
  };
  if (name == "recombine") {
    grid(32, kTwoPi / 2.0, 2.5);
    doc["solver"] = {{"dt", 1.0 / 64.0}, {"T", 0.5}};
    doc["split"] = {{"J", 3}, {"s", 0.7}};
    doc["seed"] = 1;
    doc["probes"] = {{"recombine", json::object()}};
  } else if (name == "exponents") {
    grid(16, kTwoPi, 2.4);
    doc["probes"] = {{"exponents", json::object()}};
  } else if (name == "strichartz-slope") {
    grid(32, kTwoPi, 2.5);
    doc["solver"] = {{"dt", 1.0 / 64.0}, {"T", 0.5}};
    doc["seed"] = 1234;
    doc["probes"] = {{"strichartz-slope",
                      {{"j", 5},
                       {"r", 4.0},
                       {"h_list", {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}},
                       {"trials", 8},
                       {"T", 1.5}}}};
  } else if (name == "hls") {
    grid(32, kTwoPi, 2.5);
    doc["seed"] = 2025;
    doc["probes"] = {{"hls", {{"p", 2.0}, {"count", 100}}}};
  } else if (name == "commutator") {
    grid(128, kTwoPi / 4.0, 2.5);
    doc["seed"] = 7;
    doc["probes"] = {{"commutator", {{"r", 4.0}, {"j_list", {3, 4, 5, 6}}}}};
  } else if (name == "lemma6") {
    grid(64, kTwoPi / 4.0, 2.4);
    doc["solver"] = {{"dt", 1.0 / 32.0}, {"T", 0.5}};
    doc["split"] = {{"J_list", {3, 4, 5}}, {"s", 0.65}};
    doc["seed"] = 55;
    doc["probes"] = {{"lemma6", {{"r1", 3.3}, {"r2", 40.0}, {"delta", 0.05}}}};
  } else if (name == "bootstrap-table") {
    grid(16, kTwoPi, 2.4);
    doc["split"] = {{"J_list", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}}, {"s", 0.7}};
    doc["probes"] = {{"bootstrap-table", {{"r1", 3.3}, {"r2", 40.0}, {"es", 1.0}}}};
  } else {
    throw ConfigError("unknown preset '" + name +
                      "' (available: recombine, exponents, strichartz-slope, hls, "
                      "commutator, lemma6, bootstrap-table)");
  }
  doc["output"] = "kgh-out/" + name;
  return doc.dump(2);
}

std::string apply_override(const std::string& json_text, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like dotted.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string value_text = assignment.substr(eq + 1);

  json value;
  try {
    value = json::parse(value_text);
  } catch (const json::parse_error&) {
    value = value_text;  // bare word: treat as a string
  }

  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("override target syntax: ") + e.what());
  }

  json* cursor = &doc;
  std::size_t begin = 0;
  while (true) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(begin, dot - begin);
    if (key.empty()) throw ConfigError("override path has an empty segment: " + path);
    if (dot == std::string::npos) {
      (*cursor)[key] = value;
      break;
    }
    if (cursor->contains(key) && !(*cursor)[key].is_object())
      throw ConfigError("override path crosses a non-object value at '" + key + "'");
    cursor = &(*cursor)[key];
    begin = dot + 1;
  }
  return doc.dump(2);
}

// --- experiment execution -------------------------------------------------------

namespace {

double spread_of(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

ExperimentRow base_row(const ExperimentConfig& cfg, const char* experiment) {
  ExperimentRow row;
  row.experiment = experiment;
  row.gamma = cfg.gamma;
  row.seed = cfg.seed;
  return row;
}

void run_exponents(const ExperimentConfig& cfg, std::vector<ExperimentRow>& rows) {
  const ExponentSet e = derive_exponents(cfg.gamma);
  const std::pair<const char*, double> table[] = {
      {"s0", e.s0},
      {"theta", e.theta},
      {"alpha", e.alpha},
      {"beta", e.beta},
      {"s_threshold", e.s_threshold},
      {"scaling_alternative", e.scaling_alternative},
      {"conformal_alternative", e.conformal_alternative},
  };
  std::printf("exponent family at gamma = %s\n", format_number(cfg.gamma).c_str());
  for (const auto& [name, value] : table) {
    std::printf("  %-22s %s\n", name, format_number(value).c_str());
    ExperimentRow row = base_row(cfg, "exponents");
    row.quantity = name;
    row.value = value;
    rows.push_back(row);
  }
}

void run_strichartz_slope(const ExperimentConfig& cfg, const GridSpec& grid,
                          const DyadicBank& bank, std::vector<ExperimentRow>& rows,
                          std::vector<std::string>& notes) {
  const SlopeParams& p = *cfg.strichartz_slope;
  const PreciseSlopeResult result = precise_strichartz_slope(
      bank, p.j, p.r, p.h_list, p.trials, cfg.dt, p.T, cfg.seed);

  auto push = [&](const std::string& quantity, double x, double value) {
    ExperimentRow row = base_row(cfg, "strichartz-slope");
    row.dt = cfg.dt;
    row.T = p.T;
    row.quantity = quantity;
    row.x = x;
    row.value = value;
    rows.push_back(row);
  };
  for (std::size_t i = 0; i < result.trial_slopes.size(); ++i)
    push("trial_slope", static_cast<double>(i), result.trial_slopes[i]);
  push("fitted_slope", std::numeric_limits<double>::quiet_NaN(), result.slope);
  push("fit_residual", std::numeric_limits<double>::quiet_NaN(), result.fit_residual);
  push("target_slope", std::numeric_limits<double>::quiet_NaN(), 0.5 - 1.0 / p.r);

  // One representative draw re-localized at every radius gives the raw
  // decay curve behind the fitted slope (plot against h on log-log axes).
  // Sharp theta = 0 admissibility line: 1/q = 1/2 - 1/r (q = inf at r = 2).
  const double q = (p.r == 2.0) ? INFINITY : 1.0 / (0.5 - 1.0 / p.r);
  const RealField draw = random_mean_zero_gaussian(grid, cfg.seed);
  for (double h : p.h_list) {
    const RealField u0 = ball_localize(bank, draw, BallWindow{result.center, p.j, h});
    const double mass = lebesgue_norm(u0, 2.0);
    if (mass == 0.0) continue;
    const Trajectory traj =
        free_trajectory(CauchyPair(u0, RealField(grid)), cfg.dt, p.T);
    const double exponent =
        p.j * (1.5 - 3.0 / p.r - (std::isinf(q) ? 0.0 : 1.0 / q));
    push("ball_norm", h, spacetime_norm(traj, q, p.r).value / (std::pow(2.0, exponent) * mass));
  }
  notes.push_back(
      "periodic-box measurement: dispersive decay is probed inside the pre-wrap "
      "window T <= L/4; whole-space decay rates appear only at desk scale");
}

void run_lemma6(const ExperimentConfig& cfg, const GridSpec& grid, const DyadicBank& bank,
                std::vector<ExperimentRow>& rows, std::vector<std::string>& notes) {
  const Lemma6Params& p = *cfg.lemma6;
  const CauchyPair data = power_law_pair(grid, cfg.s, p.delta, cfg.seed);
  const auto [pos_norm, vel_norm] = sobolev_norm(data, cfg.s);
  const double es = pos_norm + vel_norm;

  auto push = [&](int J, const std::string& quantity, double value) {
    ExperimentRow row = base_row(cfg, "lemma6");
    row.s = cfg.s;
    row.J = J;
    row.dt = cfg.dt;
    row.T = cfg.T;
    row.quantity = quantity;
    row.x = J;
    row.value = value;
    rows.push_back(row);
  };

  std::vector<double> ratios33, ratios34;
  for (int J : cfg.J_list) {
    const SplitPair split = split_data(bank, data, J);
    const Trajectory u = free_trajectory(split.low, cfg.dt, cfg.T);
    const PairingBoundReport report =
        lemma6_bound_check(u, split.high, J, cfg.s, cfg.gamma, p.r1, p.r2, cfg.T, es);
    push(J, "ratio33", report.ratio33);
    push(J, "ratio34", report.ratio34);
    push(J, "i33", report.i33);
    push(J, "i34", report.i34);
    push(J, "E_T", report.E_T);
    ratios33.push_back(report.ratio33);
    ratios34.push_back(report.ratio34);
    if (report.hypothesis_warning)
      notes.push_back("growth hypothesis exceeded tenfold at J = " + std::to_string(J));
  }
  if (cfg.J_list.size() >= 2) {
    ExperimentRow row = base_row(cfg, "lemma6");
    row.s = cfg.s;
    row.dt = cfg.dt;
    row.T = cfg.T;
    row.quantity = "spread33";
    row.value = spread_of(ratios33);
    rows.push_back(row);
    row.quantity = "spread34";
    row.value = spread_of(ratios34);
    rows.push_back(row);
  }
  notes.push_back("bound side uses the measured data norm at s and sup-in-time energy");
}

// Returns false when the gate rejects s (the caller downgrades the status).
bool run_bootstrap_table(const ExperimentConfig& cfg, std::vector<ExperimentRow>& rows,
                         std::vector<std::string>& notes) {
  const BootstrapParams& p = *cfg.bootstrap_table;
  const GateReport gate = exponent_gate(cfg.s, cfg.gamma, p.r1, p.r2);

  auto push = [&](const std::string& quantity, double x, double value) {
    ExperimentRow row = base_row(cfg, "bootstrap-table");
    row.s = cfg.s;
    row.quantity = quantity;
    row.x = x;
    row.value = value;
    rows.push_back(row);
  };
  for (std::size_t i = 0; i < gate.terms.size(); ++i)
    push("gate:" + gate.names[i], static_cast<double>(i), gate.terms[i]);
  push("gate_margin", std::numeric_limits<double>::quiet_NaN(), gate.margin);
  push("gate_passes", std::numeric_limits<double>::quiet_NaN(), gate.passes ? 1.0 : 0.0);

  if (!gate.passes) {
    notes.push_back("gate failed: binding term " + gate.argmax);
    std::printf("bootstrap gate FAILED at s = %s (binding term: %s)\n",
                format_number(cfg.s).c_str(), gate.argmax.c_str());
    return false;
  }

  BootstrapConstants constants;
  constants.r1 = p.r1;
  constants.r2 = p.r2;
  std::printf("guaranteed lifetime, s = %s, gamma = %s, es = %s\n",
              format_number(cfg.s).c_str(), format_number(cfg.gamma).c_str(),
              format_number(p.es).c_str());
  for (int J : cfg.J_list) {
    const BootstrapTime time = bootstrap_time(J, cfg.s, cfg.gamma, constants, p.es);
    ExperimentRow row = base_row(cfg, "bootstrap-table");
    row.s = cfg.s;
    row.J = J;
    row.quantity = "lifetime";
    row.x = J;
    row.value = time.value;
    rows.push_back(row);
    for (std::size_t i = 0; i < time.terms.size(); ++i) {
      row.quantity = "term" + std::to_string(i + 1);
      row.value = time.terms[i];
      rows.push_back(row);
    }
    row.quantity = "argmin";
    row.value = time.argmin;
    rows.push_back(row);
    std::printf("  J = %2d   T = %s\n", J, format_number(time.value).c_str());
  }
  return true;
}

std::string recombine_csv(const ExperimentConfig& cfg, const GridSpec& grid,
                          const DyadicBank& bank) {
  const double L = cfg.L;
  const double c = L / 2.0;
  const RealField position =
      gaussian_bump(grid, 1.2, 0.15 * L, Vec3{c, c, c}) +
      gaussian_bump(grid, -0.6, 0.11 * L, Vec3{c + 0.18 * L, c - 0.12 * L, c});
  const RealField velocity =
      gaussian_bump(grid, 0.5, 0.13 * L, Vec3{c + 0.1 * L, c, c - 0.08 * L});
  const CauchyPair data(position, velocity);

  SolverConfig solver;
  solver.dt = cfg.dt;
  solver.T = cfg.T;
  const RecombinationReport report =
      recombine_and_compare(bank, data, cfg.J_list.front(), cfg.s, solver);

  std::string out;
  out += "# note: split level J = " + std::to_string(report.J) +
         ", regularity s = " + format_number(report.s) + "\n";
  out += "# note: terminal H1 discrepancy at dt, dt/2, dt/4 = " +
         format_number(report.terminal_h1[0]) + ", " + format_number(report.terminal_h1[1]) +
         ", " + format_number(report.terminal_h1[2]) + "\n";
  out += "# note: fitted convergence order = " + format_number(report.fitted_order) + "\n";
  out += "time,h1_discrepancy,l2_discrepancy\n";
  for (std::size_t k = 0; k < report.times.size(); ++k) {
    out += format_number(report.times[k]);
    out += ',';
    out += format_number(report.h1_discrepancy[k]);
    out += ',';
    out += format_number(report.l2_discrepancy[k]);
    out += '\n';
  }
  return out;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  const GridSpec grid(cfg.n, cfg.L, cfg.gamma);

  std::optional<DyadicBank> bank;
  auto get_bank = [&]() -> const DyadicBank& {
    if (!bank) bank = DyadicBank::build(grid);
    return *bank;
  };

  int status = 0;
  std::vector<std::string> outputs;
  auto emit = [&](const std::string& name, const std::string& content) {
    write_text_file(cfg.output_dir + "/" + name, content);
    outputs.push_back(name);
  };

  if (cfg.exponents) {
    std::vector<ExperimentRow> rows;
    run_exponents(cfg, rows);
    emit("exponents.csv", rows_to_csv(rows));
  }
  if (cfg.hls) {
    const ProbeReport report = hls_sweep(grid, cfg.hls->p, cfg.gamma, cfg.hls->count, cfg.seed);
    emit("hls.csv", probe_reports_to_csv({report}));
  }
  if (cfg.commutator) {
    const RealField v = random_mean_zero_gaussian(grid, cfg.seed);
    const RealField u = power_law_pair(grid, 1.0, 0.5, cfg.seed + 1).position;
    ProbeReport report = commutator_sweep(get_bank(), v, u, cfg.commutator->j_list,
                                          cfg.commutator->r, cfg.gamma);
    report.seed = cfg.seed;  // the sweep itself draws nothing; record the field seed
    emit("commutator.csv", probe_reports_to_csv({report}));
  }
  if (cfg.strichartz_slope) {
    std::vector<ExperimentRow> rows;
    std::vector<std::string> notes;
    run_strichartz_slope(cfg, grid, get_bank(), rows, notes);
    emit("strichartz-slope.csv", rows_to_csv(rows, notes));
  }
  if (cfg.lemma6) {
    std::vector<ExperimentRow> rows;
    std::vector<std::string> notes;
    run_lemma6(cfg, grid, get_bank(), rows, notes);
    emit("lemma6.csv", rows_to_csv(rows, notes));
  }
  if (cfg.bootstrap_table) {
    std::vector<ExperimentRow> rows;
    std::vector<std::string> notes;
    if (!run_bootstrap_table(cfg, rows, notes)) status = 1;
    emit("bootstrap-table.csv", rows_to_csv(rows, notes));
  }
  if (cfg.exponent_gate_declared) {
    const GateParams& g = *cfg.exponent_gate_declared;
    const GateReport gate = exponent_gate(g.s, cfg.gamma, g.r1, g.r2);
    std::vector<ExperimentRow> rows;
    for (std::size_t i = 0; i < gate.terms.size(); ++i) {
      ExperimentRow row = base_row(cfg, "gate");
      row.s = g.s;
      row.quantity = "gate:" + gate.names[i];
      row.x = static_cast<double>(i);
      row.value = gate.terms[i];
      rows.push_back(row);
    }
    ExperimentRow row = base_row(cfg, "gate");
    row.s = g.s;
    row.quantity = "gate_margin";
    row.value = gate.margin;
    rows.push_back(row);
    row.quantity = "gate_passes";
    row.value = gate.passes ? 1.0 : 0.0;
    rows.push_back(row);
    emit("gate.csv", rows_to_csv(rows));
    if (!gate.passes) status = 1;
  }
  if (cfg.recombine) {
    emit("recombine.csv", recombine_csv(cfg, grid, get_bank()));
  }

  json manifest;
  manifest["config"] = cfg.source_json.empty() ? json(nullptr) : json::parse(cfg.source_json);
  manifest["outputs"] = outputs;
  manifest["status"] = status;
  write_text_file(cfg.output_dir + "/manifest.json", manifest.dump(2) + "\n");
  return status;
}

// --- plot-script emission ---------------------------------------------------------

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

std::string sanitize_for_filename(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? std::string("group") : out;
}

struct Sweep {
  std::string name;
  std::vector<std::pair<double, double>> points;
  bool log_log = false;
};

std::string sweep_script(const std::string& csv_name, const Sweep& sweep) {
  std::string out;
  out += "# gnuplot script generated from " + csv_name + " (sweep \"" + sweep.name + "\")\n";
  out += "$data << EOD\n";
  for (const auto& [x, y] : sweep.points)
    out += format_number(x) + " " + format_number(y) + "\n";
  out += "EOD\n";
  out += "set xlabel \"x\"\nset ylabel \"" + sweep.name + "\"\n";
  if (sweep.log_log) {
    out += "set logscale xy\n";
    // least-squares line in log coordinates, drawn through the data
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : sweep.points) {
      const double lx = std::log(x), ly = std::log(y);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double count = static_cast<double>(sweep.points.size());
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / count;
    out += "fit_slope = " + format_number(slope) + "\n";
    out += "f(x) = " + format_number(std::exp(intercept)) + " * x ** fit_slope\n";
    out += "plot $data using 1:2 with points title \"" + sweep.name +
           "\", f(x) with lines title sprintf(\"fit, slope %.3f\", fit_slope)\n";
  } else {
    out += "plot $data using 1:2 with linespoints title \"" + sweep.name + "\"\n";
  }
  return out;
}

}  // namespace

std::vector<std::string> emit_plots(const std::string& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ConfigError("cannot read CSV: " + csv_path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    lines.push_back(line);
  }
  if (lines.empty()) throw ConfigError("malformed CSV (no header row): " + csv_path);

  const std::vector<std::string> header = split_csv_line(lines.front());
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = split_csv_line(lines[i]);
    if (fields.size() != header.size())
      throw ConfigError("malformed CSV: row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
    rows.push_back(std::move(fields));
  }

  const std::filesystem::path path(csv_path);
  const std::string stem = (path.parent_path() / path.stem()).string();
  const std::string csv_name = path.filename().string();

  auto column = [&](const char* name) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : it - header.begin();
  };
  auto parse_value = [](const std::string& text, double& out) {
    char* end = nullptr;
    out = std::strtod(text.c_str(), &end);
    return end != text.c_str() && *end == '\0' && std::isfinite(out);
  };

  std::vector<Sweep> sweeps;
  auto sweep_named = [&](const std::string& name) -> Sweep& {
    for (Sweep& s : sweeps)
      if (s.name == name) return s;
    sweeps.push_back(Sweep{name, {}, false});
    return sweeps.back();
  };

  if (!header.empty() && header.front() == "experiment") {
    const auto qty = column("quantity"), xcol = column("x"), vcol = column("value"),
               expcol = column("experiment");
    if (qty < 0 || xcol < 0 || vcol < 0)
      throw ConfigError("malformed CSV: missing quantity/x/value columns: " + csv_path);
    for (const auto& row : rows) {
      double x = 0.0, value = 0.0;
      if (!parse_value(row[xcol], x) || !parse_value(row[vcol], value)) continue;
      Sweep& sweep = sweep_named(row[qty]);
      sweep.points.emplace_back(x, value);
      if (row[expcol].find("slope") != std::string::npos) sweep.log_log = true;
    }
  } else if (!header.empty() && header.front() == "probe") {
    const auto ratio = column("ratio"), probe = column("probe");
    if (ratio < 0) throw ConfigError("malformed CSV: missing ratio column: " + csv_path);
    std::map<std::string, int> indices;
    for (const auto& row : rows) {
      double value = 0.0;
      if (!parse_value(row[ratio], value)) continue;
      Sweep& sweep = sweep_named(row[probe]);
      sweep.points.emplace_back(static_cast<double>(indices[row[probe]]++), value);
    }
  } else {
    // Generic wide table: every column against the first.
    for (std::size_t col = 1; col < header.size(); ++col) {
      Sweep& sweep = sweep_named(header[col]);
      for (const auto& row : rows) {
        double x = 0.0, value = 0.0;
        if (parse_value(row[0], x) && parse_value(row[col], value))
          sweep.points.emplace_back(x, value);
      }
    }
  }

  // Keep only plottable sweeps (two or more points); log-log needs positivity.
  std::vector<std::string> written;
  for (Sweep& sweep : sweeps) {
    if (sweep.points.size() < 2) continue;
    if (sweep.log_log)
      sweep.log_log = std::all_of(sweep.points.begin(), sweep.points.end(),
                                  [](const auto& p) { return p.first > 0 && p.second > 0; });
    const std::string script_path = stem + "_" + sanitize_for_filename(sweep.name) + ".gp";
    write_text_file(script_path, sweep_script(csv_name, sweep));
    written.push_back(script_path);
  }
  if (written.empty()) {
    const std::string script_path = stem + ".gp";
    write_text_file(script_path,
                    "# gnuplot script generated from " + csv_name +
                        "\n# warning: no plottable sweeps in this table\n");
    written.push_back(script_path);
  }
  return written;
}

}  // namespace kgh
