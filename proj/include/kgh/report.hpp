#pragma once

// Deterministic CSV serialization for experiment output.  Numbers are
// printed with enough digits to round-trip doubles exactly, so a rerun
// under the same configuration and seed reproduces every output byte for
// byte; no timestamps or environment details enter the files.

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "kgh/probes.hpp"

namespace kgh {

// printf %.17g: shortest fixed-rule form that round-trips every double.
std::string format_number(double value);

// Minimal RFC-4180 escaping: the field is quoted (with inner quotes
// doubled) iff it contains a comma, a quote, or a line break.
std::string csv_field(const std::string& text);

// One measured scalar in long format.  `x` is the abscissa of the sweep
// the quantity belongs to (time, radius, dyadic level, trial index...);
// quantities outside any sweep leave it NaN, which prints as "nan", and
// the same convention applies to context columns that do not bind.
struct ExperimentRow {
  std::string experiment;
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double s = std::numeric_limits<double>::quiet_NaN();
  double J = std::numeric_limits<double>::quiet_NaN();
  double dt = std::numeric_limits<double>::quiet_NaN();
  double T = std::numeric_limits<double>::quiet_NaN();
  std::string quantity;
  double x = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
};

// Long-format table: `# note: ...` comment lines, then the header
// experiment,gamma,s,J,dt,T,quantity,x,value,seed, then one line per row.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows,
                        const std::vector<std::string>& notes = {});

// Sweep-report table: probe,<param keys...>,ratio,max,min,maxmin_ratio,seed
// with one line per measured ratio (the sweep statistics repeat on each
// line).  All reports must share one probe name and one parameter-key set;
// their notes become comment lines above the header.
std::string probe_reports_to_csv(const std::vector<ProbeReport>& reports);

// Writes the bytes exactly as given (binary mode); throws
// std::runtime_error when the file cannot be created or written.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace kgh
