#include "kgh/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kgh {

std::string format_number(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string csv_field(const std::string& text) {
  const bool needs_quotes = text.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

void append_notes(std::string& out, const std::vector<std::string>& notes) {
  for (const std::string& note : notes) {
    out += "# note: ";
    out += note;
    out += '\n';
  }
}

}  // namespace

std::string rows_to_csv(const std::vector<ExperimentRow>& rows,
                        const std::vector<std::string>& notes) {
  std::string out;
  append_notes(out, notes);
  out += "experiment,gamma,s,J,dt,T,quantity,x,value,seed\n";
  for (const ExperimentRow& row : rows) {
    out += csv_field(row.experiment);
    for (double v : {row.gamma, row.s, row.J, row.dt, row.T}) {
      out += ',';
      out += format_number(v);
    }
    out += ',';
    out += csv_field(row.quantity);
    out += ',';
    out += format_number(row.x);
    out += ',';
    out += format_number(row.value);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

std::string probe_reports_to_csv(const std::vector<ProbeReport>& reports) {
  if (reports.empty()) throw std::invalid_argument("probe_reports_to_csv: no reports");
  const ProbeReport& first = reports.front();
  for (const ProbeReport& report : reports) {
    if (report.probe != first.probe)
      throw std::invalid_argument("probe_reports_to_csv: mixed probe names in one table");
    if (report.params.size() != first.params.size() ||
        !std::equal(report.params.begin(), report.params.end(), first.params.begin(),
                    [](const auto& a, const auto& b) { return a.first == b.first; }))
      throw std::invalid_argument("probe_reports_to_csv: parameter keys differ between reports");
  }

  std::string out;
  for (const ProbeReport& report : reports) append_notes(out, report.notes);
  out += "probe";
  for (const auto& [key, value] : first.params) {
    out += ',';
    out += csv_field(key);
  }
  out += ",ratio,max,min,maxmin_ratio,seed\n";
  for (const ProbeReport& report : reports) {
    for (double ratio : report.ratios) {
      out += csv_field(report.probe);
      for (const auto& [key, value] : report.params) {
        out += ',';
        out += format_number(value);
      }
      for (double v : {ratio, report.max, report.min, report.maxmin_ratio}) {
        out += ',';
        out += format_number(v);
      }
      out += ',';
      out += std::to_string(report.seed);
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream) throw std::runtime_error("cannot open for writing: " + path);
  stream.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!stream) throw std::runtime_error("write failed: " + path);
}

}  // namespace kgh
