#pragma once

// CSV and JSON emission. Numbers are written with 17 significant digits so
// that identical runs give byte-identical files.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcmg/analysis.hpp"
#include "bcmg/cases.hpp"
#include "bcmg/config.hpp"

namespace bcmg {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Row-by-row CSV writer; text cells are quoted when they contain a comma,
/// a quote or a line break.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  CsvWriter& header(const std::vector<std::string>& names) {
    for (const auto& n : names) cell(n);
    return end_row();
  }
  CsvWriter& cell(const std::string& s) {
    sep();
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
      os_ << s;
    } else {
      os_ << '"';
      for (char ch : s) os_ << (ch == '"' ? "\"\"" : std::string(1, ch));
      os_ << '"';
    }
    return *this;
  }
  CsvWriter& cell(const char* s) { return cell(std::string(s)); }
  CsvWriter& cell(double v) {
    sep();
    os_ << format_double(v);
    return *this;
  }
  CsvWriter& cell(int v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& cell(std::size_t v) {
    sep();
    os_ << v;
    return *this;
  }
  CsvWriter& end_row() {
    os_ << "\r\n";
    first_ = true;
    return *this;
  }

 private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  bool first_ = true;
};

inline nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"case", c.case_name}, {"N", c.n},         {"dim", c.dim},       {"bc", c.bc},
          {"pde", c.pde},        {"theta", c.theta}, {"dtau", c.dtau},     {"scheme", c.scheme},
          {"nu1", c.nu1},        {"nu2", c.nu2},     {"seed", c.seed},     {"cycles", c.cycles},
          {"norm", c.norm},      {"coarse", c.coarse}};
}

inline nlohmann::json to_json(const CycleReport& r) {
  nlohmann::json norms = nlohmann::json::array();
  for (double v : r.residual_norms) norms.push_back(number_or_null(v));
  nlohmann::json rhos = nlohmann::json::array();
  for (double v : r.rho_sequence) rhos.push_back(number_or_null(v));
  return {{"residual_norms", norms},
          {"rho_sequence", rhos},
          {"rho_asymptotic", number_or_null(r.rho_asymptotic)},
          {"diverged", r.diverged},
          {"cycles", r.cycles}};
}

inline nlohmann::json to_json(const RunConfig& c, const RunResult& r) {
  return {{"config", to_json(c)},
          {"report", to_json(r.report)},
          {"levels", r.levels},
          {"internal_nodes", r.internal},
          {"ghost_nodes", r.ghosts},
          {"dtau_min", r.dtau_min},
          {"dtau_max", r.dtau_max}};
}

inline void write_residual_history(std::ostream& os, const CycleReport& r) {
  CsvWriter w(os);
  w.header({"cycle", "residual_norm", "rho"});
  for (std::size_t m = 0; m < r.residual_norms.size(); ++m) {
    w.cell(m).cell(r.residual_norms[m]);
    if (m >= 1 && m - 1 < r.rho_sequence.size())
      w.cell(r.rho_sequence[m - 1]);
    else
      w.cell("");
    w.end_row();
  }
}

/// One row per grid node: coordinates, label and value.
inline void write_field(std::ostream& os, const RunResult& r) {
  CsvWriter w(os);
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> head;
  for (int k = 0; k < r.dim; ++k) head.emplace_back(axes[k]);
  head.emplace_back("label");
  head.emplace_back("u");
  w.header(head);
  const int per_axis = r.n + 1;
  const double h = 2.0 / r.n;
  for (std::size_t node = 0; node < r.labels.size(); ++node) {
    std::size_t rest = node;
    for (int k = 0; k < r.dim; ++k) {
      w.cell(-1.0 + h * static_cast<double>(rest % per_axis));
      rest /= per_axis;
    }
    w.cell(to_string(r.labels[node])).cell(r.u[node]).end_row();
  }
}

inline void write_spectrum(std::ostream& os, const SpectrumReport& s) {
  CsvWriter w(os);
  w.header({"alpha", "amplitude"});
  for (std::size_t k = 0; k < s.alphas.size(); ++k) w.cell(s.alphas[k]).cell(s.amplitudes[k]).end_row();
}

}  // namespace bcmg
