#pragma once

// Run configuration shared by the command-line tool, the samples and the tests,
// with a flat key=value text form.

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bcmg/discretization.hpp"
#include "bcmg/mg_solver.hpp"
#include "bcmg/smoother.hpp"

namespace bcmg {

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string case_name = "vline";
  int n = 128;
  /// Only read by the "box" case.
  int dim = 3;
  std::string bc = "dirichlet";
  std::string pde = "poisson";
  /// Distance of the boundary from the ghost layer in cells (interval, vline, plane3d).
  double theta = 0.5;
  /// "blfa" (the case's default symbol), "blfa-poly", "blfa-exp" or "constant:<value>".
  std::string dtau = "blfa";
  std::string scheme = "tgcs";
  int nu1 = 2;
  int nu2 = 1;
  std::uint64_t seed = 42;
  int cycles = 16;
  std::string norm = "inf";
  std::string coarse = "direct";
  std::string out_dir = ".";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline BcType parse_bc(const std::string& s) {
  if (s == "dirichlet") return BcType::Dirichlet;
  if (s == "neumann") return BcType::Neumann;
  throw ConfigError("unknown boundary condition '" + s + "' (dirichlet, neumann)");
}

inline PdeKind parse_pde(const std::string& s) {
  if (s == "poisson") return PdeKind::Poisson;
  if (s == "reaction") return PdeKind::ReactionDiffusion;
  throw ConfigError("unknown pde '" + s + "' (poisson, reaction)");
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "tgcs") return Scheme::TwoGrid;
  if (s == "v") return Scheme::V;
  if (s == "w") return Scheme::W;
  throw ConfigError("unknown scheme '" + s + "' (tgcs, v, w)");
}

inline NormKind parse_norm(const std::string& s) {
  if (s == "inf") return NormKind::Inf;
  if (s == "l2") return NormKind::L2;
  throw ConfigError("unknown norm '" + s + "' (inf, l2)");
}

inline CoarseSolverKind parse_coarse(const std::string& s) {
  if (s == "direct") return CoarseSolverKind::Direct;
  if (s == "heavy") return CoarseSolverKind::HeavyIteration;
  throw ConfigError("unknown coarse solver '" + s + "' (direct, heavy)");
}

/// `default_symbol` resolves plain "blfa".
inline DtauMode parse_dtau(const std::string& s, blfa::Symbol default_symbol) {
  if (s == "blfa") return DtauMode::optimal(default_symbol);
  if (s == "blfa-poly") return DtauMode::optimal(blfa::Symbol::Polynomial);
  if (s == "blfa-exp") return DtauMode::optimal(blfa::Symbol::Exponential);
  const std::string prefix = "constant:";
  if (s.rfind(prefix, 0) == 0) {
    const std::string v = s.substr(prefix.size());
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size() || !(value > 0.0))
      throw ConfigError("constant dtau needs a positive number, got '" + v + "'");
    return DtauMode::constant(value);
  }
  throw ConfigError("unknown dtau mode '" + s + "' (blfa, blfa-poly, blfa-exp, constant:<value>)");
}

/// Cycle configuration implied by a run configuration.
inline CycleConfig cycle_config(const RunConfig& c, blfa::Symbol default_symbol) {
  CycleConfig cc;
  cc.scheme = parse_scheme(c.scheme);
  cc.smoother.dtau = parse_dtau(c.dtau, default_symbol);
  cc.smoother.nu1 = c.nu1;
  cc.smoother.nu2 = c.nu2;
  cc.coarse_solver = parse_coarse(c.coarse);
  cc.norm = parse_norm(c.norm);
  return cc;
}

/// Checks ranges and enumerations; throws ConfigError.
inline void validate(const RunConfig& c) {
  if (c.n < 4 || (c.n & (c.n - 1)) != 0) throw ConfigError("N must be a power of two >= 4");
  if (c.dim < 1 || c.dim > 3) throw ConfigError("dim must be 1, 2 or 3");
  if (!(c.theta >= 0.0 && c.theta < 1.0)) throw ConfigError("theta must lie in [0,1)");
  if (c.nu1 < 0 || c.nu2 < 0 || c.nu1 + c.nu2 == 0) throw ConfigError("nu1 + nu2 must be positive");
  if (c.cycles < 1) throw ConfigError("cycles must be positive");
  parse_bc(c.bc);
  parse_pde(c.pde);
  parse_scheme(c.scheme);
  parse_norm(c.norm);
  parse_coarse(c.coarse);
  parse_dtau(c.dtau, blfa::Symbol::Polynomial);
}

inline void write_config(std::ostream& os, const RunConfig& c) {
  os << "case=" << c.case_name << '\n'
     << "N=" << c.n << '\n'
     << "dim=" << c.dim << '\n'
     << "bc=" << c.bc << '\n'
     << "pde=" << c.pde << '\n';
  std::ostringstream th;
  th.precision(17);
  th << c.theta;
  os << "theta=" << th.str() << '\n'
     << "dtau=" << c.dtau << '\n'
     << "scheme=" << c.scheme << '\n'
     << "nu1=" << c.nu1 << '\n'
     << "nu2=" << c.nu2 << '\n'
     << "seed=" << c.seed << '\n'
     << "cycles=" << c.cycles << '\n'
     << "norm=" << c.norm << '\n'
     << "coarse=" << c.coarse << '\n'
     << "out_dir=" << c.out_dir << '\n';
}

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  T out{};
  is >> out;
  if (is.fail() || !is.eof()) throw ConfigError("bad value for " + key + ": '" + v + "'");
  return out;
}
}  // namespace detail

/// Applies key=value lines to `c`; blank lines and '#' comments are skipped.
inline void read_config(std::istream& is, RunConfig& c) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string v = detail::trim(line.substr(eq + 1));
    if (key == "case") c.case_name = v;
    else if (key == "N") c.n = detail::parse_number<int>(key, v);
    else if (key == "dim") c.dim = detail::parse_number<int>(key, v);
    else if (key == "bc") c.bc = v;
    else if (key == "pde") c.pde = v;
    else if (key == "theta") c.theta = detail::parse_number<double>(key, v);
    else if (key == "dtau") c.dtau = v;
    else if (key == "scheme") c.scheme = v;
    else if (key == "nu1") c.nu1 = detail::parse_number<int>(key, v);
    else if (key == "nu2") c.nu2 = detail::parse_number<int>(key, v);
    else if (key == "seed") c.seed = detail::parse_number<std::uint64_t>(key, v);
    else if (key == "cycles") c.cycles = detail::parse_number<int>(key, v);
    else if (key == "norm") c.norm = v;
    else if (key == "coarse") c.coarse = v;
    else if (key == "out_dir") c.out_dir = v;
    else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  RunConfig c;
  read_config(f, c);
  return c;
}

}  // namespace bcmg
