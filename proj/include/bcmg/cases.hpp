#pragma once

// Named test geometries and the measurement run behind `solve`.

#include <algorithm>
#include <chrono>
#include <string>
#include <type_traits>
#include <vector>

#include "bcmg/config.hpp"
#include "bcmg/levelset.hpp"
#include "bcmg/mg_solver.hpp"

namespace bcmg {

struct CaseInfo {
  std::string name;
  /// 0 when the dimension is taken from RunConfig::dim.
  int dim = 2;
  /// Straight boundary at distance theta*h from the ghost layer.
  bool rectangular = false;
  std::string description;
};

inline const std::vector<CaseInfo>& case_registry() {
  static const std::vector<CaseInfo> reg = {
      {"interval", 1, true, "1D: Omega = (-1, 1 - theta h), ghost at x = 1"},
      {"vline", 2, true, "2D: half-plane x < 1 - theta h"},
      {"circle", 2, false, "2D: circle of radius sqrt(2)/2 centred at (sqrt(3)/40, -sqrt(4)/40)"},
      {"flower", 2, false, "2D: five-petal flower r = 0.5 + 0.2 sin(5 gamma) centred at the origin"},
      {"line30", 2, false, "2D: below the line of slope -1/sqrt(3) through (1 - 0.7 h, 0)"},
      {"plane3d", 3, true, "3D: half-space x < 1 - theta h"},
      {"ellipsoid", 3, false, "3D: ellipsoid with semiaxes (0.686, 0.386, 0.586)"},
      {"box", 0, false, "whole box, no curved boundary; dimension from dim"},
  };
  return reg;
}

inline const CaseInfo& find_case(const std::string& name) {
  for (const auto& c : case_registry())
    if (c.name == name) return c;
  std::string names;
  for (const auto& c : case_registry()) names += (names.empty() ? "" : ", ") + c.name;
  throw ConfigError("unknown case '" + name + "'; available: " + names);
}

inline int case_dim(const RunConfig& c) {
  const auto& info = find_case(c.case_name);
  return info.dim == 0 ? c.dim : info.dim;
}

/// The symbol plain "blfa" stands for: the discrete one on straight
/// boundaries, the exponential one on curved boundaries.
inline blfa::Symbol default_symbol(const RunConfig& c) {
  return find_case(c.case_name).rectangular ? blfa::Symbol::Polynomial : blfa::Symbol::Exponential;
}

template <int Dim>
LevelSet<Dim> case_level_set(const RunConfig& c) {
  const double h = 2.0 / c.n;
  const std::string& name = c.case_name;
  if (case_dim(c) != Dim) throw ConfigError("case '" + name + "' is not " + std::to_string(Dim) + "-dimensional");
  if (name == "box") return shapes::whole_box<Dim>();
  if constexpr (Dim == 1) {
    return shapes::interval(1.0 - c.theta * h);
  } else if constexpr (Dim == 2) {
    if (name == "vline") return shapes::vertical_plane<2>(1.0 - c.theta * h);
    if (name == "circle") return shapes::reference_circle();
    if (name == "flower") return shapes::reference_flower();
    if (name == "line30") return shapes::oblique_line(h);
  } else {
    if (name == "plane3d") return shapes::vertical_plane<3>(1.0 - c.theta * h);
    if (name == "ellipsoid") return shapes::reference_ellipsoid();
  }
  throw ConfigError("case '" + name + "' has no level set");
}

/// Calls fn(std::integral_constant<int, d>{}) with the case dimension d.
template <typename Fn>
decltype(auto) with_case_dim(const RunConfig& c, Fn&& fn) {
  switch (case_dim(c)) {
    case 1: return fn(std::integral_constant<int, 1>{});
    case 2: return fn(std::integral_constant<int, 2>{});
    case 3: return fn(std::integral_constant<int, 3>{});
  }
  throw ConfigError("dimension must be 1, 2 or 3");
}

template <int Dim>
Hierarchy<Dim> case_hierarchy(const RunConfig& c) {
  const auto cc = cycle_config(c, default_symbol(c));
  return build_hierarchy(UniformGrid<Dim>(c.n), case_level_set<Dim>(c), parse_bc(c.bc), parse_pde(c.pde),
                         hierarchy_options_for(cc.scheme, cc.coarse_solver));
}

struct RunResult {
  CycleReport report;
  int dim = 2;
  int n = 0;
  int levels = 0;
  std::size_t internal = 0;
  std::size_t ghosts = 0;
  double dtau_min = 0.0;
  double dtau_max = 0.0;
  double seconds = 0.0;
  std::vector<NodeLabel> labels;
  /// Last iterate of the measurement.
  Field u;
};

/// Convergence-factor measurement of one configuration: homogeneous problem,
/// seeded random initial guess, `cycles` cycles.
inline RunResult run_measurement(const RunConfig& c) {
  validate(c);
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res = with_case_dim(c, [&](auto d) {
    constexpr int Dim = decltype(d)::value;
    const auto h = case_hierarchy<Dim>(c);
    const MultigridSolver<Dim> solver(h, cycle_config(c, default_symbol(c)));
    RunResult r;
    r.dim = Dim;
    r.n = c.n;
    r.levels = static_cast<int>(h.size());
    r.internal = h.finest().op.cls.internal.size();
    r.ghosts = h.finest().op.cls.ghosts.size();
    const auto& dt = solver.dtau().front();
    if (!dt.empty()) {
      r.dtau_min = *std::min_element(dt.begin(), dt.end());
      r.dtau_max = *std::max_element(dt.begin(), dt.end());
    }
    r.report = solver.measure_rho(c.seed, c.cycles, &r.u);
    r.labels = h.finest().op.cls.labels;
    return r;
  });
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

}  // namespace bcmg
