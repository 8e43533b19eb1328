#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "bcmg/classification.hpp"
#include "bcmg/discretization.hpp"
#include "bcmg/errors.hpp"
#include "bcmg/levelset.hpp"
#include "bcmg/rng.hpp"
#include "bcmg/smoother.hpp"
#include "bcmg/transfer.hpp"

namespace bcmg {

enum class Scheme { TwoGrid, V, W };
enum class NormKind { Inf, L2 };
enum class CoarseSolverKind { Direct, HeavyIteration };

inline const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::TwoGrid: return "tgcs";
    case Scheme::V: return "v";
    case Scheme::W: return "w";
  }
  return "?";
}

inline const char* to_string(NormKind n) noexcept { return n == NormKind::Inf ? "inf" : "l2"; }

struct CycleConfig {
  Scheme scheme = Scheme::TwoGrid;
  SmootherConfig smoother{};
  CoarseSolverKind coarse_solver = CoarseSolverKind::Direct;
  int heavy_sweeps = 500;
  int max_cycles = 16;
  /// Stop when ||r|| <= tol * ||r_0|| (solve only); 0 disables the test.
  double tol = 0.0;
  NormKind norm = NormKind::Inf;

  int gamma() const noexcept { return scheme == Scheme::W ? 2 : 1; }
};

struct CycleReport {
  std::vector<double> residual_norms;
  std::vector<double> rho_sequence;
  /// Mean of rho^(m), m = 11..15; NaN when fewer than 16 cycles ran.
  double rho_asymptotic = std::numeric_limits<double>::quiet_NaN();
  bool diverged = false;
  int cycles = 0;
};

/// Index range of the asymptotic averaging window.
inline constexpr int kRhoWindowFirst = 11;
inline constexpr int kRhoWindowLast = 15;
inline constexpr double kDivergenceFactor = 1e6;
inline constexpr double kRescaleThreshold = 1e-250;

template <int Dim>
struct Level {
  DiscreteOperator<Dim> op;
  ExtrapolationBand<Dim> band;
};

/// Levels from the finest grid down to the coarsest one that still resolves
/// the geometry, each re-classified from the same level set.
template <int Dim>
struct Hierarchy {
  std::vector<Level<Dim>> levels;
  CoarseSolverKind coarse_solver = CoarseSolverKind::Direct;

  struct CoarseFactor {
    AssembledSystem system;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  };
  std::shared_ptr<CoarseFactor> coarse;

  std::size_t size() const noexcept { return levels.size(); }
  const Level<Dim>& finest() const { return levels.front(); }
  const Level<Dim>& coarsest() const { return levels.back(); }
};

struct HierarchyOptions {
  /// 0 = coarsen as far as possible.
  int max_levels = 0;
  int coarsest_min = 4;
  CoarseSolverKind coarse_solver = CoarseSolverKind::Direct;
  ClassifyOptions classify{};
};

template <int Dim>
Hierarchy<Dim> build_hierarchy(const UniformGrid<Dim>& fine, const LevelSet<Dim>& phi, BcType bc, PdeKind pde,
                               const HierarchyOptions& opts = {}) {
  Hierarchy<Dim> h;
  h.coarse_solver = opts.coarse_solver;
  auto add_level = [&](const UniformGrid<Dim>& grid) {
    auto op = discretize(classify(grid, phi, opts.classify), bc, pde);
    auto band = build_band(op.cls, phi);
    h.levels.push_back({std::move(op), std::move(band)});
  };
  add_level(fine);
  UniformGrid<Dim> grid = fine;
  while (grid.can_coarsen(opts.coarsest_min) &&
         (opts.max_levels == 0 || static_cast<int>(h.levels.size()) < opts.max_levels)) {
    grid = grid.coarsened();
    try {
      add_level(grid);
    } catch (const ResolutionError&) {
      break;
    } catch (const ProjectionError&) {
      break;
    }
  }
  if (h.levels.size() < 2)
    throw ResolutionError("build_hierarchy: no coarse grid resolves the geometry (N=" +
                          std::to_string(fine.cells()) + ")");

  if (opts.coarse_solver == CoarseSolverKind::Direct) {
    const auto& op = h.coarsest().op;
    const Field zero = op.grid().make_field();
    auto cf = std::make_shared<typename Hierarchy<Dim>::CoarseFactor>();
    cf->system = assemble_system(op, zero, zero);
    cf->lu.compute(cf->system.matrix);
    if (cf->lu.info() != Eigen::Success)
      throw CoarseSolveError("build_hierarchy: sparse LU of the coarsest operator failed: " + cf->lu.lastErrorMessage());
    h.coarse = std::move(cf);
  }
  return h;
}

/// Ghost steps of every level for one relaxation mode.
template <int Dim>
std::vector<std::vector<double>> level_dtau(const Hierarchy<Dim>& h, const DtauMode& mode) {
  std::vector<std::vector<double>> out;
  out.reserve(h.size());
  for (const auto& l : h.levels) out.push_back(ghost_dtau(l.op, mode));
  return out;
}

/// Norm of the residual over internal and ghost nodes.
template <int Dim>
double residual_norm(const DiscreteOperator<Dim>& op, const Field& r, NormKind kind) {
  double acc = 0.0;
  auto take = [&](double v) {
    if (kind == NormKind::Inf) acc = std::max(acc, std::abs(v));
    else acc += v * v;
  };
  for (std::size_t n : op.cls.internal) take(r[n]);
  for (const auto& g : op.cls.ghosts) take(r[g.node]);
  return kind == NormKind::Inf ? acc : std::sqrt(acc);
}

/// Multigrid driver bound to a hierarchy and one cycle configuration.
template <int Dim>
class MultigridSolver {
 public:
  MultigridSolver(const Hierarchy<Dim>& h, CycleConfig cfg) : h_(h), cfg_(std::move(cfg)) {
    if (cfg_.scheme == Scheme::TwoGrid && h_.size() != 2)
      throw std::invalid_argument("MultigridSolver: the two-grid scheme needs a two-level hierarchy");
    if (cfg_.coarse_solver == CoarseSolverKind::Direct && !h_.coarse)
      throw CoarseSolveError("MultigridSolver: hierarchy was built without a coarse factorization");
    dtau_ = level_dtau(h_, cfg_.smoother.dtau);
  }

  const CycleConfig& config() const noexcept { return cfg_; }
  const std::vector<std::vector<double>>& dtau() const noexcept { return dtau_; }

  /// One cycle on the finest level.
  void cycle(Field& u, const Field& b) const { cycle_at(0, u, b); }

  /// Solves A u = b by cycling until the tolerance or max_cycles is reached.
  CycleReport solve(Field& u, const Field& b) const {
    const auto& op = h_.finest().op;
    CycleReport rep;
    rep.residual_norms.push_back(residual_norm(op, residual(op, u, b), cfg_.norm));
    const double r0 = rep.residual_norms.front();
    for (int c = 0; c < cfg_.max_cycles; ++c) {
      if (r0 == 0.0 || (cfg_.tol > 0.0 && rep.residual_norms.back() <= cfg_.tol * r0)) break;
      cycle(u, b);
      const double rn = residual_norm(op, residual(op, u, b), cfg_.norm);
      rep.rho_sequence.push_back(rn / rep.residual_norms.back());
      rep.residual_norms.push_back(rn);
      ++rep.cycles;
      if (!std::isfinite(rn) || rn > kDivergenceFactor * r0) {
        rep.diverged = true;
        break;
      }
    }
    finish_rho(rep);
    return rep;
  }

  /// Asymptotic convergence factor of the homogeneous problem from a seeded
  /// uniform(-1,1) initial guess on the internal and ghost nodes. The last
  /// iterate, up to the underflow rescaling, is copied to `last` if given.
  CycleReport measure_rho(std::uint64_t seed = 42, int cycles = 16, Field* last = nullptr) const {
    const auto& op = h_.finest().op;
    Field u = op.grid().make_field();
    const Field b = op.grid().make_field();
    Xorshift64Star rng(seed);
    for (std::size_t n = 0; n < u.size(); ++n)
      if (op.cls.is_active(n)) u[n] = rng.uniform(-1.0, 1.0);

    CycleReport rep;
    double scale = 1.0;  // true iterate = scale * u
    double current = residual_norm(op, residual(op, u, b), cfg_.norm);
    const double r0 = current;
    rep.residual_norms.push_back(current);
    for (int c = 0; c < cycles; ++c) {
      cycle(u, b);
      const double rn = residual_norm(op, residual(op, u, b), cfg_.norm);
      ++rep.cycles;
      if (!std::isfinite(rn) || scale * rn > kDivergenceFactor * r0) {
        rep.diverged = true;
        rep.residual_norms.push_back(scale * rn);
        break;
      }
      rep.rho_sequence.push_back(current > 0.0 ? rn / current : 0.0);
      rep.residual_norms.push_back(scale * rn);
      current = rn;
      double umax = 0.0;
      for (double v : u) umax = std::max(umax, std::abs(v));
      if (umax > 0.0 && umax < kRescaleThreshold) {
        for (double& v : u) v /= umax;
        current /= umax;
        scale *= umax;
      }
    }
    finish_rho(rep);
    if (last) *last = u;
    return rep;
  }

 private:
  static void finish_rho(CycleReport& rep) {
    if (rep.diverged) {
      rep.rho_asymptotic = 1.0;
      return;
    }
    if (static_cast<int>(rep.rho_sequence.size()) <= kRhoWindowLast) return;
    double s = 0.0;
    for (int m = kRhoWindowFirst; m <= kRhoWindowLast; ++m) s += rep.rho_sequence[m];
    rep.rho_asymptotic = std::min(1.0, s / (kRhoWindowLast - kRhoWindowFirst + 1));
  }

  void coarse_solve(Field& u, const Field& b) const {
    const std::size_t last = h_.size() - 1;
    const auto& op = h_.levels[last].op;
    if (cfg_.coarse_solver == CoarseSolverKind::HeavyIteration) {
      smooth(op, u, b, dtau_[last], cfg_.heavy_sweeps);
      return;
    }
    const auto& sys = h_.coarse->system;
    // u enters only through eliminated box values, which are zero for corrections.
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(sys.dof_to_node.size()));
    for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = b[sys.dof_to_node[i]];
    Eigen::VectorXd x = h_.coarse->lu.solve(rhs);
    if (h_.coarse->lu.info() != Eigen::Success || !x.allFinite())
      throw CoarseSolveError("coarse_solve: sparse LU solve failed");
    for (Eigen::Index i = 0; i < x.size(); ++i) u[sys.dof_to_node[i]] = x[i];
  }

  void cycle_at(std::size_t l, Field& u, const Field& b) const {
    if (l + 1 == h_.size()) {
      coarse_solve(u, b);
      return;
    }
    const auto& fine = h_.levels[l];
    const auto& coarse = h_.levels[l + 1];
    smooth(fine.op, u, b, dtau_[l], cfg_.smoother.nu1);

    Field r = residual(fine.op, u, b);
    Field rc = restrict_interior(r, fine.op.cls, coarse.op.cls);
    extrapolate(fine.band, r);
    const Field rg = restrict_ghost(r, fine.op.cls, fine.band, coarse.op.cls);
    for (const auto& g : coarse.op.cls.ghosts) rc[g.node] = rg[g.node];

    Field ec = coarse.op.grid().make_field();
    const int visits = l + 2 == h_.size() ? 1 : cfg_.gamma();
    for (int k = 0; k < visits; ++k) cycle_at(l + 1, ec, rc);
    extrapolate(coarse.band, ec);
    const Field e = interpolate_error(ec, coarse.op.grid(), fine.op.cls);
    for (std::size_t n : fine.op.cls.internal) u[n] += e[n];
    for (const auto& g : fine.op.cls.ghosts) u[g.node] += e[g.node];

    smooth(fine.op, u, b, dtau_[l], cfg_.smoother.nu2);
  }

  const Hierarchy<Dim>& h_;
  CycleConfig cfg_;
  std::vector<std::vector<double>> dtau_;
};

/// Hierarchy depth implied by a scheme: two levels for the two-grid scheme.
inline HierarchyOptions hierarchy_options_for(Scheme s, CoarseSolverKind coarse = CoarseSolverKind::Direct) {
  HierarchyOptions o;
  o.max_levels = s == Scheme::TwoGrid ? 2 : 0;
  o.coarse_solver = coarse;
  return o;
}

}  // namespace bcmg
