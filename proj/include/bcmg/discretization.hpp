#pragma once

#include <cstddef>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "bcmg/classification.hpp"
#include "bcmg/grid.hpp"
#include "bcmg/interpolation.hpp"

namespace bcmg {

enum class BcType { Dirichlet, Neumann };

struct BcKind {
  BcType type = BcType::Dirichlet;
  /// One-dimensional stencil size s in {2, 3}; s = 3 is the default everywhere.
  int stencil_size = 3;
};

enum class PdeKind {
  Poisson,            ///< -lap u = f
  ReactionDiffusion,  ///< u - lap u = f
};

inline const char* to_string(BcType b) noexcept { return b == BcType::Dirichlet ? "dirichlet" : "neumann"; }
inline const char* to_string(PdeKind p) noexcept { return p == PdeKind::Poisson ? "poisson" : "reaction"; }

struct BcCoefficients {
  double c_m2 = 0.0;
  double c_m1 = 0.0;
  double c_0 = 0.0;
};

/// Coefficients of c_{-2} u_{N-2} + c_{-1} u_{N-1} + c_0 u_N for a boundary
/// at distance theta*h inside the ghost node u_N.
inline BcCoefficients bc_coeffs_1d(BcKind bc, double theta, double h) {
  if (bc.stencil_size != 2 && bc.stencil_size != 3)
    throw std::invalid_argument("bc_coeffs_1d: stencil size must be 2 or 3");
  if (bc.type == BcType::Dirichlet) {
    if (bc.stencil_size == 2) return {0.0, theta, 1.0 - theta};
    return {0.5 * theta * (theta - 1.0), theta * (2.0 - theta), 0.5 * (1.0 - theta) * (2.0 - theta)};
  }
  if (bc.stencil_size == 2) return {0.0, -1.0 / h, 1.0 / h};
  const double s = theta - 0.5;
  return {(0.0 - s) / h, (-1.0 + 2.0 * s) / h, (1.0 - s) / h};
}

/// Boundary equation of one ghost point: sum_k weights[k] * u[nodes[k]] = g(Q).
struct GhostRow {
  std::size_t ghost_node = 0;
  std::vector<std::size_t> nodes;
  std::vector<double> weights;
  /// Weight on the ghost node itself.
  double diagonal = 0.0;

  double apply(const Field& u) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * u[nodes[k]];
    return s;
  }
};

/// Ghost equation from the quadratic interpolant on the stencil: the
/// interpolated value at Q (Dirichlet) or its derivative along the normal at Q (Neumann).
template <int Dim>
GhostRow build_ghost_row(const GhostInfo<Dim>& ghost, BcType bc, const UniformGrid<Dim>& grid) {
  const auto w = ghost.weights();
  const double scale = bc == BcType::Dirichlet ? 1.0 : 1.0 / grid.spacing();
  GhostRow row;
  row.ghost_node = ghost.node;
  int slot = 0;
  for_each_block3<Dim>([&](const MultiIndex<Dim>& a) {
    const double c = bc == BcType::Dirichlet ? w.value[slot] : w.normal_derivative[slot];
    ++slot;
    if (c == 0.0) return;
    MultiIndex<Dim> m{};
    for (int k = 0; k < Dim; ++k) m[k] = ghost.stencil_corner[k] + a[k];
    const std::size_t node = grid.index(m);
    row.nodes.push_back(node);
    row.weights.push_back(scale * c);
    if (node == ghost.node) row.diagonal = scale * c;
  });
  return row;
}

/// Data of an elliptic problem; empty functions mean zero data.
template <int Dim>
struct ProblemSpec {
  PdeKind pde = PdeKind::Poisson;
  BcKind bc{};
  std::function<double(const Point<Dim>&)> f;
  /// Dirichlet data on the box boundary.
  std::function<double(const Point<Dim>&)> g_box;
  /// Boundary data on the curved boundary; for Neumann the prescribed normal derivative.
  std::function<double(const Point<Dim>&)> g_gamma;
};

/// Discrete operator on one grid: Laplacian (plus reaction) rows on internal
/// nodes and ghost rows on ghost nodes.
template <int Dim>
struct DiscreteOperator {
  GridClassification<Dim> cls;
  BcType bc = BcType::Dirichlet;
  PdeKind pde = PdeKind::Poisson;
  /// Parallel to cls.ghosts.
  std::vector<GhostRow> rows;

  const UniformGrid<Dim>& grid() const noexcept { return cls.grid; }
  double reaction() const noexcept { return pde == PdeKind::ReactionDiffusion ? 1.0 : 0.0; }
  double interior_diagonal() const noexcept {
    const double h = grid().spacing();
    return 2.0 * Dim / (h * h) + reaction();
  }

  /// (A u) at an internal node.
  double apply_interior_row(const Field& u, std::size_t node) const noexcept {
    const double h = grid().spacing();
    double nb = 0.0;
    for (int k = 0; k < Dim; ++k) {
      const std::size_t s = grid().stride(k);
      nb += u[node - s] + u[node + s];
    }
    return (2.0 * Dim * u[node] - nb) / (h * h) + reaction() * u[node];
  }
};

template <int Dim>
DiscreteOperator<Dim> discretize(GridClassification<Dim> cls, BcType bc, PdeKind pde) {
  DiscreteOperator<Dim> op{std::move(cls), bc, pde, {}};
  op.rows.reserve(op.cls.ghosts.size());
  for (const auto& g : op.cls.ghosts) op.rows.push_back(build_ghost_row(g, bc, op.grid()));
  return op;
}

/// A u on internal and ghost nodes, zero elsewhere. Eliminated values are read from u.
template <int Dim>
Field apply_operator(const DiscreteOperator<Dim>& op, const Field& u) {
  Field out(u.size(), 0.0);
  for (std::size_t node : op.cls.internal) out[node] = op.apply_interior_row(u, node);
  for (const auto& row : op.rows) out[row.ghost_node] = row.apply(u);
  return out;
}

/// b - A u on internal and ghost nodes, zero elsewhere.
template <int Dim>
Field residual(const DiscreteOperator<Dim>& op, const Field& u, const Field& b) {
  Field r(u.size(), 0.0);
  for (std::size_t node : op.cls.internal) r[node] = b[node] - op.apply_interior_row(u, node);
  for (const auto& row : op.rows) r[row.ghost_node] = b[row.ghost_node] - row.apply(u);
  return r;
}

/// Right-hand side field: f on internal nodes, g_gamma(Q) on ghost nodes.
template <int Dim>
Field build_rhs(const DiscreteOperator<Dim>& op, const ProblemSpec<Dim>& spec) {
  Field b = op.grid().make_field();
  if (spec.f)
    for (std::size_t node : op.cls.internal) b[node] = spec.f(op.grid().position(node));
  if (spec.g_gamma)
    for (const auto& g : op.cls.ghosts) b[g.node] = spec.g_gamma(g.q);
  return b;
}

/// Writes g_box into the eliminated nodes of u.
template <int Dim>
void apply_box_data(const DiscreteOperator<Dim>& op, const ProblemSpec<Dim>& spec, Field& u) {
  const std::size_t count = op.grid().node_count();
  for (std::size_t node = 0; node < count; ++node)
    if (op.cls.labels[node] == NodeLabel::DirichletEliminated)
      u[node] = spec.g_box ? spec.g_box(op.grid().position(node)) : 0.0;
}

/// Sparse system over the unknowns (internal nodes first, then ghosts, each lexicographic).
struct AssembledSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<std::size_t> dof_to_node;
  /// node -> dof, -1 for nodes that are not unknowns.
  std::vector<long> node_to_dof;
};

/// Assembles A_h u_h = f_h; eliminated box values in `u_known` are folded into the right-hand side.
template <int Dim>
AssembledSystem assemble_system(const DiscreteOperator<Dim>& op, const Field& b, const Field& u_known) {
  const auto& grid = op.grid();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  AssembledSystem sys;
  sys.node_to_dof.assign(grid.node_count(), -1);
  for (std::size_t node : op.cls.internal) {
    sys.node_to_dof[node] = static_cast<long>(sys.dof_to_node.size());
    sys.dof_to_node.push_back(node);
  }
  for (const auto& g : op.cls.ghosts) {
    sys.node_to_dof[g.node] = static_cast<long>(sys.dof_to_node.size());
    sys.dof_to_node.push_back(g.node);
  }
  const auto n = static_cast<Eigen::Index>(sys.dof_to_node.size());
  sys.rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(op.cls.internal.size() * (2 * Dim + 1) + op.rows.size() * 27);

  auto add = [&](long row, std::size_t node, double value) {
    const long col = sys.node_to_dof[node];
    if (col >= 0) {
      trip.emplace_back(row, col, value);
    } else if (op.cls.labels[node] == NodeLabel::DirichletEliminated) {
      sys.rhs[row] -= value * u_known[node];
    } else {
      throw std::logic_error("assemble_system: equation references an inactive node");
    }
  };

  for (std::size_t node : op.cls.internal) {
    const long row = sys.node_to_dof[node];
    sys.rhs[row] += b[node];
    add(row, node, 2.0 * Dim * inv_h2 + op.reaction());
    for (int k = 0; k < Dim; ++k) {
      add(row, node - grid.stride(k), -inv_h2);
      add(row, node + grid.stride(k), -inv_h2);
    }
  }
  for (const auto& r : op.rows) {
    const long row = sys.node_to_dof[r.ghost_node];
    sys.rhs[row] += b[r.ghost_node];
    for (std::size_t k = 0; k < r.nodes.size(); ++k) add(row, r.nodes[k], r.weights[k]);
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  return sys;
}

/// Coordinate-format dump: one "row col value" line per stored entry (0-based dofs).
inline void write_coo(const Eigen::SparseMatrix<double>& a, std::ostream& os) {
  char buf[96];
  for (Eigen::Index col = 0; col < a.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      os << buf;
    }
  }
}

}  // namespace bcmg
