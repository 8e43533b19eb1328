#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcmg/blfa.hpp"
#include "bcmg/discretization.hpp"

namespace bcmg {

/// How the fictitious time step of each ghost relaxation is chosen.
struct DtauMode {
  enum class Kind { Constant, BlfaOptimal };
  Kind kind = Kind::BlfaOptimal;
  /// Constant step; for Neumann rows it is the normalised step dtau/h.
  double value = 1.0;
  blfa::Symbol symbol = blfa::Symbol::Polynomial;

  static DtauMode constant(double v) { return {Kind::Constant, v, blfa::Symbol::Polynomial}; }
  static DtauMode optimal(blfa::Symbol s) { return {Kind::BlfaOptimal, 0.0, s}; }

  std::string describe() const {
    if (kind == Kind::Constant) return "constant:" + std::to_string(value);
    return std::string("blfa-") + blfa::to_string(symbol);
  }
};

struct SmootherConfig {
  DtauMode dtau{};
  int nu1 = 2;
  int nu2 = 1;
};

/// Per-ghost step for one grid. In BLFA mode it depends only on theta~, the
/// boundary condition and (for Neumann) h.
template <int Dim>
std::vector<double> ghost_dtau(const DiscreteOperator<Dim>& op, const DtauMode& mode) {
  const double h = op.grid().spacing();
  std::vector<double> dt(op.cls.ghosts.size());
  for (std::size_t k = 0; k < dt.size(); ++k) {
    if (mode.kind == DtauMode::Kind::Constant) {
      dt[k] = op.bc == BcType::Neumann ? mode.value * h : mode.value;
    } else {
      dt[k] = blfa::dtau_opt({op.bc, Dim, op.cls.ghosts[k].theta_tilde, h, mode.symbol});
    }
  }
  return dt;
}

/// One lexicographic Gauss-Seidel sweep over the internal nodes.
template <int Dim>
void gs_lex_sweep(const DiscreteOperator<Dim>& op, Field& u, const Field& b) {
  const auto& grid = op.grid();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  const double inv_diag = 1.0 / op.interior_diagonal();
  std::size_t strides[Dim];
  for (int k = 0; k < Dim; ++k) strides[k] = grid.stride(k);
  for (std::size_t node : op.cls.internal) {
    double nb = 0.0;
    for (int k = 0; k < Dim; ++k) nb += u[node - strides[k]] + u[node + strides[k]];
    u[node] = (b[node] + nb * inv_h2) * inv_diag;
  }
}

/// u_G <- u_G + dtau_G (g - row . u) for every ghost in list order, using the
/// freshest available values.
template <int Dim>
void ghost_relax_sweep(const DiscreteOperator<Dim>& op, Field& u, const Field& b, std::span<const double> dtau) {
  if (dtau.size() != op.rows.size()) throw std::invalid_argument("ghost_relax_sweep: one step per ghost required");
  for (std::size_t k = 0; k < op.rows.size(); ++k) {
    const auto& row = op.rows[k];
    u[row.ghost_node] += dtau[k] * (b[row.ghost_node] - row.apply(u));
  }
}

/// count x (interior GS-LEX sweep, then one ghost relaxation sweep).
template <int Dim>
void smooth(const DiscreteOperator<Dim>& op, Field& u, const Field& b, std::span<const double> dtau, int count) {
  for (int s = 0; s < count; ++s) {
    gs_lex_sweep(op, u, b);
    ghost_relax_sweep(op, u, b, dtau);
  }
}

}  // namespace bcmg
