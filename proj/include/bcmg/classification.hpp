#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bcmg/errors.hpp"
#include "bcmg/grid.hpp"
#include "bcmg/interpolation.hpp"
#include "bcmg/levelset.hpp"

namespace bcmg {

enum class NodeLabel : std::uint8_t { Inactive, Internal, Ghost, DirichletEliminated };

inline const char* to_string(NodeLabel l) noexcept {
  switch (l) {
    case NodeLabel::Inactive: return "inactive";
    case NodeLabel::Internal: return "internal";
    case NodeLabel::Ghost: return "ghost";
    case NodeLabel::DirichletEliminated: return "dirichlet";
  }
  return "?";
}

/// Geometry attached to one ghost point.
template <int Dim>
struct GhostInfo {
  std::size_t node = 0;
  Point<Dim> q{};
  /// Outward unit normal at the ghost point; orients the stencil.
  Point<Dim> normal{};
  /// Outward unit normal at Q; used by Neumann rows.
  Point<Dim> normal_at_q{};
  double eta = 0.0;
  double theta_tilde = 0.0;
  /// Lowest corner of the 3^Dim stencil block.
  MultiIndex<Dim> stencil_corner{};
  /// Q relative to stencil_corner in grid units, each entry in [0,2].
  Point<Dim> local{};
  /// Block slots (for_each_block3 order) left out of the ghost equation; nonzero
  /// only for ghosts whose every admissible block touches an inactive node.
  std::uint32_t excluded = 0;

  BlockWeights<Dim> weights() const {
    if (excluded == 0) return block_weights<Dim>(local, normal_at_q);
    return *reduced_block_weights<Dim>(local, normal_at_q, excluded);
  }
};

/// Per-node labels plus ghost metadata for one grid. Immutable once built.
template <int Dim>
struct GridClassification {
  UniformGrid<Dim> grid;
  std::vector<NodeLabel> labels;
  std::vector<GhostInfo<Dim>> ghosts;
  /// Internal node indices in increasing (lexicographic) order.
  std::vector<std::size_t> internal;
  /// node -> position in `ghosts`, or -1.
  std::vector<int> ghost_slot;

  explicit GridClassification(const UniformGrid<Dim>& g) : grid(g) {}

  NodeLabel label(std::size_t node) const { return labels[node]; }
  bool is_active(std::size_t node) const {
    return labels[node] == NodeLabel::Internal || labels[node] == NodeLabel::Ghost;
  }

  /// The 3^Dim node indices of a ghost's stencil in for_each_block3 order.
  std::vector<std::size_t> stencil(const GhostInfo<Dim>& g) const {
    std::vector<std::size_t> nodes;
    nodes.reserve(BlockWeights<Dim>::size);
    for_each_block3<Dim>([&](const MultiIndex<Dim>& a) {
      MultiIndex<Dim> m{};
      for (int k = 0; k < Dim; ++k) m[k] = g.stencil_corner[k] + a[k];
      nodes.push_back(grid.index(m));
    });
    return nodes;
  }
};

struct ClassifyOptions {
  /// Box-boundary nodes with phi < 0 carry eliminated Dirichlet data g_B.
  bool eliminate_box_boundary = true;
};

/// Normal components with magnitude at or below this are treated as zero
/// when orienting the stencil.
inline constexpr double kAxisAlignedTolerance = 1e-12;

/// 3^Dim block containing G and reaching into the domain opposite to n.
///
/// Along an axis with n_k > 0 the block covers {g-2, g-1, g}, with n_k < 0 it
/// covers {g, g+1, g+2}; an axis-aligned (zero) component centres the block on g.
template <int Dim>
MultiIndex<Dim> upwind_stencil(const MultiIndex<Dim>& ghost, const Point<Dim>& n, const UniformGrid<Dim>& grid,
                               MultiIndex<Dim>* ghost_position = nullptr) {
  MultiIndex<Dim> corner{};
  for (int k = 0; k < Dim; ++k) {
    int pos = 1;
    if (n[k] > kAxisAlignedTolerance) pos = 2;
    else if (n[k] < -kAxisAlignedTolerance) pos = 0;
    corner[k] = ghost[k] - pos;
    if (ghost_position) (*ghost_position)[k] = pos;
    if (corner[k] < 0 || corner[k] + 2 > grid.cells())
      throw ResolutionError("upwind_stencil: stencil of ghost leaves the computational box");
  }
  return corner;
}

namespace detail {

/// Block positions of the ghost along each axis to try, best first: the
/// upwind position, then the centred one, then the opposite side.
template <int Dim>
std::vector<MultiIndex<Dim>> stencil_candidates(const MultiIndex<Dim>& upwind) {
  std::vector<std::pair<int, MultiIndex<Dim>>> out;
  std::array<std::vector<int>, Dim> alt;
  for (int k = 0; k < Dim; ++k) {
    alt[k] = {upwind[k]};
    if (upwind[k] != 1) alt[k].insert(alt[k].end(), {1, 2 - upwind[k]});
  }
  MultiIndex<Dim> choice{};
  while (true) {
    MultiIndex<Dim> pos{};
    int deviations = 0;
    for (int k = 0; k < Dim; ++k) {
      pos[k] = alt[k][choice[k]];
      deviations += choice[k] != 0;
    }
    out.emplace_back(deviations, pos);
    int k = 0;
    while (k < Dim && choice[k] + 1 == static_cast<int>(alt[k].size())) choice[k++] = 0;
    if (k == Dim) break;
    ++choice[k];
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<MultiIndex<Dim>> result;
  for (const auto& c : out) result.push_back(c.second);
  return result;
}

/// Picks the ghost's 3^Dim block: the upwind block when every node carrying a
/// nonzero value or derivative weight is active or eliminated, otherwise the
/// first such block among the alternatives that still encloses Q. When every
/// block fails, the inactive nodes are dropped from the first enclosing block
/// and the reduced quadratic weights are used instead.
template <int Dim>
bool choose_stencil(const GridClassification<Dim>& cls, GhostInfo<Dim>& g, const MultiIndex<Dim>& m) {
  const auto& grid = cls.grid;
  MultiIndex<Dim> upwind{};
  for (int k = 0; k < Dim; ++k) {
    upwind[k] = 1;
    if (g.normal[k] > kAxisAlignedTolerance) upwind[k] = 2;
    else if (g.normal[k] < -kAxisAlignedTolerance) upwind[k] = 0;
  }
  constexpr double slack = 1e-12;
  const auto candidates = stencil_candidates<Dim>(upwind);

  auto place = [&](const MultiIndex<Dim>& pos, MultiIndex<Dim>& corner, Point<Dim>& local) {
    for (int k = 0; k < Dim; ++k) {
      corner[k] = m[k] - pos[k];
      local[k] = pos[k] - g.eta * g.normal[k];
      if (corner[k] < 0 || corner[k] + 2 > grid.cells() || local[k] < -slack || local[k] > 2.0 + slack) return false;
    }
    return true;
  };
  auto inactive_slots = [&](const MultiIndex<Dim>& corner, const BlockWeights<Dim>* w) {
    std::uint32_t mask = 0;
    int slot = 0;
    for_each_block3<Dim>([&](const MultiIndex<Dim>& a) {
      MultiIndex<Dim> s{};
      for (int k = 0; k < Dim; ++k) s[k] = corner[k] + a[k];
      const bool used = !w || w->value[slot] != 0.0 || w->normal_derivative[slot] != 0.0;
      if (used && cls.labels[grid.index(s)] == NodeLabel::Inactive) mask |= 1u << slot;
      ++slot;
    });
    return mask;
  };

  for (const auto& pos : candidates) {
    MultiIndex<Dim> corner{};
    Point<Dim> local{};
    if (!place(pos, corner, local)) continue;
    const auto w = block_weights<Dim>(local, g.normal_at_q);
    if (inactive_slots(corner, &w) != 0) continue;
    g.stencil_corner = corner;
    g.local = local;
    g.excluded = 0;
    return true;
  }

  for (const auto& pos : candidates) {
    MultiIndex<Dim> corner{};
    Point<Dim> local{};
    if (!place(pos, corner, local)) continue;
    const std::uint32_t mask = inactive_slots(corner, nullptr);
    const auto w = reduced_block_weights<Dim>(local, g.normal_at_q, mask);
    if (!w) continue;
    g.stencil_corner = corner;
    g.local = local;
    g.excluded = mask;
    return true;
  }
  return false;
}

}  // namespace detail

/// Labels every node and builds the ghost metadata.
///
/// A node is Internal when phi < 0 away from the box boundary, Ghost when it
/// is not Internal (nor eliminated) and one of its 2*Dim axis neighbours is
/// Internal, DirichletEliminated on the box boundary inside the domain, and
/// Inactive otherwise.
template <int Dim>
GridClassification<Dim> classify(const UniformGrid<Dim>& grid, const LevelSet<Dim>& phi,
                                 const ClassifyOptions& opts = {}) {
  if (grid.cells() < 4) throw std::invalid_argument("classify: need N >= 4");
  const double h = grid.spacing();
  GridClassification<Dim> cls(grid);
  const std::size_t count = grid.node_count();
  cls.labels.assign(count, NodeLabel::Inactive);
  cls.ghost_slot.assign(count, -1);

  for (std::size_t idx = 0; idx < count; ++idx) {
    const auto m = grid.multi_index(idx);
    const bool inside = phi(grid.position(m)) < 0.0;
    if (!inside) continue;
    if (grid.on_boundary(m)) {
      if (opts.eliminate_box_boundary) cls.labels[idx] = NodeLabel::DirichletEliminated;
    } else {
      cls.labels[idx] = NodeLabel::Internal;
      cls.internal.push_back(idx);
    }
  }

  for (std::size_t idx = 0; idx < count; ++idx) {
    if (cls.labels[idx] != NodeLabel::Inactive) continue;
    const auto m = grid.multi_index(idx);
    bool touches = false;
    for (int k = 0; k < Dim && !touches; ++k) {
      for (int s : {-1, 1}) {
        auto nb = m;
        nb[k] += s;
        if (grid.contains(nb) && cls.labels[grid.index(nb)] == NodeLabel::Internal) {
          touches = true;
          break;
        }
      }
    }
    if (touches) cls.labels[idx] = NodeLabel::Ghost;
  }

  for (std::size_t idx = 0; idx < count; ++idx) {
    if (cls.labels[idx] != NodeLabel::Ghost) continue;
    const auto m = grid.multi_index(idx);
    GhostInfo<Dim> g;
    g.node = idx;
    const Point<Dim> x = grid.position(m);
    g.normal = compute_normal<Dim>(phi, x, h);
    const auto proj = project_to_boundary<Dim>(x, g.normal, phi, h);
    g.q = proj.q;
    g.eta = proj.eta;
    g.theta_tilde = proj.theta_tilde;
    g.normal_at_q = compute_normal<Dim>(phi, g.q, h);
    if (!detail::choose_stencil<Dim>(cls, g, m))
      throw ResolutionError("classify: every admissible stencil of ghost node " + std::to_string(idx) +
                            " contains an inactive node (grid too coarse, N=" + std::to_string(grid.cells()) + ")");

    cls.ghost_slot[idx] = static_cast<int>(cls.ghosts.size());
    cls.ghosts.push_back(g);
  }
  return cls;
}

}  // namespace bcmg
