#pragma once

// Grid transfers between a fine grid and its 2h coarsening.
//
// Internal and ghost residuals scale with different powers of h, so they are
// restricted separately: interior residuals only ever read internal fine
// nodes, ghost residuals only ever read ghost nodes and the band of inactive
// nodes they have been extrapolated into.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "bcmg/classification.hpp"
#include "bcmg/errors.hpp"
#include "bcmg/grid.hpp"
#include "bcmg/levelset.hpp"

namespace bcmg {

/// Width, in cells, of the inactive band that receives extrapolated values.
inline constexpr int kBandCells = 3;
/// Explicit Euler steps of the extrapolation, each with pseudo-time step 0.5 h.
inline constexpr int kExtrapolationSteps = 2 * kBandCells;

/// Inactive nodes near the boundary plus the precomputed upwind transport
/// stencil used to extend ghost values along the outward normal.
template <int Dim>
struct ExtrapolationBand {
  /// Band nodes ordered by layer, then by node index.
  std::vector<std::size_t> nodes;
  std::vector<int> layer;
  /// Initial-guess sources: ghost or band nodes of a lower layer in the 3^Dim neighbourhood.
  std::vector<std::vector<std::size_t>> sources;
  /// Upwind neighbour per axis (or -1) and its weight |n_k|.
  std::vector<std::array<long long, Dim>> upwind;
  std::vector<std::array<double, Dim>> upwind_weight;
  /// node -> true for ghosts and band nodes.
  std::vector<char> carries_value;
};

template <int Dim>
ExtrapolationBand<Dim> build_band(const GridClassification<Dim>& cls, const LevelSet<Dim>& phi,
                                  int band_cells = kBandCells) {
  const auto& grid = cls.grid;
  const std::size_t count = grid.node_count();
  ExtrapolationBand<Dim> band;
  band.carries_value.assign(count, 0);
  std::vector<int> layer(count, -1);
  std::vector<std::size_t> frontier;
  for (const auto& g : cls.ghosts) {
    layer[g.node] = 0;
    band.carries_value[g.node] = 1;
    frontier.push_back(g.node);
  }

  for (int l = 1; l <= band_cells && !frontier.empty(); ++l) {
    std::vector<std::size_t> next;
    for (std::size_t node : frontier) {
      const auto m = grid.multi_index(node);
      for_each_unit_offset<Dim>([&](const MultiIndex<Dim>& o) {
        MultiIndex<Dim> nb = m;
        for (int k = 0; k < Dim; ++k) nb[k] += o[k];
        if (!grid.contains(nb)) return;
        const std::size_t idx = grid.index(nb);
        if (cls.labels[idx] != NodeLabel::Inactive || layer[idx] >= 0) return;
        layer[idx] = l;
        next.push_back(idx);
      });
    }
    std::sort(next.begin(), next.end());
    for (std::size_t node : next) {
      band.nodes.push_back(node);
      band.layer.push_back(l);
      band.carries_value[node] = 1;
    }
    frontier = std::move(next);
  }

  const double h = grid.spacing();
  band.sources.resize(band.nodes.size());
  band.upwind.resize(band.nodes.size());
  band.upwind_weight.resize(band.nodes.size());
  for (std::size_t b = 0; b < band.nodes.size(); ++b) {
    const std::size_t node = band.nodes[b];
    const auto m = grid.multi_index(node);
    for_each_unit_offset<Dim>([&](const MultiIndex<Dim>& o) {
      MultiIndex<Dim> nb = m;
      for (int k = 0; k < Dim; ++k) nb[k] += o[k];
      if (!grid.contains(nb)) return;
      const std::size_t idx = grid.index(nb);
      if (layer[idx] >= 0 && layer[idx] < band.layer[b]) band.sources[b].push_back(idx);
    });

    Point<Dim> n{};
    try {
      n = compute_normal<Dim>(phi, grid.position(m), h);
    } catch (const DegenerateGradientError&) {
      n = Point<Dim>{};
    }
    for (int k = 0; k < Dim; ++k) {
      band.upwind[b][k] = -1;
      band.upwind_weight[b][k] = 0.0;
      if (std::abs(n[k]) <= kAxisAlignedTolerance) continue;
      MultiIndex<Dim> up = m;
      up[k] += n[k] > 0.0 ? -1 : 1;
      if (!grid.contains(up)) continue;
      const std::size_t idx = grid.index(up);
      if (!band.carries_value[idx]) continue;
      band.upwind[b][k] = static_cast<long long>(idx);
      band.upwind_weight[b][k] = std::abs(n[k]);
    }
  }
  return band;
}

/// Extends ghost values of `values` into the band by solving
/// dr/dsigma + dr/dn = 0 with upwind differences and explicit Euler steps
/// (step 0.5 h); ghost values stay fixed. Layers are first seeded with the
/// mean of their already-filled neighbours, so constants are reproduced exactly.
template <int Dim>
void extrapolate(const ExtrapolationBand<Dim>& band, Field& values, int steps = kExtrapolationSteps) {
  for (std::size_t b = 0; b < band.nodes.size(); ++b) {
    const auto& src = band.sources[b];
    double s = 0.0;
    for (std::size_t idx : src) s += values[idx];
    values[band.nodes[b]] = src.empty() ? 0.0 : s / static_cast<double>(src.size());
  }
  constexpr double lambda = 0.5;
  std::vector<double> update(band.nodes.size());
  for (int step = 0; step < steps; ++step) {
    for (std::size_t b = 0; b < band.nodes.size(); ++b) {
      const double v = values[band.nodes[b]];
      double flux = 0.0;
      for (int k = 0; k < Dim; ++k)
        if (band.upwind[b][k] >= 0)
          flux += band.upwind_weight[b][k] * (v - values[static_cast<std::size_t>(band.upwind[b][k])]);
      update[b] = v - lambda * flux;
    }
    for (std::size_t b = 0; b < band.nodes.size(); ++b) values[band.nodes[b]] = update[b];
  }
}

namespace detail {
template <int Dim>
double full_weight(const MultiIndex<Dim>& o) noexcept {
  double w = 1.0;
  for (int k = 0; k < Dim; ++k) w *= o[k] == 0 ? 0.5 : 0.25;
  return w;
}
}  // namespace detail

/// Interior residual restriction: full weighting when the whole 3^Dim block is
/// internal, otherwise the plain average over the internal nodes of the block.
template <int Dim>
Field restrict_interior(const Field& r, const GridClassification<Dim>& fine, const GridClassification<Dim>& coarse) {
  Field out = coarse.grid.make_field();
  for (std::size_t c : coarse.internal) {
    const auto mc = coarse.grid.multi_index(c);
    double fw = 0.0;
    double sum = 0.0;
    int count = 0;
    bool all_internal = true;
    for_each_unit_offset<Dim>([&](const MultiIndex<Dim>& o) {
      MultiIndex<Dim> mf{};
      for (int k = 0; k < Dim; ++k) mf[k] = 2 * mc[k] + o[k];
      const std::size_t f = fine.grid.index(mf);
      if (fine.labels[f] == NodeLabel::Internal) {
        fw += detail::full_weight<Dim>(o) * r[f];
        sum += r[f];
        ++count;
      } else {
        all_internal = false;
      }
    });
    if (count == 0) throw EmptyStencil("restrict_interior: coarse internal node without internal fine nodes");
    out[c] = all_internal ? fw : sum / count;
  }
  return out;
}

/// Ghost residual restriction onto coarse ghosts: full weighting over the
/// ghost/band nodes of the block, renormalised when internal, eliminated or
/// out-of-box nodes are excluded. `r_extended` must already be extrapolated.
template <int Dim>
Field restrict_ghost(const Field& r_extended, const GridClassification<Dim>& fine, const ExtrapolationBand<Dim>& band,
                     const GridClassification<Dim>& coarse) {
  Field out = coarse.grid.make_field();
  for (const auto& g : coarse.ghosts) {
    const auto mc = coarse.grid.multi_index(g.node);
    double acc = 0.0;
    double wsum = 0.0;
    for_each_unit_offset<Dim>([&](const MultiIndex<Dim>& o) {
      MultiIndex<Dim> mf{};
      for (int k = 0; k < Dim; ++k) mf[k] = 2 * mc[k] + o[k];
      if (!fine.grid.contains(mf)) return;
      const std::size_t f = fine.grid.index(mf);
      if (fine.labels[f] == NodeLabel::Internal || !band.carries_value[f]) return;
      const double w = detail::full_weight<Dim>(o);
      acc += w * r_extended[f];
      wsum += w;
    });
    if (wsum == 0.0) throw EmptyStencil("restrict_ghost: coarse ghost without ghost/band fine nodes");
    out[g.node] = acc / wsum;
  }
  return out;
}

/// Multilinear interpolation of a coarse node field at one fine node.
template <int Dim>
double interpolate_at(const Field& e_coarse, const UniformGrid<Dim>& coarse, const MultiIndex<Dim>& fine_index) {
  int lo[Dim];
  int cnt[Dim];
  for (int k = 0; k < Dim; ++k) {
    lo[k] = fine_index[k] / 2;
    cnt[k] = fine_index[k] % 2 == 0 ? 1 : 2;
  }
  double v = 0.0;
  MultiIndex<Dim> m{};
  const int corners = 1 << Dim;
  for (int mask = 0; mask < corners; ++mask) {
    double w = 1.0;
    bool skip = false;
    for (int k = 0; k < Dim; ++k) {
      const int bit = (mask >> k) & 1;
      if (bit >= cnt[k]) {
        skip = true;
        break;
      }
      m[k] = lo[k] + bit;
      if (cnt[k] == 2) w *= 0.5;
    }
    if (!skip) v += w * e_coarse[coarse.index(m)];
  }
  return v;
}

/// Multilinear interpolation of the coarse error onto the fine internal and
/// ghost nodes. The coarse field must already be extended into its band.
template <int Dim>
Field interpolate_error(const Field& e_coarse, const UniformGrid<Dim>& coarse, const GridClassification<Dim>& fine) {
  Field out = fine.grid.make_field();
  for (std::size_t f : fine.internal) out[f] = interpolate_at<Dim>(e_coarse, coarse, fine.grid.multi_index(f));
  for (const auto& g : fine.ghosts) out[g.node] = interpolate_at<Dim>(e_coarse, coarse, fine.grid.multi_index(g.node));
  return out;
}

}  // namespace bcmg
