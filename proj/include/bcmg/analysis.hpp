#pragma once

// Tangential spectrum of the ghost residual along a straight boundary.
//
// For n ghost residuals r_1..r_n the modes are alpha_k = -pi + 2 pi k / n,
// k = 1..n, and R_k = (1/n) sum_j r_j exp(-i alpha_k j), i.e. y_j / h = j.
// The sum is evaluated directly; n stays in the low thousands.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bcmg/classification.hpp"
#include "bcmg/mg_solver.hpp"
#include "bcmg/rng.hpp"
#include "bcmg/smoother.hpp"

namespace bcmg {

struct SpectrumReport {
  std::size_t n = 0;
  /// Every alpha_k, k = 1..n, and its coefficient R_k.
  std::vector<double> all_alphas;
  std::vector<std::complex<double>> coefficients;
  /// alpha_k restricted to (0, pi), with amplitude 2|R_k|.
  std::vector<double> alphas;
  std::vector<double> amplitudes;
  /// max amplitude over alpha > pi/2 divided by max amplitude over alpha < pi/2.
  double high_low_ratio = 0.0;
  /// Same with sums of squared amplitudes.
  double high_low_energy_ratio = 0.0;
};

inline double spectrum_alpha(std::size_t k, std::size_t n) {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
}

inline SpectrumReport boundary_spectrum(const std::vector<double>& r) {
  SpectrumReport rep;
  const std::size_t n = r.size();
  rep.n = n;
  if (n == 0) return rep;
  rep.all_alphas.resize(n);
  rep.coefficients.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    const double a = spectrum_alpha(k, n);
    std::complex<double> s = 0.0;
    for (std::size_t j = 1; j <= n; ++j) s += r[j - 1] * std::polar(1.0, -a * static_cast<double>(j));
    rep.all_alphas[k - 1] = a;
    rep.coefficients[k - 1] = s / static_cast<double>(n);
  }

  double high_max = 0.0, low_max = 0.0, high_e = 0.0, low_e = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = rep.all_alphas[k];
    if (!(a > 0.0 && a < std::numbers::pi)) continue;
    const double amp = 2.0 * std::abs(rep.coefficients[k]);
    rep.alphas.push_back(a);
    rep.amplitudes.push_back(amp);
    if (a > std::numbers::pi / 2) {
      high_max = std::max(high_max, amp);
      high_e += amp * amp;
    } else {
      low_max = std::max(low_max, amp);
      low_e += amp * amp;
    }
  }
  rep.high_low_ratio = low_max > 0.0 ? high_max / low_max : (high_max > 0.0 ? INFINITY : 0.0);
  rep.high_low_energy_ratio = low_e > 0.0 ? high_e / low_e : (high_e > 0.0 ? INFINITY : 0.0);
  return rep;
}

/// sum_k |R_k|^2 and ||r||^2 / n; equal for every real input.
inline std::pair<double, double> parseval_sides(const SpectrumReport& s, const std::vector<double>& r) {
  double lhs = 0.0, rhs = 0.0;
  for (const auto& c : s.coefficients) lhs += std::norm(c);
  for (double v : r) rhs += v * v;
  return {lhs, s.n ? rhs / static_cast<double>(s.n) : 0.0};
}

/// Rebuilds r_j from the one-sided doubled modes in (0, pi) plus the unpaired
/// alpha = 0 and alpha = pi modes.
inline std::vector<double> reconstruct_from_spectrum(const SpectrumReport& s) {
  std::vector<double> out(s.n, 0.0);
  for (std::size_t k = 0; k < s.n; ++k) {
    const double a = s.all_alphas[k];
    const bool half = a > 0.0 && a < std::numbers::pi;
    const bool unpaired = a == 0.0 || std::abs(a - std::numbers::pi) < 1e-14;
    if (!half && !unpaired) continue;
    for (std::size_t j = 1; j <= s.n; ++j) {
      const std::complex<double> term = s.coefficients[k] * std::polar(1.0, a * static_cast<double>(j));
      out[j - 1] += half ? 2.0 * term.real() : term.real();
    }
  }
  return out;
}

/// Ghost residuals of a vertical-line boundary ordered by increasing y.
inline std::vector<double> vline_ghost_residual(const DiscreteOperator<2>& op, const Field& r) {
  std::vector<std::pair<int, double>> ordered;
  for (const auto& g : op.cls.ghosts) ordered.emplace_back(op.grid().multi_index(g.node)[1], r[g.node]);
  std::sort(ordered.begin(), ordered.end());
  std::vector<double> out;
  out.reserve(ordered.size());
  for (const auto& [j, v] : ordered) out.push_back(v);
  return out;
}

/// Ghost residual spectrum after `sweeps` smoothing steps of the homogeneous
/// vline problem, starting from a seeded uniform(-1,1) guess.
inline SpectrumReport vline_smoothing_spectrum(int n_cells, double theta, BcType bc, double dtau, int sweeps = 10,
                                               std::uint64_t seed = 42) {
  const double h = 2.0 / n_cells;
  const auto phi = shapes::vertical_plane<2>(1.0 - theta * h);
  auto op = discretize(classify(UniformGrid<2>(n_cells), phi), bc, PdeKind::Poisson);
  Field u = op.grid().make_field();
  const Field b = op.grid().make_field();
  Xorshift64Star rng(seed);
  for (std::size_t n = 0; n < u.size(); ++n)
    if (op.cls.is_active(n)) u[n] = rng.uniform(-1.0, 1.0);
  const std::vector<double> dt(op.rows.size(), bc == BcType::Neumann ? dtau * h : dtau);
  smooth(op, u, b, dt, sweeps);
  return boundary_spectrum(vline_ghost_residual(op, residual(op, u, b)));
}

}  // namespace bcmg
