#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "bcmg/grid.hpp"

namespace bcmg {

/// Quadratic Lagrange basis on nodes t = 0, 1, 2 evaluated at t.
inline std::array<double, 3> quadratic_lagrange(double t) noexcept {
  return {0.5 * (t - 1.0) * (t - 2.0), t * (2.0 - t), 0.5 * t * (t - 1.0)};
}

/// d/dt of quadratic_lagrange.
inline std::array<double, 3> quadratic_lagrange_derivative(double t) noexcept {
  return {t - 1.5, 2.0 - 2.0 * t, t - 0.5};
}

/// Tensor-product quadratic weights on a 3^Dim block for the value and for
/// the directional derivative n . grad at local coordinates t (grid units).
/// Entries follow for_each_block3 order; derivative weights are per grid unit.
template <int Dim>
struct BlockWeights {
  static constexpr int size = Dim == 1 ? 3 : (Dim == 2 ? 9 : 27);
  std::array<double, size> value{};
  std::array<double, size> normal_derivative{};
};

template <int Dim>
BlockWeights<Dim> block_weights(const Point<Dim>& t, const Point<Dim>& n) {
  std::array<std::array<double, 3>, Dim> l{};
  std::array<std::array<double, 3>, Dim> dl{};
  for (int k = 0; k < Dim; ++k) {
    l[k] = quadratic_lagrange(t[k]);
    dl[k] = quadratic_lagrange_derivative(t[k]);
  }
  BlockWeights<Dim> w;
  int slot = 0;
  for_each_block3<Dim>([&](const MultiIndex<Dim>& a) {
    double v = 1.0;
    for (int k = 0; k < Dim; ++k) v *= l[k][a[k]];
    double d = 0.0;
    for (int axis = 0; axis < Dim; ++axis) {
      if (n[axis] == 0.0) continue;
      double term = n[axis] * dl[axis][a[axis]];
      for (int k = 0; k < Dim; ++k)
        if (k != axis) term *= l[k][a[k]];
      d += term;
    }
    w.value[slot] = v;
    w.normal_derivative[slot] = d;
    ++slot;
  });
  return w;
}

/// Weights on the block with the slots flagged in `excluded` removed: among all
/// weights exact on every polynomial of total degree <= 2 (value at t, and
/// derivative along n), the ones minimising sum w_i^2 (r_i^2 + 0.01)^2, r_i
/// being the distance of node i from t. Nodes near t thus carry the weight,
/// as they do in the tensor-product case. Returns nothing when the remaining
/// nodes do not determine such weights.
template <int Dim>
std::optional<BlockWeights<Dim>> reduced_block_weights(const Point<Dim>& t, const Point<Dim>& n,
                                                       std::uint32_t excluded) {
  constexpr int terms = (Dim + 1) * (Dim + 2) / 2;
  std::array<MultiIndex<Dim>, BlockWeights<Dim>::size> nodes{};
  int slot = 0;
  for_each_block3<Dim>([&](const MultiIndex<Dim>& a) { nodes[slot++] = a; });

  // Monomials in d = node - t: 1, d_k, d_k d_l (k <= l).
  auto monomials = [](const Point<Dim>& d) {
    Eigen::Matrix<double, terms, 1> m;
    int r = 0;
    m[r++] = 1.0;
    for (int k = 0; k < Dim; ++k) m[r++] = d[k];
    for (int k = 0; k < Dim; ++k)
      for (int l = k; l < Dim; ++l) m[r++] = d[k] * d[l];
    return m;
  };

  std::array<int, BlockWeights<Dim>::size> kept{};
  int count = 0;
  for (int s = 0; s < BlockWeights<Dim>::size; ++s)
    if (!((excluded >> s) & 1u)) kept[count++] = s;
  if (count < terms) return std::nullopt;

  Eigen::Matrix<double, terms, Eigen::Dynamic> v(terms, count);
  Eigen::VectorXd omega(count);
  for (int c = 0; c < count; ++c) {
    Point<Dim> d{};
    double r2 = 0.0;
    for (int k = 0; k < Dim; ++k) {
      d[k] = nodes[kept[c]][k] - t[k];
      r2 += d[k] * d[k];
    }
    v.col(c) = monomials(d);
    omega[c] = 1.0 / ((r2 + 0.01) * (r2 + 0.01));
  }
  const Eigen::Matrix<double, terms, Eigen::Dynamic> vw = v * omega.asDiagonal();
  const Eigen::Matrix<double, terms, terms> gram = vw * v.transpose();
  Eigen::FullPivLU<Eigen::Matrix<double, terms, terms>> lu(gram);
  if (lu.rank() < terms) return std::nullopt;

  Eigen::Matrix<double, terms, 1> e_value = Eigen::Matrix<double, terms, 1>::Zero();
  e_value[0] = 1.0;
  Eigen::Matrix<double, terms, 1> e_deriv = Eigen::Matrix<double, terms, 1>::Zero();
  for (int k = 0; k < Dim; ++k) e_deriv[1 + k] = n[k];
  const Eigen::VectorXd wv = vw.transpose() * lu.solve(e_value);
  const Eigen::VectorXd wd = vw.transpose() * lu.solve(e_deriv);

  BlockWeights<Dim> w;
  for (int c = 0; c < count; ++c) {
    w.value[kept[c]] = wv[c];
    w.normal_derivative[kept[c]] = wd[c];
  }
  return w;
}

}  // namespace bcmg
