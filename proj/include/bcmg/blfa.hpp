#pragma once

// Boundary local Fourier analysis of the ghost-point relaxation.
//
// A tangential Fourier mode exp(i alpha . y / h) imposed on the ghost layer of
// a half-space decays into the interior as exp(-p(alpha) k) after the interior
// equations are solved, where cosh p = d - sum cos(alpha_i). One ghost update
// with step dtau then multiplies the mode by G = 1 - dtau * G0(alpha, theta),
// G0 = sum_r c_{-r}(theta) exp(-r p). The optimal dtau minimises the largest
// |G| over the high frequencies; since G0 is monotone in every alpha_i there,
// the extremes sit at a few corner frequencies and the minimax over the
// resulting family of lines is 2 / (G0_min + G0_max).

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "bcmg/discretization.hpp"
#include "bcmg/errors.hpp"

namespace bcmg::blfa {

enum class Symbol {
  Polynomial,   ///< G0 from the discrete quadratic boundary stencil
  Exponential,  ///< G0 = exp(-p theta), or p exp(-p theta) for Neumann
};

inline const char* to_string(Symbol s) noexcept { return s == Symbol::Polynomial ? "poly" : "exp"; }

struct Query {
  BcType bc = BcType::Dirichlet;
  /// Space dimension, >= 1; the analysis runs on the (d-1)-dimensional boundary.
  int d = 2;
  double theta = 0.0;
  /// Only used to scale the Neumann step.
  double h = 1.0;
  Symbol variant = Symbol::Polynomial;
};

/// arccosh(z) through its logarithmic form.
inline double arccosh(double z) {
  if (!(z >= 1.0)) throw DomainError("arccosh: argument below 1");
  return std::log(z + std::sqrt(z * z - 1.0));
}

/// Decay rate p(alpha) = arccosh(d - sum cos alpha_i), d = alphas.size() + 1.
inline double symbol_p(std::span<const double> alphas) {
  double z = static_cast<double>(alphas.size()) + 1.0;
  for (double a : alphas) z -= std::cos(a);
  return arccosh(z);
}

/// The same decay rate for the continuous Laplace problem: p = sum alpha_i.
inline double continuous_symbol_p(std::span<const double> alphas) {
  double s = 0.0;
  for (double a : alphas) s += a;
  return s;
}

/// Boundary coefficients (c_{-2}, c_{-1}, c_0), Neumann ones without the 1/h.
inline BcCoefficients dimensionless_coefficients(BcType bc, double theta) {
  return bc_coeffs_1d({bc, 3}, theta, 1.0);
}

/// G0 for a given decay rate p.
inline double g0(const Query& q, double p) {
  if (q.variant == Symbol::Exponential) {
    const double e = std::exp(-p * q.theta);
    return q.bc == BcType::Dirichlet ? e : p * e;
  }
  const auto c = dimensionless_coefficients(q.bc, q.theta);
  const double a = std::exp(-p);
  return c.c_0 + a * (c.c_m1 + a * c.c_m2);
}

/// Decay rates at the corner frequencies A_1 = (pi/2,0,...,0), ...,
/// A_{d-1} = (pi/2,...,pi/2), A_d = (pi,...,pi). For d = 1 the pair of the
/// two-dimensional analysis is used.
inline std::vector<double> corner_symbols(int d) {
  if (d < 1) throw std::invalid_argument("corner_symbols: dimension must be >= 1");
  if (d == 1) return {arccosh(2.0), arccosh(3.0)};
  std::vector<double> p;
  for (int k = 1; k <= d - 1; ++k) p.push_back(arccosh(k + 1.0));
  p.push_back(arccosh(2.0 * d - 1.0));
  return p;
}

inline std::vector<double> continuous_corner_symbols(int d) {
  const double half = std::acos(0.0);
  if (d <= 2) return {half, 2.0 * half};
  std::vector<double> p;
  for (int k = 1; k <= d - 1; ++k) p.push_back(k * half);
  p.push_back((d - 1) * 2.0 * half);
  return p;
}

/// argmin_{x>0} max_i |1 - m_i x| = 2 / (m_max + m_min) for nonnegative slopes.
inline double minimax_lines(std::span<const double> slopes) {
  if (slopes.empty()) throw std::invalid_argument("minimax_lines: no slopes");
  double lo = slopes[0];
  double hi = slopes[0];
  for (double m : slopes) {
    if (m < 0.0) throw std::invalid_argument("minimax_lines: negative slope");
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (hi == 0.0) throw AllZeroSlopes("minimax_lines: all slopes are zero");
  return 2.0 / (hi + lo);
}

namespace detail {
inline double dtau_from_symbols(const Query& q, const std::vector<double>& ps) {
  std::vector<double> slopes;
  slopes.reserve(ps.size());
  for (double p : ps) slopes.push_back(std::abs(g0(q, p)));
  const double x = minimax_lines(slopes);
  return q.bc == BcType::Neumann ? x * q.h : x;
}
}  // namespace detail

/// Optimal fictitious time step. For Neumann the returned value includes the
/// factor h, i.e. dtau_opt / h is the grid-independent quantity.
inline double dtau_opt(const Query& q) {
  if (!(q.theta >= 0.0 && q.theta < 1.0)) throw std::invalid_argument("dtau_opt: theta must lie in [0,1)");
  return detail::dtau_from_symbols(q, corner_symbols(q.d));
}

/// dtau_opt evaluated with the continuous decay rate p = sum alpha_i instead
/// of the discrete one. Only for comparison tables; never used by the solver.
inline double dtau_opt_continuous(const Query& q) {
  return detail::dtau_from_symbols(q, continuous_corner_symbols(q.d));
}

/// Amplification G of the tangential mode alphas under one relaxation with step dtau.
inline double amplification(const Query& q, std::span<const double> alphas, double dtau) {
  const double scaled = q.bc == BcType::Neumann ? dtau / q.h : dtau;
  return 1.0 - scaled * g0(q, symbol_p(alphas));
}

}  // namespace bcmg::blfa
