#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "bcmg/errors.hpp"
#include "bcmg/grid.hpp"

namespace bcmg {

/// Implicit domain description: phi < 0 inside, phi > 0 outside, phi = 0 on the boundary.
template <int Dim>
struct LevelSet {
  std::function<double(const Point<Dim>&)> evaluate;
  /// Analytic gradient; when empty, central differences with the grid step are used.
  std::function<Point<Dim>(const Point<Dim>&)> gradient;

  double operator()(const Point<Dim>& p) const { return evaluate(p); }
  bool has_gradient() const noexcept { return static_cast<bool>(gradient); }
};

template <int Dim>
Point<Dim> level_set_gradient(const LevelSet<Dim>& phi, const Point<Dim>& p, double h) {
  if (phi.has_gradient()) return phi.gradient(p);
  Point<Dim> g{};
  for (int k = 0; k < Dim; ++k) {
    Point<Dim> plus = p;
    Point<Dim> minus = p;
    plus[k] += h;
    minus[k] -= h;
    g[k] = (phi(plus) - phi(minus)) / (2.0 * h);
  }
  return g;
}

/// Outward unit normal grad(phi)/|grad(phi)| at p.
template <int Dim>
Point<Dim> compute_normal(const LevelSet<Dim>& phi, const Point<Dim>& p, double h) {
  Point<Dim> g = level_set_gradient<Dim>(phi, p, h);
  const double len = norm2<Dim>(g);
  if (!(len >= 1e-12)) throw DegenerateGradientError("compute_normal: |grad phi| below 1e-12");
  for (auto& c : g) c /= len;
  return g;
}

template <int Dim>
struct Projection {
  Point<Dim> q{};
  /// Root of phi(G - eta*h*n) = 0.
  double eta = 0.0;
  /// eta clamped to [0, 1 - 1e-9].
  double theta_tilde = 0.0;
};

inline constexpr double kProjectionTolerance = 1e-10;
inline constexpr double kThetaClampMax = 1.0 - 1e-9;

/// Projects the ghost point G onto the zero level set along -n.
///
/// The root is bracketed by sampling eta = 0, 0.25, ..., 1, refined by
/// bisection and polished with Newton steps. Without a sign change a damped
/// Newton iteration from eta = 0.5 is attempted before giving up.
template <int Dim>
Projection<Dim> project_to_boundary(const Point<Dim>& g, const Point<Dim>& n, const LevelSet<Dim>& phi,
                                    double h) {
  auto point_at = [&](double eta) {
    Point<Dim> x = g;
    for (int k = 0; k < Dim; ++k) x[k] -= eta * h * n[k];
    return x;
  };
  auto f = [&](double eta) { return phi(point_at(eta)); };
  auto df = [&](double eta) { return -h * dot<Dim>(level_set_gradient<Dim>(phi, point_at(eta), h), n); };

  const double f0 = f(0.0);
  const double polish_tol = 1e-12 * std::max(1.0, std::abs(f0));

  auto finish = [&](double eta) {
    Projection<Dim> out;
    out.eta = eta;
    out.q = point_at(eta);
    out.theta_tilde = std::clamp(eta, 0.0, kThetaClampMax);
    const double residual = phi(out.q);
    if (!(std::abs(residual) <= kProjectionTolerance))
      throw ProjectionError("project_to_boundary: |phi(Q)| = " + std::to_string(residual) +
                            " exceeds tolerance");
    return out;
  };

  if (f0 == 0.0) return finish(0.0);

  double lo = -1.0;
  double hi = -1.0;
  double flo = f0;
  double prev = 0.0;
  for (int s = 1; s <= 4; ++s) {
    const double eta = 0.25 * s;
    const double fe = f(eta);
    if (fe == 0.0) return finish(eta);
    if ((flo > 0.0) != (fe > 0.0)) {
      lo = prev;
      hi = eta;
      break;
    }
    prev = eta;
    flo = fe;
  }

  if (lo >= 0.0) {
    double fl = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0.0) == (fl > 0.0)) {
        lo = mid;
        fl = fm;
      } else {
        hi = mid;
      }
    }
    double eta = 0.5 * (lo + hi);
    for (int it = 0; it < 5; ++it) {
      const double fe = f(eta);
      if (std::abs(fe) <= polish_tol) break;
      const double d = df(eta);
      if (d == 0.0) break;
      const double next = eta - fe / d;
      if (!(std::abs(f(next)) < std::abs(fe))) break;
      eta = next;
    }
    return finish(eta);
  }

  // No sign change on [0,1]: the projection lies slightly beyond one cell.
  double eta = 0.5;
  for (int it = 0; it < 50; ++it) {
    const double fe = f(eta);
    if (std::abs(fe) <= polish_tol) return finish(eta);
    const double d = df(eta);
    if (d == 0.0 || !std::isfinite(d)) break;
    eta -= fe / d;
    if (eta < 0.0 || eta > 2.0 || !std::isfinite(eta)) break;
  }
  throw ProjectionError("project_to_boundary: no root of phi(G - eta h n) for eta in [0,1)");
}

namespace shapes {

/// Omega = (-1, a) on the line.
inline LevelSet<1> interval(double a) {
  return {[a](const Point<1>& p) { return p[0] - a; }, [](const Point<1>&) { return Point<1>{1.0}; }};
}

/// Half-space x < xv, the vertical line in 2D and the plane in 3D.
template <int Dim>
LevelSet<Dim> vertical_plane(double xv) {
  return {[xv](const Point<Dim>& p) { return p[0] - xv; },
          [](const Point<Dim>&) {
            Point<Dim> g{};
            g[0] = 1.0;
            return g;
          }};
}

/// Every node of the box is inside; there is no curved boundary.
template <int Dim>
LevelSet<Dim> whole_box() {
  return {[](const Point<Dim>&) { return -1.0; }, [](const Point<Dim>&) { return Point<Dim>{}; }};
}

inline LevelSet<2> circle(double x0, double y0, double radius) {
  return {[=](const Point<2>& p) {
            const double dx = p[0] - x0;
            const double dy = p[1] - y0;
            return dx * dx + dy * dy - radius * radius;
          },
          [=](const Point<2>& p) { return Point<2>{2.0 * (p[0] - x0), 2.0 * (p[1] - y0)}; }};
}

/// Circle of radius sqrt(2)/2 slightly off the origin.
inline LevelSet<2> reference_circle() {
  return circle(std::sqrt(3.0) / 40.0, -std::sqrt(4.0) / 40.0, std::sqrt(2.0) / 2.0);
}

/// Five-petal flower r(gamma) = r1 + r2 sin(5 gamma) centred at the origin.
inline LevelSet<2> flower(double r1, double r2) {
  return {[=](const Point<2>& p) {
            const double x = p[0];
            const double y = p[1];
            const double r = std::sqrt(x * x + y * y);
            if (r == 0.0) return -r1;  // the petal term is bounded; the centre is always inside
            const double poly = std::pow(y, 5) + 5.0 * std::pow(x, 4) * y - 10.0 * x * x * y * y * y;
            return r - r1 - r2 * poly / std::pow(r, 5);
          },
          [=](const Point<2>& p) {
            const double x = p[0];
            const double y = p[1];
            const double r2sq = x * x + y * y;
            const double r = std::sqrt(r2sq);
            if (r == 0.0) return Point<2>{0.0, 0.0};
            const double r5 = std::pow(r, 5);
            const double r7 = r5 * r2sq;
            const double poly = std::pow(y, 5) + 5.0 * std::pow(x, 4) * y - 10.0 * x * x * y * y * y;
            const double dpx = 20.0 * x * x * x * y - 20.0 * x * y * y * y;
            const double dpy = 5.0 * std::pow(y, 4) + 5.0 * std::pow(x, 4) - 30.0 * x * x * y * y;
            return Point<2>{x / r - r2 * (dpx / r5 - 5.0 * poly * x / r7),
                            y / r - r2 * (dpy / r5 - 5.0 * poly * y / r7)};
          }};
}

inline LevelSet<2> reference_flower() { return flower(0.5, 0.2); }

/// Straight line of slope -1/sqrt(3) through (1 - 7h/10, 0); Omega is below-left of it.
inline LevelSet<2> oblique_line(double h) {
  const double c = 1.0 - 0.7 * h;
  const double s3 = std::sqrt(3.0);
  return {[=](const Point<2>& p) { return 0.5 * (p[0] + s3 * p[1] - c); },
          [=](const Point<2>&) { return Point<2>{0.5, 0.5 * s3}; }};
}

inline LevelSet<3> ellipsoid(const Point<3>& center, const Point<3>& semiaxes) {
  return {[=](const Point<3>& p) {
            double s = -1.0;
            for (int k = 0; k < 3; ++k) {
              const double t = (p[k] - center[k]) / semiaxes[k];
              s += t * t;
            }
            return s;
          },
          [=](const Point<3>& p) {
            Point<3> g{};
            for (int k = 0; k < 3; ++k) g[k] = 2.0 * (p[k] - center[k]) / (semiaxes[k] * semiaxes[k]);
            return g;
          }};
}

inline LevelSet<3> reference_ellipsoid() {
  return ellipsoid({std::sqrt(2.0) / 20.0, std::sqrt(3.0) / 40.0, -std::sqrt(2.0) / 50.0}, {0.686, 0.386, 0.586});
}

}  // namespace shapes

}  // namespace bcmg
