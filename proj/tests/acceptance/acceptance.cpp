// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../oracles.hpp"
#include "bcmg/bcmg.hpp"
#include "bcmg/io.hpp"

using namespace bcmg;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("CRITERION %2d %s: %s |%s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", title, o.detail.str().c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double v, int prec = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

RunConfig make(const std::string& name, int n, const std::string& bc = "dirichlet") {
  RunConfig c;
  c.case_name = name;
  c.n = n;
  c.bc = bc;
  c.dim = find_case(name).dim == 0 ? 2 : find_case(name).dim;
  return c;
}

double rho(RunConfig c, const std::string& dtau) {
  c.dtau = dtau;
  return run_measurement(c).report.rho_asymptotic;
}

std::string constant(double v) { return "constant:" + format_double(v); }

// --- criterion 12 helpers -------------------------------------------------

template <int Dim>
double splitting_gap(const DiscreteOperator<Dim>& op) {
  const Field zero = op.grid().make_field();
  const auto sys = assemble_system(op, zero, zero);
  const Eigen::MatrixXd a(sys.matrix);
  const auto ni = static_cast<Eigen::Index>(op.cls.internal.size());
  const auto n = a.rows();
  Xorshift64Star rng(11);
  Eigen::VectorXd u(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    u[i] = rng.uniform(-1, 1);
    b[i] = rng.uniform(-1, 1);
  }
  std::vector<double> dtau(op.rows.size());
  for (auto& d : dtau) d = rng.uniform(0.5, 3.0);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      if ((r < ni && c <= r) || (r >= ni && (c < ni || c < r))) p(r, c) = a(r, c);
  for (Eigen::Index g = ni; g < n; ++g) p(g, g) = 1.0 / dtau[static_cast<std::size_t>(g - ni)];
  const Eigen::VectorXd ref = u + p.lu().solve(b - a * u);

  Field uf = op.grid().make_field(), bf = op.grid().make_field();
  for (Eigen::Index i = 0; i < n; ++i) {
    uf[sys.dof_to_node[i]] = u[i];
    bf[sys.dof_to_node[i]] = b[i];
  }
  smooth(op, uf, bf, dtau, 1);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(uf[sys.dof_to_node[i]] - ref[i]));
  return worst / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

double transfer_gap(const LevelSet<2>& phi, int n) {
  const auto fine = classify(UniformGrid<2>(n), phi);
  const auto coarse = classify(UniformGrid<2>(n / 2), phi);
  const std::size_t nf = fine.grid.node_count(), nc = coarse.grid.node_count();
  const double hc = coarse.grid.spacing();
  double worst = 0.0;
  // Restriction against the full-weighting / plain-mean rule.
  for (std::size_t f = 0; f < nf; ++f) {
    Field e(nf, 0.0);
    e[f] = 1.0;
    const Field r = restrict_interior(e, fine, coarse);
    for (std::size_t c : coarse.internal) {
      const auto m = coarse.grid.multi_index(c);
      int count = 0;
      bool full = true, member = false;
      double w_fw = 0.0;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const std::size_t k = fine.grid.index({2 * m[0] + dx, 2 * m[1] + dy});
          if (fine.labels[k] != NodeLabel::Internal) {
            full = false;
            continue;
          }
          ++count;
          if (k == f) {
            member = true;
            w_fw = (2 - std::abs(dx)) * (2 - std::abs(dy)) / 16.0;
          }
        }
      const double expected = member ? (full ? w_fw : 1.0 / count) : 0.0;
      worst = std::max(worst, std::abs(r[c] - expected));
    }
  }
  // Prolongation against tensor-product hat functions.
  for (std::size_t c = 0; c < nc; ++c) {
    Field e(nc, 0.0);
    e[c] = 1.0;
    const Field out = interpolate_error(e, coarse.grid, fine);
    const auto xc = coarse.grid.position(c);
    for (std::size_t f = 0; f < nf; ++f) {
      double expected = 0.0;
      if (fine.is_active(f)) {
        const auto xf = fine.grid.position(f);
        expected = std::max(0.0, 1 - std::abs(xf[0] - xc[0]) / hc) * std::max(0.0, 1 - std::abs(xf[1] - xc[1]) / hc);
      }
      worst = std::max(worst, std::abs(out[f] - expected));
    }
  }
  return worst;
}

}  // namespace

int main() {
  const std::vector<double> thetas10 = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const std::vector<double> thetas3 = {0.2, 0.5, 0.8};

  run(1, "closed-form dtau_opt vs golden-section brute force", [&](Outcome& o) {
    double worst = 0.0;
    for (int d : {2, 3})
      for (bool neumann : {false, true})
        for (double th : thetas10) {
          const double lib = blfa::dtau_opt({neumann ? BcType::Neumann : BcType::Dirichlet, d, th, 1.0,
                                             blfa::Symbol::Polynomial});
          const double ref = oracle::brute_force_dtau(neumann, d, th);
          worst = std::max(worst, std::abs(lib / ref - 1.0));
        }
    o.detail << " max rel diff " << worst;
    o.require(worst <= 1e-6, "rel diff <= 1e-6");
  });

  run(2, "equioscillation at the corner pair", [&](Outcome& o) {
    double worst = 0.0;
    for (int d : {2, 3})
      for (auto bc : {BcType::Dirichlet, BcType::Neumann})
        for (double th : thetas10) {
          const blfa::Query q{bc, d, th, 1.0, blfa::Symbol::Polynomial};
          const double dt = blfa::dtau_opt(q);
          const auto ps = blfa::corner_symbols(d);
          double gmin = INFINITY, gmax = -INFINITY;
          for (double p : ps) {
            gmin = std::min(gmin, blfa::g0(q, p));
            gmax = std::max(gmax, blfa::g0(q, p));
          }
          worst = std::max(worst, std::abs(std::abs(1 - dt * gmin) - std::abs(1 - dt * gmax)));
        }
    o.detail << " max | |G_min| - |G_max| | " << worst;
    o.require(worst <= 1e-12, "agreement to 1e-12");
  });

  run(3, "G0 positive and monotone per axis", [&](Outcome& o) {
    const double pi = std::numbers::pi;
    long checks = 0;
    int violations = 0;
    for (int d : {2, 3})
      for (auto bc : {BcType::Dirichlet, BcType::Neumann})
        for (int it = 0; it <= 40; ++it) {
          const blfa::Query q{bc, d, 0.999 * it / 40.0, 1.0, blfa::Symbol::Polynomial};
          const int s = 41;
          // Along each axis with the other one fixed (3D) or alone (2D).
          for (int other = 0; other < (d == 3 ? s : 1); ++other) {
            const double fixed = pi * other / (s - 1);
            double prev = 0.0;
            bool have_prev = false;
            int sign = 0;
            for (int k = 0; k < s; ++k) {
              const double a = pi * k / (s - 1);
              std::vector<double> al = {a};
              if (d == 3) al.push_back(fixed);
              const double pa = blfa::symbol_p(al);
              // The zero frequency is outside the analysis: it is in the Neumann kernel.
              if (pa == 0.0) continue;
              const double g = blfa::g0(q, pa);
              ++checks;
              if (!(g > 0.0)) ++violations;
              if (have_prev) {
                const int st = g > prev ? 1 : (g < prev ? -1 : 0);
                if (sign == 0) sign = st;
                if (st != 0 && st != sign) ++violations;
              }
              prev = g;
              have_prev = true;
            }
          }
        }
    o.detail << " " << checks << " samples, " << violations << " violations";
    o.require(violations == 0, "no violations");
  });

  run(4, "1D two-grid N=512 dtau=0.05: rho = 0.08 +- 0.03", [&](Outcome& o) {
    for (double th : thetas3) {
      auto c = make("interval", 512);
      c.dim = 1;
      c.theta = th;
      const double r = rho(c, "constant:0.05");
      o.detail << " theta=" << th << " rho=" << fmt(r);
      o.require(std::abs(r - 0.08) <= 0.03, "rho in [0.05,0.11] at theta=" + fmt(th, 1));
    }
  });

  run(5, "vline Dirichlet N=256: blfa <= 0.16, constant 1.75 max in [0.22,0.38]", [&](Outcome& o) {
    double cmax = 0.0;
    for (double th : thetas3) {
      auto c = make("vline", 256);
      c.theta = th;
      const double rb = rho(c, "blfa");
      const double rc = rho(c, "constant:1.75");
      cmax = std::max(cmax, rc);
      o.detail << " theta=" << th << " blfa=" << fmt(rb) << " const=" << fmt(rc);
      o.require(rb <= 0.16, "blfa rho <= 0.16 at theta=" + fmt(th, 1));
    }
    o.detail << " const max=" << fmt(cmax);
    o.require(cmax >= 0.22 && cmax <= 0.38, "constant max rho in [0.22,0.38]");
  });

  run(6, "vline Neumann N=256: constant dtau/h=1 max in [0.10,0.22], blfa <= 0.16", [&](Outcome& o) {
    double cmax = 0.0;
    for (double th : thetas3) {
      auto c = make("vline", 256, "neumann");
      c.theta = th;
      const double rb = rho(c, "blfa");
      const double rc = rho(c, "constant:1");
      cmax = std::max(cmax, rc);
      o.detail << " theta=" << th << " blfa=" << fmt(rb) << " const=" << fmt(rc);
      o.require(rb <= 0.16, "blfa rho <= 0.16 at theta=" + fmt(th, 1));
    }
    o.detail << " const max=" << fmt(cmax);
    o.require(cmax >= 0.10 && cmax <= 0.22, "constant max rho in [0.10,0.22]");
  });

  run(7, "circle Dirichlet N=64,128,256: blfa below best constant, decreasing, <= 0.2 at 256", [&](Outcome& o) {
    std::vector<double> rb;
    for (int n : {64, 128, 256}) {
      const auto c = make("circle", n);
      const double b = rho(c, "blfa");
      double best = INFINITY, best_dt = 0.0;
      for (int k = 0; k < 20; ++k) {
        const double dt = 0.25 + 0.25 * k;  // 0.25 .. 5.0
        const double r = rho(c, constant(dt));
        if (r < best) {
          best = r;
          best_dt = dt;
        }
      }
      rb.push_back(b);
      o.detail << " N=" << n << " blfa=" << fmt(b) << " best const=" << fmt(best) << "@" << best_dt;
      o.require(b < best, "blfa below best constant at N=" + std::to_string(n));
    }
    o.require(rb[1] < rb[0] && rb[2] < rb[1], "rho(blfa) decreasing in N");
    o.require(rb[2] <= 0.2, "rho(blfa, N=256) <= 0.2");
  });

  run(8, "flower Dirichlet N=128: blfa convergent and <= constant 1.75 + 0.02", [&](Outcome& o) {
    const auto c = make("flower", 128);
    const double b = rho(c, "blfa");
    const double k = rho(c, "constant:1.75");
    o.detail << " blfa=" << fmt(b) << " const=" << fmt(k);
    o.require(b < 1.0, "convergent");
    o.require(b <= k + 0.02, "blfa <= const + 0.02");
  });

  run(9, "oblique Neumann line N=64,128: blfa <= constant + 0.02, no growth", [&](Outcome& o) {
    std::vector<double> rb;
    for (int n : {64, 128}) {
      const auto c = make("line30", n, "neumann");
      const double b = rho(c, "blfa");
      const double k = rho(c, "constant:1");
      rb.push_back(b);
      o.detail << " N=" << n << " blfa=" << fmt(b) << " const=" << fmt(k);
      o.require(b <= k + 0.02, "blfa <= const + 0.02 at N=" + std::to_string(n));
    }
    o.require(rb[1] < rb[0] + 0.02, "rho(N=128) < rho(N=64) + 0.02");
  });

  run(10, "3D: box N=32 rho = 0.155 +- 0.03; ellipsoid blfa beats constant by >= 0.05", [&](Outcome& o) {
    auto box = make("box", 32);
    box.dim = 3;
    const double rbox = rho(box, "blfa");
    o.detail << " box=" << fmt(rbox);
    o.require(std::abs(rbox - 0.155) <= 0.03, "box rho within 0.155 +- 0.03");

    auto ed = make("ellipsoid", 64);
    const double bd = rho(ed, "blfa");
    const double kd = std::min(rho(ed, "constant:1"), rho(ed, "constant:1.75"));
    o.detail << " ellipsoid D blfa=" << fmt(bd) << " const=" << fmt(kd);
    o.require(bd <= kd - 0.05, "Dirichlet improvement >= 0.05");

    auto en = make("ellipsoid", 64, "neumann");
    en.pde = "reaction";
    const double bn = rho(en, "blfa");
    const double kn = rho(en, "constant:1");
    o.detail << " ellipsoid N-reaction blfa=" << fmt(bn) << " const=" << fmt(kn);
    o.require(bn <= kn - 0.05, "Neumann-reaction improvement >= 0.05");
  });

  run(11, "ghost residual spectrum: dtau_opt minimises the high/low ratio", [&](Outcome& o) {
    for (double th : thetas3) {
      const double dt = blfa::dtau_opt({BcType::Dirichlet, 2, th, 1.0, blfa::Symbol::Polynomial});
      const double r1 = vline_smoothing_spectrum(128, th, BcType::Dirichlet, dt).high_low_ratio;
      const double r05 = vline_smoothing_spectrum(128, th, BcType::Dirichlet, 0.5 * dt).high_low_ratio;
      const double r15 = vline_smoothing_spectrum(128, th, BcType::Dirichlet, 1.5 * dt).high_low_ratio;
      o.detail << " theta=" << th << " ratios " << fmt(r05) << "/" << fmt(r1) << "/" << fmt(r15);
      o.require(r1 < r05 && r1 < r15, "optimal ratio smallest at theta=" + fmt(th, 1));
    }
  });

  run(12, "oracle equivalences: splitting, transfer matrices, decaying mode", [&](Outcome& o) {
    double split = 0.0;
    for (auto bc : {BcType::Dirichlet, BcType::Neumann}) {
      split = std::max(split, splitting_gap(discretize(classify(UniformGrid<2>(32), shapes::reference_circle()), bc,
                                                       PdeKind::Poisson)));
      split = std::max(split, splitting_gap(discretize(classify(UniformGrid<2>(32), shapes::reference_flower()), bc,
                                                       PdeKind::ReactionDiffusion)));
    }
    split = std::max(split, splitting_gap(discretize(classify(UniformGrid<3>(8), shapes::reference_ellipsoid()),
                                                     BcType::Dirichlet, PdeKind::Poisson)));
    o.detail << " splitting gap " << split;
    o.require(split <= 1e-12, "smoother == splitting to 1e-12");

    const double tr = std::max(transfer_gap(shapes::reference_circle(), 16), transfer_gap(shapes::reference_flower(), 16));
    o.detail << " transfer gap " << tr;
    o.require(tr <= 1e-14, "transfer == brute-force matrices");

    double mode = 0.0;
    for (double a : {std::numbers::pi / 2, 3 * std::numbers::pi / 4, std::numbers::pi}) {
      const double p = oracle::decay_rate({a});
      const auto u = [&](int i, int j) { return std::exp(p * i) * std::cos(a * j); };
      for (int i = -30; i <= -1; ++i)
        for (int j = -10; j <= 10; ++j)
          mode = std::max(mode, std::abs(4 * u(i, j) - u(i + 1, j) - u(i - 1, j) - u(i, j + 1) - u(i, j - 1)));
    }
    o.detail << " mode residual " << mode;
    o.require(mode <= 1e-10, "decaying mode residual <= 1e-10");
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
