// Solves -Laplace u = f on the circle with Dirichlet data taken from
// u = sin(2x) cos(3y), printing cycles, residual reduction and the max error.

#include <cmath>
#include <cstdio>

#include "bcmg/bcmg.hpp"

using namespace bcmg;

int main() {
  const auto exact = [](const Point<2>& p) { return std::sin(2.0 * p[0]) * std::cos(3.0 * p[1]); };
  ProblemSpec<2> spec;
  spec.f = [&](const Point<2>& p) { return 13.0 * exact(p); };
  spec.g_box = exact;
  spec.g_gamma = exact;

  std::printf("%6s %7s %12s %12s\n", "N", "cycles", "res/res0", "max error");
  for (int n : {32, 64, 128, 256}) {
    const auto h = build_hierarchy(UniformGrid<2>(n), shapes::reference_circle(), BcType::Dirichlet,
                                   PdeKind::Poisson, hierarchy_options_for(Scheme::V));
    const auto& op = h.finest().op;
    CycleConfig cfg;
    cfg.scheme = Scheme::V;
    cfg.smoother.dtau = DtauMode::optimal(blfa::Symbol::Exponential);
    cfg.max_cycles = 30;
    cfg.tol = 1e-10;
    const MultigridSolver<2> solver(h, cfg);

    Field u = op.grid().make_field();
    apply_box_data(op, spec, u);
    const Field b = build_rhs(op, spec);
    const CycleReport rep = solver.solve(u, b);

    double err = 0.0;
    for (std::size_t node : op.cls.internal) err = std::max(err, std::abs(u[node] - exact(op.grid().position(node))));
    std::printf("%6d %7d %12.3e %12.3e\n", n, rep.cycles, rep.residual_norms.back() / rep.residual_norms.front(), err);
  }
}
