#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <gtest/gtest.h>

#include "bcmg/discretization.hpp"
#include "bcmg/levelset.hpp"
#include "oracles.hpp"

using namespace bcmg;

TEST(BcCoefficients, DirichletThreePointAreLagrangeValues) {
  // Nodes N-2, N-1, N at local 0, 1, 2; the boundary sits at 2 - theta.
  for (double th : {0.0, 0.2, 0.5, 0.9}) {
    const auto c = bc_coeffs_1d({BcType::Dirichlet, 3}, th, 0.1);
    const auto l = oracle::lagrange3(2.0 - th);
    EXPECT_NEAR(c.c_m2, l[0], 1e-14);
    EXPECT_NEAR(c.c_m1, l[1], 1e-14);
    EXPECT_NEAR(c.c_0, l[2], 1e-14);
  }
}

TEST(BcCoefficients, NeumannThreePointAreLagrangeDerivatives) {
  const double h = 0.05;
  for (double th : {0.0, 0.3, 0.75}) {
    const auto c = bc_coeffs_1d({BcType::Neumann, 3}, th, h);
    const auto d = oracle::lagrange3_derivative(2.0 - th);
    EXPECT_NEAR(c.c_m2 * h, d[0], 1e-7);
    EXPECT_NEAR(c.c_m1 * h, d[1], 1e-7);
    EXPECT_NEAR(c.c_0 * h, d[2], 1e-7);
  }
}

TEST(BcCoefficients, TwoPointLists) {
  const auto d = bc_coeffs_1d({BcType::Dirichlet, 2}, 0.25, 0.1);
  EXPECT_DOUBLE_EQ(d.c_m2, 0.0);
  EXPECT_DOUBLE_EQ(d.c_m1, 0.25);
  EXPECT_DOUBLE_EQ(d.c_0, 0.75);
  const auto n = bc_coeffs_1d({BcType::Neumann, 2}, 0.25, 0.1);
  EXPECT_DOUBLE_EQ(n.c_m1, -10.0);
  EXPECT_DOUBLE_EQ(n.c_0, 10.0);
  EXPECT_THROW(bc_coeffs_1d({BcType::Dirichlet, 4}, 0.1, 0.1), std::invalid_argument);
}

TEST(Assembly, FullBoxIsTheFivePointMatrix) {
  const int n = 8;
  const auto op = discretize(classify(UniformGrid<2>(n), shapes::whole_box<2>()), BcType::Dirichlet, PdeKind::Poisson);
  const Field zero = op.grid().make_field();
  const auto sys = assemble_system(op, zero, zero);
  const int m = n - 1;
  const double h = 2.0 / n;
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(m * m, m * m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const int r = j * m + i;
      ref(r, r) = 4.0 / (h * h);
      if (i > 0) ref(r, r - 1) = -1.0 / (h * h);
      if (i + 1 < m) ref(r, r + 1) = -1.0 / (h * h);
      if (j > 0) ref(r, r - m) = -1.0 / (h * h);
      if (j + 1 < m) ref(r, r + m) = -1.0 / (h * h);
    }
  EXPECT_LT((Eigen::MatrixXd(sys.matrix) - ref).norm(), 1e-9);
}

TEST(Assembly, ReactionAddsOneToTheDiagonal) {
  const auto cls = classify(UniformGrid<2>(8), shapes::whole_box<2>());
  const auto a = discretize(cls, BcType::Dirichlet, PdeKind::Poisson);
  const auto b = discretize(cls, BcType::Dirichlet, PdeKind::ReactionDiffusion);
  const Field zero = a.grid().make_field();
  const Eigen::MatrixXd diff = Eigen::MatrixXd(assemble_system(b, zero, zero).matrix) -
                               Eigen::MatrixXd(assemble_system(a, zero, zero).matrix);
  EXPECT_LT((diff - Eigen::MatrixXd::Identity(diff.rows(), diff.cols())).norm(), 1e-12);
}

TEST(GhostRows, ReproduceQuadraticsAtTheProjection) {
  const auto f = [](const Point<2>& p) { return 0.2 + p[0] - 0.7 * p[1] + 1.5 * p[0] * p[0] - p[0] * p[1] + 0.4 * p[1] * p[1]; };
  const auto grad = [](const Point<2>& p) { return Point<2>{1.0 + 3.0 * p[0] - p[1], -0.7 - p[0] + 0.8 * p[1]}; };
  for (auto bc : {BcType::Dirichlet, BcType::Neumann}) {
    const auto op = discretize(classify(UniformGrid<2>(64), shapes::reference_circle()), bc, PdeKind::Poisson);
    Field u = op.grid().make_field();
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = f(op.grid().position(i));
    for (std::size_t k = 0; k < op.rows.size(); ++k) {
      const auto& g = op.cls.ghosts[k];
      const double expected = bc == BcType::Dirichlet ? f(g.q) : dot<2>(grad(g.q), g.normal_at_q);
      EXPECT_NEAR(op.rows[k].apply(u), expected, 1e-9);
    }
  }
}

TEST(Assembly, ManufacturedSolutionConvergesAtSecondOrder) {
  const auto exact = [](const Point<2>& p) { return std::exp(p[0]) * std::sin(p[1]) + p[0] * p[0]; };
  ProblemSpec<2> spec;
  spec.f = [](const Point<2>&) { return -2.0; };
  spec.g_box = exact;
  spec.g_gamma = exact;
  double prev = 0.0;
  for (int n : {32, 64, 128}) {
    const auto op = discretize(classify(UniformGrid<2>(n), shapes::reference_flower()), BcType::Dirichlet, PdeKind::Poisson);
    Field u = op.grid().make_field();
    apply_box_data(op, spec, u);
    const auto sys = assemble_system(op, build_rhs(op, spec), u);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.matrix);
    const Eigen::VectorXd x = lu.solve(sys.rhs);
    double err = 0.0;
    for (std::size_t node : op.cls.internal)
      err = std::max(err, std::abs(x[sys.node_to_dof[node]] - exact(op.grid().position(node))));
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0) << "N=" << n;
    prev = err;
  }
}

TEST(Residual, ZeroForTheDiscreteSolution) {
  const auto op = discretize(classify(UniformGrid<2>(32), shapes::reference_circle()), BcType::Neumann, PdeKind::ReactionDiffusion);
  Field b = op.grid().make_field();
  for (std::size_t node : op.cls.internal) b[node] = std::cos(static_cast<double>(node));
  const Field zero = op.grid().make_field();
  const auto sys = assemble_system(op, b, zero);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(sys.matrix);
  const Eigen::VectorXd x = lu.solve(sys.rhs);
  Field u = op.grid().make_field();
  for (Eigen::Index i = 0; i < x.size(); ++i) u[sys.dof_to_node[i]] = x[i];
  double rmax = 0.0;
  for (double r : residual(op, u, b)) rmax = std::max(rmax, std::abs(r));
  EXPECT_LT(rmax, 1e-8);
}
