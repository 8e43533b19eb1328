#include <cmath>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "bcmg/levelset.hpp"
#include "bcmg/rng.hpp"
#include "bcmg/transfer.hpp"

using namespace bcmg;

namespace {

struct Pair2 {
  GridClassification<2> fine;
  GridClassification<2> coarse;
};

Pair2 make_pair(int n, const LevelSet<2>& phi) {
  return {classify(UniformGrid<2>(n), phi), classify(UniformGrid<2>(n / 2), phi)};
}

Field random_field(std::size_t n, std::uint64_t seed) {
  Xorshift64Star rng(seed);
  Field f(n);
  for (auto& v : f) v = rng.uniform(-1, 1);
  return f;
}

}  // namespace

TEST(Transfer, InteriorRestrictionMatchesRuleMatrix) {
  const auto [fine, coarse] = make_pair(16, shapes::reference_circle());
  const std::size_t nf = fine.grid.node_count(), nc = coarse.grid.node_count();
  // Rule: 1/16 [1 2 1; 2 4 2; 1 2 1] when the nine fine nodes are internal,
  // otherwise the plain mean over the internal ones.
  Eigen::MatrixXd rule = Eigen::MatrixXd::Zero(nc, nf);
  for (std::size_t c : coarse.internal) {
    const auto m = coarse.grid.multi_index(c);
    std::vector<std::pair<std::size_t, double>> block;
    bool full = true;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const std::size_t f = fine.grid.index({2 * m[0] + dx, 2 * m[1] + dy});
        if (fine.labels[f] == NodeLabel::Internal)
          block.emplace_back(f, (2 - std::abs(dx)) * (2 - std::abs(dy)) / 16.0);
        else
          full = false;
      }
    for (const auto& [f, w] : block) rule(c, f) = full ? w : 1.0 / block.size();
  }
  Eigen::MatrixXd brute = Eigen::MatrixXd::Zero(nc, nf);
  for (std::size_t f = 0; f < nf; ++f) {
    Field e(nf, 0.0);
    e[f] = 1.0;
    const Field r = restrict_interior(e, fine, coarse);
    for (std::size_t c = 0; c < nc; ++c) brute(c, f) = r[c];
  }
  EXPECT_LT((rule - brute).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Transfer, InterpolationMatchesHatFunctions) {
  const auto [fine, coarse] = make_pair(16, shapes::reference_flower());
  const double h = fine.grid.spacing(), hc = coarse.grid.spacing();
  for (std::size_t c = 0; c < coarse.grid.node_count(); ++c) {
    Field e(coarse.grid.node_count(), 0.0);
    e[c] = 1.0;
    const Field out = interpolate_error(e, coarse.grid, fine);
    const auto xc = coarse.grid.position(c);
    for (std::size_t f = 0; f < fine.grid.node_count(); ++f) {
      double expected = 0.0;
      if (fine.is_active(f)) {
        const auto xf = fine.grid.position(f);
        expected = std::max(0.0, 1.0 - std::abs(xf[0] - xc[0]) / hc) * std::max(0.0, 1.0 - std::abs(xf[1] - xc[1]) / hc);
      }
      ASSERT_NEAR(out[f], expected, 1e-14) << "coarse " << c << " fine " << f << " h " << h;
    }
  }
}

TEST(Transfer, InterpolationIsExactForLinearFunctions3D) {
  const auto phi = shapes::reference_ellipsoid();
  const auto fine = classify(UniformGrid<3>(16), phi);
  const auto coarse = classify(UniformGrid<3>(8), phi);
  const auto lin = [](const Point<3>& p) { return 0.5 - p[0] + 2 * p[1] + 0.25 * p[2]; };
  Field e = coarse.grid.make_field();
  for (std::size_t c = 0; c < e.size(); ++c) e[c] = lin(coarse.grid.position(c));
  const Field out = interpolate_error(e, coarse.grid, fine);
  for (std::size_t f : fine.internal) EXPECT_NEAR(out[f], lin(fine.grid.position(f)), 1e-13);
  for (const auto& g : fine.ghosts) EXPECT_NEAR(out[g.node], lin(fine.grid.position(g.node)), 1e-13);
}

TEST(Transfer, VerticalLineGhostRestrictionIsOneTwoOne) {
  const int n = 16;
  const double h = 2.0 / n;
  const auto phi = shapes::vertical_plane<2>(1 - 0.4 * h);
  const auto fine = classify(UniformGrid<2>(n), phi);
  const auto coarse = classify(UniformGrid<2>(n / 2), phi);
  const auto band = build_band(fine, phi);
  Field r = random_field(fine.grid.node_count(), 3);
  extrapolate(band, r);
  const Field rc = restrict_ghost(r, fine, band, coarse);
  for (const auto& g : coarse.ghosts) {
    const int j = coarse.grid.multi_index(g.node)[1];
    const auto at = [&](int jj) { return r[fine.grid.index({n, jj})]; };
    EXPECT_NEAR(rc[g.node], (at(2 * j - 1) + 2 * at(2 * j) + at(2 * j + 1)) / 4.0, 1e-14);
  }
}

TEST(Transfer, OneDimensionalGhostRestrictionIsInjection) {
  const int n = 16;
  const auto phi = shapes::interval(1 - 0.3 * 2.0 / n);
  const auto fine = classify(UniformGrid<1>(n), phi);
  const auto coarse = classify(UniformGrid<1>(n / 2), phi);
  const auto band = build_band(fine, phi);
  Field r = random_field(fine.grid.node_count(), 5);
  extrapolate(band, r);
  const Field rc = restrict_ghost(r, fine, band, coarse);
  ASSERT_EQ(coarse.ghosts.size(), 1u);
  EXPECT_DOUBLE_EQ(rc[coarse.ghosts[0].node], r[fine.grid.index({n})]);
}

TEST(Transfer, ExtrapolationReproducesConstantsAndKeepsGhosts) {
  const auto phi = shapes::reference_flower();
  const auto cls = classify(UniformGrid<2>(64), phi);
  const auto band = build_band(cls, phi);
  Field v = cls.grid.make_field(-7.0);
  for (std::size_t b : band.nodes) v[b] = 0.0;
  for (const auto& g : cls.ghosts) v[g.node] = 2.5;
  extrapolate(band, v);
  for (std::size_t b : band.nodes) EXPECT_NEAR(v[b], 2.5, 1e-14);
  for (const auto& g : cls.ghosts) EXPECT_EQ(v[g.node], 2.5);
  int max_layer = 0;
  for (int l : band.layer) max_layer = std::max(max_layer, l);
  EXPECT_EQ(max_layer, kBandCells);
}

TEST(Transfer, GhostRestrictionOfConstantsIsExact) {
  for (const auto& phi : {shapes::reference_circle(), shapes::reference_flower()}) {
    const auto fine = classify(UniformGrid<2>(64), phi);
    const auto coarse = classify(UniformGrid<2>(32), phi);
    const auto band = build_band(fine, phi);
    Field r = fine.grid.make_field();
    for (const auto& g : fine.ghosts) r[g.node] = -1.25;
    extrapolate(band, r);
    const Field rc = restrict_ghost(r, fine, band, coarse);
    for (const auto& g : coarse.ghosts) EXPECT_NEAR(rc[g.node], -1.25, 1e-14);
  }
}

TEST(Transfer, FullWeightingOfSmoothFieldsIsSecondOrder) {
  const auto fine = classify(UniformGrid<2>(64), shapes::whole_box<2>());
  const auto coarse = classify(UniformGrid<2>(32), shapes::whole_box<2>());
  const auto f = [](const Point<2>& p) { return std::sin(p[0]) * std::cos(2 * p[1]); };
  Field r = fine.grid.make_field();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = f(fine.grid.position(i));
  const Field rc = restrict_interior(r, fine, coarse);
  const double h = fine.grid.spacing();
  for (std::size_t c : coarse.internal) EXPECT_NEAR(rc[c], f(coarse.grid.position(c)), 2.5 * h * h);
}
