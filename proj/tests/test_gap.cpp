#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gipc;
using namespace gipc::testing;

namespace {

const StencilKind kBaseKinds[] = {StencilKind::PointPoint, StencilKind::PointEdge, StencilKind::PointTriangle,
                                  StencilKind::EdgeEdge};

}  // namespace

TEST(Gap, SimplexDimension) {
  EXPECT_EQ(simplex_dimension(StencilKind::PointPoint), 1);
  EXPECT_EQ(simplex_dimension(StencilKind::PointEdge), 2);
  EXPECT_EQ(simplex_dimension(StencilKind::PointTriangle), 3);
  EXPECT_EQ(simplex_dimension(StencilKind::EdgeEdge), 3);
  EXPECT_EQ(simplex_dimension(StencilKind::EdgeEdgeParallel), 3);
  EXPECT_EQ(simplex_dimension(StencilKind::PointEdgeParallel), 3);
  EXPECT_EQ(simplex_dimension(StencilKind::PointPointParallel), 3);
}

TEST(Gap, ExplicitJacobianDeterminantIsScaledDistance) {
  Rng rng(51);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 1000; ++i) {
      const double d_hat = uniform(rng, 0.1, 1.0);
      const double d = uniform(rng, 0.05, 0.99) * d_hat;
      const auto pts = random_stencil(rng, kind, d);
      const MatX F = explicit_jacobian_oracle(kind, pts, d_hat);
      EXPECT_LT(rel_err(F.determinant(), d / d_hat), 1e-8) << kind_name(kind);
    }
  }
}

TEST(Gap, ExplicitJacobianIsRotationInvariant) {
  Rng rng(52);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 100; ++i) {
      auto pts = random_stencil(rng, kind, 0.3);
      const double det0 = explicit_jacobian_oracle(kind, pts, 1).determinant();
      const Mat3 R = random_rotation(rng);
      const Vec3 t = random_vec(rng);
      for (auto& p : pts) p = R * p + t;
      EXPECT_LT(rel_err(explicit_jacobian_oracle(kind, pts, 1).determinant(), det0), 1e-10);
    }
  }
}

TEST(Gap, DiagonalJacobianAgreesWithOracle) {
  Rng rng(53);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 200; ++i) {
      const double d = uniform(rng, 0.1, 0.9);
      const auto pts = random_stencil(rng, kind, d);
      const DiagonalJacobian J = build_diagonal_jacobian(local_stencil(kind), to_positions(pts), 1.0);
      EXPECT_EQ(J.m, simplex_dimension(kind));
      EXPECT_NEAR(J.f, d, 1e-12);
      EXPECT_NEAR(diagonal_matrix(J).determinant(), explicit_jacobian_oracle(kind, pts, 1).determinant(), 1e-10);
      EXPECT_NEAR(gap_function(J).g, d * d, 1e-12);
      EXPECT_FALSE(gap_function(J).gamma.has_value());
    }
  }
}

TEST(Gap, GradientOfScaledDistance) {
  Rng rng(54);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 200; ++i) {
      const double d_hat = 0.7;
      const auto pts = random_stencil(rng, kind, uniform(rng, 0.1, 0.6));
      const ContactStencil s = local_stencil(kind);
      const Positions x = to_positions(pts);
      const DiagonalJacobian J = build_diagonal_jacobian(s, x, d_hat);
      const VecX fd = fd_gradient(
          [&](const VecX& v) {
            Positions y = Eigen::Map<const Positions>(v.data(), 3, x.cols());
            return build_diagonal_jacobian(s, y, d_hat).f;
          },
          flat(x), 1e-6);
      EXPECT_LT(rel_err(J.stacked_grad_f(), fd), 1e-7) << kind_name(kind);
    }
  }
}

TEST(Gap, ParallelJacobianCarriesParallelness) {
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    const auto pts = random_parallel_edges(rng, uniform(rng, 0.1, 0.6));
    const Positions x = to_positions(pts);
    const ContactStencil s = local_stencil(StencilKind::EdgeEdgeParallel, 1e-3);
    const DiagonalJacobian J = build_diagonal_jacobian(s, x, 1.0);
    EXPECT_EQ(J.m, 3);
    ASSERT_TRUE(J.has_c);
    const double c = edge_parallel_measure(pts[0], pts[1], pts[2], pts[3]);
    EXPECT_NEAR(J.sqrt_c * J.sqrt_c, c, 1e-15);
    const GapValue gv = gap_function(J);
    ASSERT_TRUE(gv.gamma.has_value());
    EXPECT_NEAR(*gv.gamma, c, 1e-15);
    EXPECT_NEAR(diagonal_matrix(J).determinant(), std::sqrt(c) * J.f, 1e-14);
    const VecX fd = fd_gradient(
        [&](const VecX& v) {
          Positions y = Eigen::Map<const Positions>(v.data(), 3, 4);
          return build_diagonal_jacobian(s, y, 1.0).sqrt_c;
        },
        flat(x), 1e-7);
    EXPECT_LT(rel_err(J.stacked_grad_sqrt_c(), fd), 1e-6);
  }
}

TEST(Gap, OutOfRangeDistancesThrow) {
  const auto pts = std::vector<Vec3>{Vec3(0, 0, 0), Vec3(0, 0, 2)};
  EXPECT_THROW(build_diagonal_jacobian(local_stencil(StencilKind::PointPoint), to_positions(pts), 1.0), Error);
  const auto touching = std::vector<Vec3>{Vec3(0, 0, 0), Vec3(0, 0, 0)};
  EXPECT_THROW(build_diagonal_jacobian(local_stencil(StencilKind::PointPoint), to_positions(touching), 1.0), Error);
}
