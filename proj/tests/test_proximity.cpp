#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

using namespace gipc;
using namespace gipc::testing;

namespace {

VecX stack(const std::vector<Vec3>& pts) {
  VecX v(3 * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) v.segment<3>(3 * i) = pts[i];
  return v;
}

std::vector<Vec3> unstack(const VecX& v) {
  std::vector<Vec3> pts(v.size() / 3);
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = v.segment<3>(3 * i);
  return pts;
}

DistanceResult closed_form(StencilKind kind, const std::vector<Vec3>& p) {
  switch (kind) {
    case StencilKind::PointPoint: return point_point_distance(p[0], p[1]);
    case StencilKind::PointEdge: return point_line_distance(p[0], p[1], p[2]);
    case StencilKind::PointTriangle: return point_plane_distance(p[0], p[1], p[2], p[3]);
    default: return line_line_distance(p[0], p[1], p[2], p[3]);
  }
}

std::set<std::vector<int>> keys(const std::vector<ContactStencil>& stencils) {
  std::set<std::vector<int>> out;
  for (const auto& s : stencils) out.insert(stencil_key(s));
  return out;
}

const StencilKind kBaseKinds[] = {StencilKind::PointPoint, StencilKind::PointEdge, StencilKind::PointTriangle,
                                  StencilKind::EdgeEdge};

}  // namespace

TEST(Distance, ClosedFormValuesMatchConstruction) {
  Rng rng(11);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 200; ++i) {
      const double d = uniform(rng, 0.01, 0.5);
      const auto pts = random_stencil(rng, kind, d);
      EXPECT_NEAR(std::sqrt(closed_form(kind, pts).d2), d, 1e-12) << kind_name(kind);
    }
  }
}

TEST(Distance, GradientsMatchFiniteDifferences) {
  Rng rng(12);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 200; ++i) {
      const auto pts = random_stencil(rng, kind, uniform(rng, 0.05, 0.8));
      const DistanceResult r = closed_form(kind, pts);
      const VecX fd = fd_gradient([&](const VecX& v) { return closed_form(kind, unstack(v)).d2; }, stack(pts), 1e-6);
      VecX an(fd.size());
      for (std::size_t k = 0; k < pts.size(); ++k) an.segment<3>(3 * k) = r.grad_d2[k];
      EXPECT_LT(rel_err(an, fd), 1e-7) << kind_name(kind);
    }
  }
}

TEST(Distance, WitnessWeightsReproduceClosestPointDifference) {
  Rng rng(13);
  for (StencilKind kind : kBaseKinds) {
    for (int i = 0; i < 100; ++i) {
      const auto pts = random_stencil(rng, kind, uniform(rng, 0.05, 0.8));
      const DistanceResult r = closed_form(kind, pts);
      const auto w = witness_weights(kind, r.witness);
      Vec3 diff = Vec3::Zero();
      for (std::size_t k = 0; k < pts.size(); ++k) diff += w[k] * pts[k];
      EXPECT_NEAR(diff.squaredNorm(), r.d2, 1e-12) << kind_name(kind);
    }
  }
}

TEST(Classification, PointTriangleMatchesGridOracle) {
  Rng rng(21);
  std::set<StencilKind> seen;
  for (int i = 0; i < 300; ++i) {
    const Vec3 t0 = random_vec(rng), t1 = random_vec(rng), t2 = random_vec(rng);
    if ((t1 - t0).cross(t2 - t0).norm() < 0.2) continue;
    const Vec3 p = random_vec(rng, 2);
    const Classification c = classify_point_triangle(p, t0, t1, t2);
    seen.insert(c.kind);
    const double grid = grid_point_triangle(p, t0, t1, t2, 200);
    EXPECT_LE(c.dist.d2, grid + 1e-12);
    EXPECT_GT(c.dist.d2, grid - 0.05 * std::sqrt(grid) - 1e-3);
  }
  EXPECT_EQ(seen.size(), 3u);
}

TEST(Classification, EdgeEdgeMatchesGridOracle) {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    const Vec3 a0 = random_vec(rng), a1 = random_vec(rng), b0 = random_vec(rng), b1 = random_vec(rng);
    const Classification c = classify_edge_edge(a0, a1, b0, b1);
    EXPECT_FALSE(is_parallel(c.kind));
    const double grid = grid_edge_edge(a0, a1, b0, b1, 300);
    EXPECT_LE(c.dist.d2, grid + 1e-12);
    EXPECT_GT(c.dist.d2, grid - 0.05 * std::sqrt(grid) - 1e-3);
  }
}

TEST(Classification, InteriorRegionsPickFullStencils) {
  const Classification pt = classify_point_triangle(Vec3(0.2, 0.2, 0.3), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_EQ(pt.kind, StencilKind::PointTriangle);
  EXPECT_NEAR(pt.dist.d2, 0.09, 1e-15);
  const Classification pe = classify_point_triangle(Vec3(0.5, -0.2, 0.1), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_EQ(pe.kind, StencilKind::PointEdge);
  EXPECT_NEAR(pe.dist.d2, 0.05, 1e-15);
  const Classification pp = classify_point_triangle(Vec3(-0.1, -0.1, 0.1), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
  EXPECT_EQ(pp.kind, StencilKind::PointPoint);
  EXPECT_EQ(pp.local[0], 0);
  EXPECT_EQ(pp.local[1], 1);
  const Classification ee = classify_edge_edge(Vec3(-1, 0, 0), Vec3(1, 0, 0), Vec3(0, -1, 0.2), Vec3(0, 1, 0.2));
  EXPECT_EQ(ee.kind, StencilKind::EdgeEdge);
  EXPECT_NEAR(ee.dist.d2, 0.04, 1e-15);
}

TEST(Classification, ParallelEdgesArePromoted) {
  const Vec3 a0(0, 0, 0), a1(1, 0, 0), b0(0.2, 0.1, 1e-3), b1(1.2, 0.1, 1e-3 + 1e-6);
  const Classification plain = classify_edge_edge(a0, a1, b0, b1, 0);
  EXPECT_FALSE(is_parallel(plain.kind));
  const Classification promoted = classify_edge_edge(a0, a1, b0, b1, 1e-3);
  EXPECT_TRUE(is_parallel(promoted.kind));
  EXPECT_EQ(distance_kind(promoted.kind), plain.kind);
  EXPECT_NEAR(promoted.dist.d2, plain.dist.d2, 1e-15);
  EXPECT_LT(promoted.c, 1e-3);
}

TEST(Classification, ParallelMeasureGradient) {
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    std::vector<Vec3> p{random_vec(rng), random_vec(rng), random_vec(rng), random_vec(rng)};
    std::array<Vec3, 4> g;
    edge_parallel_measure(p[0], p[1], p[2], p[3], &g);
    const VecX fd = fd_gradient(
        [&](const VecX& v) {
          const auto q = unstack(v);
          return edge_parallel_measure(q[0], q[1], q[2], q[3]);
        },
        stack(p), 1e-6);
    VecX an(12);
    for (int k = 0; k < 4; ++k) an.segment<3>(3 * k) = g[k];
    EXPECT_LT(rel_err(an, fd), 1e-7);
  }
}

TEST(Classification, DistanceContinuousAcrossRegionBoundaries) {
  // Sweep a point across the triangle edge and vertex regions: distance stays continuous.
  const Vec3 t0(0, 0, 0), t1(1, 0, 0), t2(0, 1, 0);
  double prev = -1;
  for (int i = 0; i <= 2000; ++i) {
    const double s = -0.5 + 2.0 * i / 2000;
    const double d = std::sqrt(classify_point_triangle(Vec3(s, 0.3 - 0.5 * s, 0.05), t0, t1, t2).dist.d2);
    if (prev >= 0) EXPECT_LT(std::abs(d - prev), 2e-3);
    prev = d;
  }
}

TEST(Classification, DegenerateTriangleThrows) {
  EXPECT_THROW(classify_point_triangle(Vec3(0, 0, 1), Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(2, 0, 0)), Error);
}

TEST(BroadPhase, SweepAndPruneMatchesAllPairs) {
  Rng rng(31);
  std::vector<Aabb> a, b;
  for (int i = 0; i < 60; ++i) {
    const Vec3 c = random_vec(rng, 2);
    a.push_back({c, c + Vec3::Constant(uniform(rng, 0.05, 0.4))});
    const Vec3 e = random_vec(rng, 2);
    b.push_back({e, e + Vec3::Constant(uniform(rng, 0.05, 0.4))});
  }
  auto overlap = [](const Aabb& p, const Aabb& q) {
    return (p.lo.array() <= q.hi.array()).all() && (q.lo.array() <= p.hi.array()).all();
  };
  std::vector<std::pair<int, int>> expected, expected_self;
  for (int i = 0; i < 60; ++i) {
    for (int j = 0; j < 60; ++j) {
      if (overlap(a[i], b[j])) expected.emplace_back(i, j);
      if (i < j && overlap(a[i], a[j])) expected_self.emplace_back(i, j);
    }
  }
  EXPECT_EQ(overlapping_pairs(a, b), expected);
  EXPECT_EQ(overlapping_pairs(a), expected_self);
}

TEST(Detection, MatchesBruteForceOnStackedCubes) {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    Scene scene;
    scene.bodies.push_back(cube_5tets());
    SimMesh top = cube_5tets();
    transform_mesh(top, 1.0, random_rotation(rng), Vec3(uniform(rng, -0.3, 0.3), uniform(rng, 1.05, 1.6),
                                                        uniform(rng, -0.3, 0.3)));
    scene.bodies.push_back(top);
    SimMesh mesh = merge_bodies(scene.bodies);
    const double d_hat = 0.4;
    ProximityOptions opts;
    const auto fast = find_contact_pairs(mesh, mesh.vertices, d_hat, opts);
    const auto slow = brute_force_contacts(mesh, mesh.vertices, d_hat, opts);
    const auto kf = keys(fast), ks = keys(slow);
    std::vector<std::vector<int>> only_fast, only_slow;
    std::set_difference(kf.begin(), kf.end(), ks.begin(), ks.end(), std::back_inserter(only_fast));
    std::set_difference(ks.begin(), ks.end(), kf.begin(), kf.end(), std::back_inserter(only_slow));
    EXPECT_TRUE(only_fast.empty()) << ::testing::PrintToString(only_fast);
    EXPECT_TRUE(only_slow.empty()) << ::testing::PrintToString(only_slow);
    // Several primitive pairs can reduce to one stencil; detection reports it once.
    EXPECT_EQ(fast.size(), keys(fast).size());
  }
}

TEST(Detection, MultiplicityCountsEveryPrimitivePair) {
  Rng rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    Scene scene;
    scene.bodies.push_back(cube_5tets());
    SimMesh top = cube_5tets();
    transform_mesh(top, 1.0, random_rotation(rng), Vec3(uniform(rng, -0.3, 0.3), uniform(rng, 1.05, 1.6),
                                                        uniform(rng, -0.3, 0.3)));
    scene.bodies.push_back(top);
    const SimMesh mesh = merge_bodies(scene.bodies);
    const double d_hat = 0.4;
    int primitive_pairs = 0;
    for (const auto& pair : candidate_pairs(mesh, mesh.vertices, nullptr, d_hat)) {
      primitive_pairs += primitive_distance2(pair, mesh.vertices) < d_hat * d_hat;
    }
    int total = 0;
    for (const auto& s : find_contact_pairs(mesh, mesh.vertices, d_hat)) {
      EXPECT_GE(s.multiplicity, 1);
      total += s.multiplicity;
    }
    EXPECT_EQ(total, primitive_pairs);
  }
}

TEST(Detection, AlignedCubesProduceParallelStencils) {
  Scene scene;
  scene.bodies.push_back(cube_5tets());
  SimMesh top = cube_5tets();
  transform_mesh(top, 1.0, Mat3::Identity(), Vec3(0.25, 1.05, 0));
  scene.bodies.push_back(top);
  SimMesh mesh = merge_bodies(scene.bodies);
  const auto stencils = find_contact_pairs(mesh, mesh.vertices, 0.1);
  ASSERT_FALSE(stencils.empty());
  int parallel = 0;
  for (const auto& s : stencils) {
    parallel += is_parallel(s.kind);
    EXPECT_GE(std::sqrt(stencil_distance(s, mesh.vertices).d2), 0.05 - 1e-12);
  }
  EXPECT_GT(parallel, 0);
  ProximityOptions off;
  off.promote_parallel = false;
  for (const auto& s : find_contact_pairs(mesh, mesh.vertices, 0.1, off)) EXPECT_FALSE(is_parallel(s.kind));
}

TEST(Detection, FixedOnlyStencilsAreSkipped) {
  SimMesh ground = ground_quad(1, 0);
  Scene scene;
  scene.bodies.push_back(ground);
  scene.bodies.push_back(ground_quad(1, 0.01));
  SimMesh mesh = merge_bodies(scene.bodies);
  EXPECT_TRUE(find_contact_pairs(mesh, mesh.vertices, 0.1).empty());
}

TEST(Detection, MinimumDistanceMatchesExhaustive) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    Scene scene;
    scene.bodies.push_back(cube_5tets());
    SimMesh top = cube_5tets();
    transform_mesh(top, 1.0, random_rotation(rng), Vec3(0.1, uniform(rng, 1.5, 1.9), 0.1));
    scene.bodies.push_back(top);
    SimMesh mesh = merge_bodies(scene.bodies);
    const double exhaustive = exhaustive_min_distance(mesh, mesh.vertices);
    EXPECT_NEAR(minimum_distance(mesh, mesh.vertices, 2.0), exhaustive, 1e-12);
  }
}
