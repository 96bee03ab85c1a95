#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace gipc;
using namespace gipc::testing;

namespace {

SimMesh with_mass(SimMesh m, double density = 1000) {
  m.vertex_mass = compute_lumped_masses(m, density);
  return m;
}

// A 0.1 m tet hovering `gap` above a fixed ground quad.
Scene tet_over_ground(double gap) {
  Scene scene;
  scene.bodies.push_back(ground_quad(0.5, 0));
  SimMesh tet = unit_tet(0.1);
  transform_mesh(tet, 1.0, Mat3::Identity(), Vec3(-0.03, gap, -0.03));
  scene.bodies.push_back(with_mass(tet));
  return scene;
}

SolverConfig base_config(const Scene& scene) {
  SolverConfig c;
  c.dt = 0.01;
  c.eps_d = 1e-4;
  const double l = bbox_diagonal(scene.bodies);
  c.barrier.d_hat = 1e-3 * l;
  c.barrier.kappa = 1e8;
  return c;
}

std::vector<ElasticMaterial> materials(int n, double E = 1e5) {
  return std::vector<ElasticMaterial>(n, ElasticMaterial::from_young_poisson(E, 0.4));
}

}  // namespace

TEST(Solver, FreeFallMatchesImplicitEuler) {
  Scene scene;
  scene.bodies.push_back(with_mass(unit_tet(0.1)));
  SolverConfig c = base_config(scene);
  c.pcg_rel_tol = 1e-24;
  c.eps_d = 1e-9;
  Simulation sim(scene, materials(1), c);
  Positions x = sim.positions();
  Vec3 v = Vec3::Zero();
  for (int s = 0; s < 10; ++s) {
    const StepDiagnostics d = sim.advance_time_step();
    EXPECT_TRUE(d.converged);
    EXPECT_LE(d.newton_iters, 2);
    v += c.dt * scene.gravity;
    x.colwise() += c.dt * v;
    EXPECT_LT((sim.positions() - x).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Solver, AssembledSystemIsPositiveDefinite) {
  Scene scene = tet_over_ground(2e-4);
  Simulation sim(scene, materials(2), base_config(scene));
  sim.begin_step();
  const auto contacts = sim.detect(sim.positions());
  ASSERT_FALSE(contacts.empty());
  const MatX A = assemble_dense(sim.assemble_system(sim.positions(), contacts));
  EXPECT_GT(min_eigenvalue(A), 0);
}

TEST(Solver, GradientMatchesEnergyFiniteDifferences) {
  Scene scene = tet_over_ground(3e-4);
  SolverConfig c = base_config(scene);
  Simulation sim(scene, materials(2), c);
  sim.velocities().setConstant(0.0);
  sim.velocities().row(1).setConstant(-0.05);
  sim.begin_step();
  Positions x = sim.positions();
  for (int v = 4; v < x.cols(); ++v) x.col(v) += Vec3(1e-5 * v, -1e-4, 2e-5);
  const auto contacts = sim.detect(x);
  ASSERT_FALSE(contacts.empty());
  const VecX g = sim.energy_gradient(x, contacts);
  const VecX fd = fd_gradient(
      [&](const VecX& v) { return sim.evaluate_energy(Eigen::Map<const Positions>(v.data(), 3, x.cols())); },
      flat(x), 1e-9);
  VecX fd_free = fd;
  for (int v = 0; v < 4; ++v) fd_free.segment<3>(3 * v).setZero();
  EXPECT_LT(rel_err(g, fd_free), 1e-5);
}

TEST(Solver, DropStaysIntersectionFreeAndEnergyDecreases) {
  for (SolverMode mode : {SolverMode::Gipc, SolverMode::ReferenceIpc}) {
    Scene scene = tet_over_ground(5e-3);
    SolverConfig c = base_config(scene);
    c.mode = mode;
    c.check_candidates = true;
    Simulation sim(scene, materials(2), c);
    for (int s = 0; s < 15; ++s) {
      sim.begin_step();
      for (int it = 0; it < c.newton_max_iters; ++it) {
        const double before = sim.evaluate_energy(sim.positions());
        const NewtonResult r = sim.newton_step();
        EXPECT_LE(sim.evaluate_energy(sim.positions()), before);
        if (r.converged || r.line_search_failed) break;
      }
      sim.velocities() = (sim.positions() - sim.step_start()) / c.dt;
      EXPECT_GT(exhaustive_min_distance(sim.mesh(), sim.positions()), 0);
    }
    EXPECT_GT(sim.min_candidate_distance(), 0);
    // The tet has come to the ground and stays above it.
    EXPECT_LT(sim.positions().row(1).segment(4, 4).minCoeff(), c.barrier.d_hat);
  }
}

TEST(Solver, AtMinimumNoMotion) {
  Scene scene;
  scene.bodies.push_back(with_mass(unit_tet(0.1)));
  scene.gravity = Vec3::Zero();
  Simulation sim(scene, materials(1), base_config(scene));
  const Positions x0 = sim.positions();
  const StepDiagnostics d = sim.advance_time_step();
  EXPECT_TRUE(d.converged);
  EXPECT_EQ(d.newton_iters, 1);
  EXPECT_EQ((sim.positions() - x0).norm(), 0);
}

TEST(Solver, BarrierDirectionAlignedWithNormal) {
  // A single free vertex near a fixed triangle or edge: the contact part of the Newton direction
  // is along the contact normal.
  for (StencilKind kind : {StencilKind::PointTriangle, StencilKind::PointEdge, StencilKind::PointPoint}) {
    Rng rng(111);
    for (int i = 0; i < 20; ++i) {
      const auto pts = random_stencil(rng, kind, uniform(rng, 1e-4, 9e-4));
      const Positions x = to_positions(pts);
      const int n = static_cast<int>(pts.size());
      BarrierParams bp;
      bp.d_hat = 1e-3;
      bp.kappa = 1e5;
      const ContactStencil s = local_stencil(kind);
      LocalQuadratic q = build_local_quadratic(s, build_diagonal_jacobian(s, x, bp.d_hat), bp);
      BlockSystem sys;
      sys.mass = VecX::Constant(3 * n, 0.1);
      sys.fixed.assign(n, 1);
      sys.fixed[0] = 0;
      sys.blocks = {q};
      VecX r = VecX::Zero(3 * n);
      r.segment<3>(0) = random_vec(rng, 1e-3);
      const VecX rhs_inertia = -sys.mass.cwiseProduct(r);
      VecX rhs = rhs_inertia;
      rhs.segment<3>(0) -= q.grad.segment<3>(0);
      const VecX d = dense_solve(sys, rhs);
      sys.blocks.clear();
      const VecX d_inertia = dense_solve(sys, rhs_inertia);
      const Vec3 contact_part = (d - d_inertia).segment<3>(0);
      const Vec3 normal = q.grad.segment<3>(0).normalized();
      EXPECT_LT(contact_part.cross(normal).norm(), 1e-8 * d.norm()) << kind_name(kind);
    }
  }
}

TEST(Solver, PcgAndDenseStepsAgree) {
  // Both solvers advance from the same state each step.
  Scene scene = tet_over_ground(1e-3);
  SolverConfig c = base_config(scene);
  c.eps_d = 1e-7;
  SolverConfig cd = c;
  cd.linear_solver = LinearSolverKind::Dense;
  Simulation a(scene, materials(2), c), b(scene, materials(2), cd);
  const double l = a.bbox_diagonal();
  for (int s = 0; s < 10; ++s) {
    EXPECT_TRUE(a.advance_time_step().converged);
    EXPECT_TRUE(b.advance_time_step().converged);
    EXPECT_LT((a.positions() - b.positions()).cwiseAbs().maxCoeff(), 1e-6 * l);
    b.positions() = a.positions();
    b.velocities() = a.velocities();
  }
}

TEST(Solver, ModesAgreeOnDrop) {
  Scene scene = tet_over_ground(3e-3);
  SolverConfig c = base_config(scene);
  SolverConfig cr = c;
  cr.mode = SolverMode::ReferenceIpc;
  Simulation a(scene, materials(2), c), b(scene, materials(2), cr);
  for (int s = 0; s < 20; ++s) {
    a.advance_time_step();
    b.advance_time_step();
  }
  EXPECT_LT((a.positions() - b.positions()).cwiseAbs().maxCoeff(), 1e-2 * a.bbox_diagonal());
}

TEST(Solver, RejectsInvalidConfiguration) {
  Scene scene = tet_over_ground(1e-2);
  SolverConfig c = base_config(scene);
  c.dt = 0;
  EXPECT_THROW(Simulation(scene, materials(2), c), Error);
  EXPECT_THROW(Simulation(scene, materials(1), base_config(scene)), Error);
  Scene massless = tet_over_ground(1e-2);
  massless.bodies[1].vertex_mass.setZero();
  EXPECT_THROW(Simulation(massless, materials(2), base_config(massless)), Error);
}
