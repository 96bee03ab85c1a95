#pragma once

#include "gipc/barrier.hpp"
#include "gipc/elasticity.hpp"
#include "gipc/friction.hpp"
#include "gipc/linear.hpp"
#include "gipc/mesh.hpp"
#include "gipc/mollifier.hpp"
#include "gipc/proximity.hpp"

#include <limits>

namespace gipc {

enum class SolverMode { Gipc, ReferenceIpc };
enum class LinearSolverKind { Pcg, Dense };

struct SolverConfig {
  double dt = 0.01;
  double eps_d = 1e-2;  // on |d|_inf / (l dt)
  double pcg_rel_tol = 1e-4;
  int pcg_max_iters = 10000;
  int newton_max_iters = 200;
  BarrierParams barrier;
  double friction_mu = 0;
  double friction_eps_v = 1e-3;  // m/s
  SolverMode mode = SolverMode::Gipc;
  bool mollify = true;
  double ccd_slack = 0.9;
  LinearSolverKind linear_solver = LinearSolverKind::Pcg;
  bool check_candidates = false;  // exhaustive distance check of every line-search candidate
  double alpha_floor = 1e-12;
};

struct NewtonResult {
  double step_norm_rel = 0;  // |d|_inf / (l dt)
  bool converged = false;
  bool line_search_failed = false;
  double alpha = 0;
  int pcg_iters = 0;
  int contacts = 0;
};

struct StepDiagnostics {
  int step = 0;
  int newton_iters = 0;
  int pcg_iters = 0;
  double min_distance_rel = 0;
  double energy = 0;
  double alpha_min = 1;
  double wall_ms = 0;
  bool converged = false;
  bool line_search_failed = false;
  int contacts = 0;
};

// Exact minimum distance over every non-adjacent surface point-triangle and edge-edge pair.
double exhaustive_min_distance(const SimMesh& mesh, const Positions& x);

class Simulation {
 public:
  // One material per body; bodies without tets ignore theirs.
  Simulation(const Scene& scene, std::vector<ElasticMaterial> body_materials, const SolverConfig& config);

  const SimMesh& mesh() const { return mesh_; }
  const Positions& positions() const { return x_; }
  Positions& positions() { return x_; }
  const Positions& velocities() const { return v_; }
  Positions& velocities() { return v_; }
  const Positions& step_start() const { return x_prev_; }
  const Positions& inertial_target() const { return x_tilde_; }
  SolverConfig& config() { return config_; }
  const SolverConfig& config() const { return config_; }
  double bbox_diagonal() const { return l_; }
  const Vec3& gravity() const { return gravity_; }
  int step_index() const { return step_; }
  const std::vector<FrictionDatum>& friction() const { return friction_; }
  // Smallest exhaustive distance seen over line-search candidates (check_candidates only).
  double min_candidate_distance() const { return min_candidate_distance_; }

  std::vector<ContactStencil> detect(const Positions& x) const;

  void begin_step();
  NewtonResult newton_step();
  StepDiagnostics advance_time_step();

  double evaluate_energy(const Positions& x) const;
  double barrier_energy(const Positions& x, const std::vector<ContactStencil>& contacts) const;
  VecX energy_gradient(const Positions& x, const std::vector<ContactStencil>& contacts) const;
  // Elastic, barrier and friction blocks, each scaled by dt^2.
  std::vector<LocalQuadratic> assemble_local_quadratics(const Positions& x,
                                                        const std::vector<ContactStencil>& contacts) const;
  BlockSystem assemble_system(const Positions& x, const std::vector<ContactStencil>& contacts) const;
  LocalQuadratic barrier_quadratic(const ContactStencil& stencil, const Positions& x) const;

 private:
  SimMesh mesh_;
  std::vector<ElasticMaterial> tet_material_;
  SolverConfig config_;
  Vec3 gravity_;
  double l_ = 1;
  Positions x_, v_, x_prev_, x_tilde_;
  VecX mass_;  // per DOF
  std::vector<FrictionDatum> friction_;
  int step_ = 0;
  double min_candidate_distance_ = std::numeric_limits<double>::infinity();
};

}  // namespace gipc
