#pragma once

#include "gipc/solver.hpp"

#include <filesystem>
#include <memory>
#include <string>

namespace gipc::app {

struct BodyConfig {
  std::filesystem::path mesh;  // .node (with sibling .ele) or .obj
  bool fixed = false;
  std::vector<int> fixed_vertices;
  double density = 1000;
  double youngs_modulus = 1e5;
  double poisson_ratio = 0.4;
  double scale = 1;
  Vec3 rotation_deg = Vec3::Zero();  // applied about x, then y, then z
  Vec3 translation = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

struct SceneConfig {
  std::string name;
  std::vector<BodyConfig> bodies;
  Vec3 gravity = Vec3(0, -9.81, 0);
  double dt = 0.01;
  int steps = 100;

  double d_hat_rel = 1e-3;
  double kappa = 1e5;
  double d_thr_ratio = 0.1;
  bool filter = true;
  BarrierForm barrier_form = BarrierForm::QuadraticLog;

  double eps_d = 1e-2;
  double pcg_rel_tol = 1e-4;
  int newton_max_iters = 200;
  SolverMode mode = SolverMode::Gipc;
  bool mollify = true;
  LinearSolverKind linear_solver = LinearSolverKind::Pcg;

  double friction_mu = 0;
  double friction_eps_v_rel = 1e-3;  // eps_v = friction_eps_v_rel * l per second

  std::filesystem::path out_dir = "out";
  int obj_every = 1;  // 0 writes frame 0 only
  std::string csv = "diagnostics.csv";
};

// Relative mesh and output paths resolve against base_dir.
SceneConfig parse_scene_config(const std::string& json_text, const std::filesystem::path& base_dir);
SceneConfig load_scene_config(const std::filesystem::path& path);

SolverMode parse_mode(const std::string& name);
std::string mode_name(SolverMode mode);
BarrierForm parse_barrier_form(const std::string& name);

struct SimulationSetup {
  Scene scene;
  std::vector<ElasticMaterial> materials;
  SolverConfig solver;
  Positions initial_velocity;
};

// Loads and places the meshes, computes masses and resolves the *_rel parameters against l.
SimulationSetup build_setup(const SceneConfig& config);
std::unique_ptr<Simulation> make_simulation(const SimulationSetup& setup);

Mat3 euler_rotation(const Vec3& degrees);

}  // namespace gipc::app
