#include "gipc_app/scene_config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace gipc::app {

namespace {

using nlohmann::json;

Vec3 vec3(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 3) throw Error(std::string("'") + key + "' must be a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_vec(const json& j, const char* key, Vec3& out) {
  if (j.contains(key)) out = vec3(j.at(key), key);
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
  return p.is_absolute() ? p : base / p;
}

BodyConfig parse_body(const json& j, const std::filesystem::path& base_dir) {
  BodyConfig b;
  if (!j.contains("mesh")) throw Error("body without 'mesh'");
  b.mesh = resolve(base_dir, j.at("mesh").get<std::string>());
  read(j, "fixed", b.fixed);
  read(j, "fixed_vertices", b.fixed_vertices);
  read(j, "density", b.density);
  if (j.contains("material")) {
    const json& m = j.at("material");
    read(m, "youngs_modulus", b.youngs_modulus);
    read(m, "poisson_ratio", b.poisson_ratio);
  }
  if (j.contains("transform")) {
    const json& t = j.at("transform");
    read(t, "scale", b.scale);
    read_vec(t, "rotation_deg", b.rotation_deg);
    read_vec(t, "translation", b.translation);
  }
  read_vec(j, "velocity", b.velocity);
  return b;
}

SimMesh load_body_mesh(const BodyConfig& b) {
  const auto ext = b.mesh.extension();
  if (ext == ".node") {
    auto ele = b.mesh;
    ele.replace_extension(".ele");
    return load_tet_mesh(b.mesh, ele);
  }
  if (ext == ".obj") {
    if (!b.fixed) throw Error(b.mesh.string() + ": surface meshes are obstacles and must be fixed");
    return load_obj_surface(b.mesh);
  }
  throw Error(b.mesh.string() + ": unknown mesh format (expected .node or .obj)");
}

}  // namespace

SolverMode parse_mode(const std::string& name) {
  if (name == "gipc") return SolverMode::Gipc;
  if (name == "reference-ipc") return SolverMode::ReferenceIpc;
  throw Error("unknown mode '" + name + "' (expected gipc or reference-ipc)");
}

std::string mode_name(SolverMode mode) { return mode == SolverMode::Gipc ? "gipc" : "reference-ipc"; }

BarrierForm parse_barrier_form(const std::string& name) {
  if (name == "quadratic-log") return BarrierForm::QuadraticLog;
  if (name == "log") return BarrierForm::Log;
  throw Error("unknown barrier form '" + name + "' (expected quadratic-log or log)");
}

SceneConfig parse_scene_config(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("scene config: ") + e.what());
  }
  SceneConfig c;
  try {
    read(j, "name", c.name);
    if (!j.contains("bodies") || !j.at("bodies").is_array() || j.at("bodies").empty()) {
      throw Error("scene config needs a non-empty 'bodies' array");
    }
    for (const auto& b : j.at("bodies")) c.bodies.push_back(parse_body(b, base_dir));
    read_vec(j, "gravity", c.gravity);
    read(j, "dt", c.dt);
    read(j, "steps", c.steps);
    if (j.contains("barrier")) {
      const json& b = j.at("barrier");
      read(b, "d_hat_rel", c.d_hat_rel);
      read(b, "kappa", c.kappa);
      read(b, "d_thr_ratio", c.d_thr_ratio);
      read(b, "filter", c.filter);
      if (b.contains("form")) c.barrier_form = parse_barrier_form(b.at("form").get<std::string>());
    }
    if (j.contains("solver")) {
      const json& s = j.at("solver");
      read(s, "eps_d", c.eps_d);
      read(s, "pcg_rel_tol", c.pcg_rel_tol);
      read(s, "newton_max_iters", c.newton_max_iters);
      read(s, "mollify", c.mollify);
      if (s.contains("mode")) c.mode = parse_mode(s.at("mode").get<std::string>());
      if (s.contains("linear_solver")) {
        const auto ls = s.at("linear_solver").get<std::string>();
        if (ls == "pcg") c.linear_solver = LinearSolverKind::Pcg;
        else if (ls == "dense") c.linear_solver = LinearSolverKind::Dense;
        else throw Error("unknown linear_solver '" + ls + "' (expected pcg or dense)");
      }
    }
    if (j.contains("friction")) {
      const json& f = j.at("friction");
      read(f, "mu", c.friction_mu);
      read(f, "eps_v_rel", c.friction_eps_v_rel);
    }
    if (j.contains("outputs")) {
      const json& o = j.at("outputs");
      if (o.contains("dir")) c.out_dir = o.at("dir").get<std::string>();
      read(o, "obj_every", c.obj_every);
      read(o, "csv", c.csv);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("scene config: ") + e.what());
  }
  c.out_dir = resolve(base_dir, c.out_dir);
  if (c.steps < 0) throw Error("scene config: 'steps' must be >= 0");
  if (!(c.dt > 0)) throw Error("scene config: 'dt' must be positive");
  if (!(c.d_hat_rel > 0) || !(c.kappa > 0)) throw Error("scene config: barrier d_hat_rel and kappa must be positive");
  return c;
}

SceneConfig load_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scene config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  SceneConfig c = parse_scene_config(ss.str(), path.parent_path());
  if (c.name.empty()) c.name = path.stem().string();
  return c;
}

Mat3 euler_rotation(const Vec3& degrees) {
  const Vec3 r = degrees * std::numbers::pi / 180;
  return (Eigen::AngleAxisd(r.z(), Vec3::UnitZ()) * Eigen::AngleAxisd(r.y(), Vec3::UnitY()) *
          Eigen::AngleAxisd(r.x(), Vec3::UnitX()))
      .toRotationMatrix();
}

SimulationSetup build_setup(const SceneConfig& config) {
  SimulationSetup s;
  s.scene.gravity = config.gravity;
  std::vector<Vec3> velocities;
  for (const auto& b : config.bodies) {
    SimMesh mesh = load_body_mesh(b);
    transform_mesh(mesh, b.scale, euler_rotation(b.rotation_deg), b.translation);
    if (b.fixed) mesh.is_fixed.assign(mesh.num_vertices(), 1);
    for (int v : b.fixed_vertices) {
      if (v < 0 || v >= mesh.num_vertices()) throw Error(b.mesh.string() + ": fixed vertex out of range");
      mesh.is_fixed[v] = 1;
    }
    if (!mesh.tets.empty()) {
      if (!(b.density > 0)) throw Error(b.mesh.string() + ": density must be positive");
      mesh.vertex_mass = compute_lumped_masses(mesh, b.density);
    }
    for (int v = 0; v < mesh.num_vertices(); ++v) velocities.push_back(mesh.is_fixed[v] ? Vec3::Zero() : b.velocity);
    s.materials.push_back(ElasticMaterial::from_young_poisson(b.youngs_modulus, b.poisson_ratio));
    s.scene.bodies.push_back(std::move(mesh));
  }
  const double l = bbox_diagonal(s.scene.bodies);
  s.scene.bbox_diagonal = l;

  SolverConfig& sc = s.solver;
  sc.dt = config.dt;
  sc.eps_d = config.eps_d;
  sc.pcg_rel_tol = config.pcg_rel_tol;
  sc.newton_max_iters = config.newton_max_iters;
  sc.mode = config.mode;
  sc.mollify = config.mollify;
  sc.linear_solver = config.linear_solver;
  sc.barrier.d_hat = config.d_hat_rel * l;
  sc.barrier.kappa = config.kappa;
  sc.barrier.d_thr_ratio = config.d_thr_ratio;
  sc.barrier.filter = config.filter;
  sc.barrier.form = config.barrier_form;
  sc.friction_mu = config.friction_mu;
  sc.friction_eps_v = config.friction_eps_v_rel * l;

  s.initial_velocity.resize(3, static_cast<Eigen::Index>(velocities.size()));
  for (std::size_t i = 0; i < velocities.size(); ++i) s.initial_velocity.col(static_cast<Eigen::Index>(i)) = velocities[i];
  return s;
}

std::unique_ptr<Simulation> make_simulation(const SimulationSetup& setup) {
  auto sim = std::make_unique<Simulation>(setup.scene, setup.materials, setup.solver);
  sim->velocities() = setup.initial_velocity;
  return sim;
}

}  // namespace gipc::app
