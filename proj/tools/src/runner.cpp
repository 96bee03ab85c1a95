#include "gipc_app/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace gipc::app {

namespace {

double orient(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) { return signed_tet_volume(a, b, c, d); }

bool segment_crosses_triangle(const Vec3& a, const Vec3& b, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
  const double sa = orient(t0, t1, t2, a), sb = orient(t0, t1, t2, b);
  if (!((sa > 0 && sb < 0) || (sa < 0 && sb > 0))) return false;
  const double e0 = orient(a, b, t0, t1), e1 = orient(a, b, t1, t2), e2 = orient(a, b, t2, t0);
  return (e0 >= 0 && e1 >= 0 && e2 >= 0) || (e0 <= 0 && e1 <= 0 && e2 <= 0);
}

bool all_fixed(const SimMesh& mesh, std::initializer_list<int> verts) {
  for (int v : verts) {
    if (!mesh.is_fixed[v]) return false;
  }
  return true;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

void write_frame(const SceneConfig& config, int step, const Simulation& sim) {
  char name[32];
  std::snprintf(name, sizeof name, "frame_%05d.obj", step);
  write_obj(config.out_dir / name, sim.positions(), sim.mesh().surface_tris);
}

}  // namespace

std::string IntersectionReport::describe() const {
  std::string s = kind + " stencil (";
  for (int v : verts) {
    if (v < 0) break;
    if (s.back() != '(') s += ", ";
    s += std::to_string(v);
  }
  return s + ") at distance " + format_double(distance);
}

std::optional<IntersectionReport> find_intersection(const SimMesh& mesh, const Positions& x) {
  for (int p : mesh.surface_verts) {
    for (const auto& t : mesh.surface_tris) {
      if (p == t[0] || p == t[1] || p == t[2] || all_fixed(mesh, {p, t[0], t[1], t[2]})) continue;
      const double d2 = primitive_distance2({StencilKind::PointTriangle, {p, t[0], t[1], t[2]}}, x);
      if (!(d2 > 0)) return IntersectionReport{"PT", {p, t[0], t[1], t[2], -1}, std::sqrt(d2)};
    }
  }
  const auto& E = mesh.surface_edges;
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t j = i + 1; j < E.size(); ++j) {
      const auto& a = E[i];
      const auto& b = E[j];
      if (a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1]) continue;
      if (all_fixed(mesh, {a[0], a[1], b[0], b[1]})) continue;
      const double d2 = primitive_distance2({StencilKind::EdgeEdge, {a[0], a[1], b[0], b[1]}}, x);
      if (!(d2 > 0)) return IntersectionReport{"EE", {a[0], a[1], b[0], b[1], -1}, std::sqrt(d2)};
    }
  }
  for (const auto& e : E) {
    for (const auto& t : mesh.surface_tris) {
      if (e[0] == t[0] || e[0] == t[1] || e[0] == t[2] || e[1] == t[0] || e[1] == t[1] || e[1] == t[2]) continue;
      if (all_fixed(mesh, {e[0], e[1], t[0], t[1], t[2]})) continue;
      if (segment_crosses_triangle(x.col(e[0]), x.col(e[1]), x.col(t[0]), x.col(t[1]), x.col(t[2]))) {
        return IntersectionReport{"edge-triangle", {e[0], e[1], t[0], t[1], t[2]}, 0};
      }
    }
  }
  return std::nullopt;
}

std::string step_flag(const StepDiagnostics& d) {
  if (d.converged) return "ok";
  return d.line_search_failed ? "line_search_floor" : "newton_cap";
}

void write_csv_header(std::ostream& out) {
  out << "step,newton_iters,pcg_iters_total,min_distance_rel,energy,alpha_min,wall_ms,flag\n";
}

void write_csv_row(std::ostream& out, const StepDiagnostics& d) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", d.wall_ms);
  out << d.step << ',' << d.newton_iters << ',' << d.pcg_iters << ',' << format_double(d.min_distance_rel) << ','
      << format_double(d.energy) << ',' << format_double(d.alpha_min) << ',' << wall << ',' << step_flag(d) << '\n';
}

RunResult run_scene(const SceneConfig& config, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationSetup setup = build_setup(config);
  auto sim = make_simulation(setup);
  sim->config().check_candidates = options.check_candidates;

  RunResult result;
  result.l = sim->bbox_diagonal();
  std::ofstream csv;
  if (options.write_outputs) {
    std::filesystem::create_directories(config.out_dir);
    csv.open(config.out_dir / config.csv);
    if (!csv) throw Error("cannot write " + (config.out_dir / config.csv).string());
    write_csv_header(csv);
    write_frame(config, 0, *sim);
  }
  auto check = [&](int step) {
    if (!options.check_frames) return true;
    if (auto r = find_intersection(sim->mesh(), sim->positions())) {
      result.intersection_free = false;
      result.breach = r;
      result.breach_step = step;
      if (options.log) *options.log << "intersection at step " << step << ": " << r->describe() << '\n';
      return false;
    }
    return true;
  };

  if (check(0)) {
    for (int s = 1; s <= config.steps; ++s) {
      const StepDiagnostics d = sim->advance_time_step();
      result.steps.push_back(d);
      result.total_newton_iters += d.newton_iters;
      result.total_pcg_iters += d.pcg_iters;
      result.min_distance_rel = std::min(result.min_distance_rel, d.min_distance_rel);
      result.all_converged = result.all_converged && d.converged;
      if (options.write_outputs) {
        write_csv_row(csv, d);
        if (config.obj_every > 0 && s % config.obj_every == 0) write_frame(config, s, *sim);
      }
      if (options.log) {
        *options.log << "step " << s << ": " << d.newton_iters << " newton, " << d.pcg_iters << " pcg, "
                     << step_flag(d) << '\n';
      }
      if (!check(s)) break;
    }
  }
  result.min_candidate_distance_rel = sim->min_candidate_distance() / result.l;
  result.final_positions = sim->positions();
  result.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (options.write_outputs) {
    nlohmann::json j;
    j["scene"] = config.name;
    j["mode"] = mode_name(config.mode);
    j["steps"] = static_cast<int>(result.steps.size());
    j["total_newton_iters"] = result.total_newton_iters;
    j["total_pcg_iters"] = result.total_pcg_iters;
    j["all_converged"] = result.all_converged;
    j["min_distance_rel"] = result.steps.empty() ? nlohmann::json(nullptr) : nlohmann::json(result.min_distance_rel);
    j["intersection_free"] = result.intersection_free;
    j["max_penetration_is_zero"] = result.intersection_free;
    if (result.breach) {
      j["breach"] = {{"step", result.breach_step}, {"stencil", result.breach->describe()}};
    }
    j["bbox_diagonal"] = result.l;
    j["wall_ms"] = result.wall_ms;
    std::ofstream out(config.out_dir / "summary.json");
    out << j.dump(2) << '\n';
  }
  return result;
}

}  // namespace gipc::app
