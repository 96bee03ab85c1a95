#pragma once

#include "gipc_app/scene_config.hpp"

#include <iosfwd>
#include <optional>

namespace gipc::app {

// A surface primitive pair found touching or crossing in a post-hoc check.
struct IntersectionReport {
  std::string kind;  // "PT", "EE" or "edge-triangle"
  std::array<int, 5> verts{-1, -1, -1, -1, -1};
  double distance = 0;

  std::string describe() const;
};

// Exhaustive check over non-adjacent surface pairs that are not entirely fixed: every point-triangle and
// edge-edge distance must be positive and no edge may cross a triangle.
std::optional<IntersectionReport> find_intersection(const SimMesh& mesh, const Positions& x);

struct RunOptions {
  bool write_outputs = true;
  bool check_frames = true;
  bool check_candidates = false;  // exhaustive distance check of every line-search candidate
  std::ostream* log = nullptr;
};

struct RunResult {
  std::vector<StepDiagnostics> steps;
  int total_newton_iters = 0;
  int total_pcg_iters = 0;
  double min_distance_rel = std::numeric_limits<double>::infinity();
  double min_candidate_distance_rel = std::numeric_limits<double>::infinity();
  bool intersection_free = true;
  bool all_converged = true;
  std::optional<IntersectionReport> breach;
  int breach_step = -1;
  double wall_ms = 0;
  double l = 0;
  Positions final_positions;
};

// "ok", "newton_cap" or "line_search_floor".
std::string step_flag(const StepDiagnostics& d);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const StepDiagnostics& d);

// Advances the scene, writing frames, the diagnostics CSV and summary.json into config.out_dir.
// Stops at the first frame that fails the intersection check.
RunResult run_scene(const SceneConfig& config, const RunOptions& options = {});

}  // namespace gipc::app
