#include "gipc_app/runner.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace gipc;

namespace {

std::filesystem::path scene_path(const char* name) {
  return std::filesystem::path(GIPC_SOURCE_DIR) / "scenes" / (std::string(name) + ".json");
}

// Contact-rich system from the middle of the aligned-cube scene.
struct CubeSystem {
  std::unique_ptr<Simulation> sim;
  BlockSystem sys;
  VecX v;

  CubeSystem() {
    app::SceneConfig c = app::load_scene_config(scene_path("cube-aligned"));
    sim = app::make_simulation(app::build_setup(c));
    for (int s = 0; s < 10; ++s) sim->advance_time_step();
    sim->begin_step();
    sys = sim->assemble_system(sim->positions(), sim->detect(sim->positions()));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1, 1);
    v = VecX(sys.dofs());
    for (auto& e : v) e = u(rng);
  }
};

const CubeSystem& cube_system() {
  static const CubeSystem c;
  return c;
}

void MatvecMatrixFree(benchmark::State& state) {
  const auto& c = cube_system();
  for (auto _ : state) benchmark::DoNotOptimize(matvec_matrix_free(c.sys, c.v));
}
BENCHMARK(MatvecMatrixFree);

void MatvecAssembled(benchmark::State& state) {
  const auto& c = cube_system();
  const MatX A = assemble_dense(c.sys);
  for (auto _ : state) benchmark::DoNotOptimize(VecX(A * c.v));
}
BENCHMARK(MatvecAssembled);

void PcgSolve(benchmark::State& state) {
  const auto& c = cube_system();
  for (auto _ : state) benchmark::DoNotOptimize(pcg_solve(c.sys, c.v, 1e-4, 10000));
}
BENCHMARK(PcgSolve);

void DenseSolve(benchmark::State& state) {
  const auto& c = cube_system();
  for (auto _ : state) benchmark::DoNotOptimize(dense_solve(c.sys, c.v));
}
BENCHMARK(DenseSolve);

void TwoBoxSteps(benchmark::State& state) {
  app::SceneConfig c = app::load_scene_config(scene_path("two-box"));
  c.mode = state.range(0) ? SolverMode::ReferenceIpc : SolverMode::Gipc;
  c.steps = 10;
  app::RunOptions opts;
  opts.write_outputs = false;
  int iters = 0;
  for (auto _ : state) iters = app::run_scene(c, opts).total_newton_iters;
  state.counters["newton_iters"] = iters;
}
BENCHMARK(TwoBoxSteps)->ArgName("reference_ipc")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
