#include "gipc_app/projection_bench.hpp"

#include <benchmark/benchmark.h>

using namespace gipc;

namespace {

template <LocalMat (*Project)(const ContactStencil&, const Positions&, const BarrierParams&)>
void projection(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const app::ProjectionBatch batch = app::make_projection_batch(dim, state.range(1), 1);
  for (auto _ : state) {
    for (const auto& s : batch.stencils) benchmark::DoNotOptimize(Project(s, batch.x, batch.params));
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
}

void projection_args(benchmark::internal::Benchmark* b) {
  for (int dim : {6, 9, 12}) {
    for (long count : {1000, 100000}) b->Args({dim, count});
  }
  b->ArgNames({"dim", "count"})->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(projection<app::analytic_projected_hessian>)->Name("AnalyticProjection")->Apply(projection_args);
BENCHMARK(projection<app::numeric_projected_hessian>)->Name("NumericProjection")->Apply(projection_args);
BENCHMARK_MAIN();
