#include "gipc_app/curves.hpp"
#include "gipc_app/projection_bench.hpp"
#include "gipc_app/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace gipc;

int main(int argc, char** argv) {
  CLI::App app{"Barrier-based contact simulation runner and diagnostics"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Simulate a scene, writing OBJ frames, a diagnostics CSV and summary.json");
  std::string scene_path, mode, out_dir, form;
  std::optional<double> dt, eps_d, kappa;
  std::optional<int> steps;
  bool no_filter = false, no_mollify = false, check_candidates = false, quiet = false;
  run->add_option("scene", scene_path, "Scene JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--dt", dt, "Time step (s)");
  run->add_option("--steps", steps, "Number of steps");
  run->add_option("--mode", mode, "gipc or reference-ipc");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--eps-d", eps_d, "Newton tolerance on |d|_inf / (l dt)");
  run->add_option("--kappa", kappa, "Barrier stiffness");
  run->add_option("--barrier-form", form, "quadratic-log or log");
  run->add_flag("--no-filter", no_filter, "Disable the lambda_1 filter");
  run->add_flag("--no-mollify", no_mollify, "Disable parallel-edge mollification");
  run->add_flag("--check-candidates", check_candidates, "Exhaustively check every line-search candidate");
  run->add_flag("--quiet", quiet, "No per-step log");

  auto* curves = app.add_subcommand("curves", "Sample barrier diagnostics as CSV");
  std::string which, curve_out;
  app::CurveOptions curve_opts;
  curves->add_option("which", which, "barrier, norms, gn-compare or mollifier-eigs")
      ->required()
      ->check(CLI::IsMember({"barrier", "norms", "gn-compare", "mollifier-eigs"}));
  curves->add_option("--samples", curve_opts.samples, "Samples (grid points for mollifier-eigs)");
  curves->add_option("--d-hat", curve_opts.d_hat, "Barrier support");
  curves->add_option("--kappa", curve_opts.kappa, "Barrier stiffness");
  curves->add_option("--d-thr-ratio", curve_opts.d_thr_ratio, "Filter threshold over d_hat");
  curves->add_option("--eps-x", curve_opts.eps_x, "Mollifier threshold");
  curves->add_option("--out", curve_out, "Output CSV (stdout when omitted)");

  auto* bench = app.add_subcommand("bench-projection", "Time analytic vs numeric barrier Hessian projection");
  std::vector<long> counts{1000, 10000, 100000};
  std::vector<int> dims{6, 9, 12};
  std::uint64_t seed = 1;
  std::string bench_out;
  bench->add_option("--counts", counts, "Batch sizes")->delimiter(',');
  bench->add_option("--dims", dims, "Hessian dimensions (6, 9, 12)")->delimiter(',');
  bench->add_option("--seed", seed, "Random seed");
  bench->add_option("--out", bench_out, "Output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      app::SceneConfig config = app::load_scene_config(scene_path);
      if (dt) config.dt = *dt;
      if (steps) config.steps = *steps;
      if (!mode.empty()) config.mode = app::parse_mode(mode);
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (eps_d) config.eps_d = *eps_d;
      if (kappa) config.kappa = *kappa;
      if (!form.empty()) config.barrier_form = app::parse_barrier_form(form);
      if (no_filter) config.filter = false;
      if (no_mollify) config.mollify = false;
      if (config.steps < 0 || !(config.dt > 0)) throw Error("--steps must be >= 0 and --dt positive");
      app::RunOptions opts;
      opts.check_candidates = check_candidates;
      opts.log = quiet ? nullptr : &std::cerr;
      const app::RunResult r = app::run_scene(config, opts);
      std::cout << config.name << ": " << r.steps.size() << " steps, " << r.total_newton_iters << " newton, "
                << r.total_pcg_iters << " pcg, " << (r.intersection_free ? "intersection-free" : "INTERSECTION")
                << ", output in " << config.out_dir.string() << '\n';
      if (r.breach) {
        std::cerr << "error: intersection at step " << r.breach_step << ": " << r.breach->describe() << '\n';
        return 2;
      }
      return 0;
    }
    if (*curves) {
      if (curve_out.empty()) {
        app::write_curve(which, curve_opts, std::cout);
      } else {
        std::ofstream out(curve_out);
        if (!out) throw Error("cannot write " + curve_out);
        app::write_curve(which, curve_opts, out);
      }
      return 0;
    }
    if (*bench) {
      std::ofstream file;
      if (!bench_out.empty()) {
        file.open(bench_out);
        if (!file) throw Error("cannot write " + bench_out);
      }
      std::ostream& out = bench_out.empty() ? std::cout : file;
      out << "dim,count,analytic_ms,numeric_ms,speedup,max_rel_frobenius_diff\n";
      for (int dim : dims) {
        for (long count : counts) {
          const app::ProjectionTiming t = app::bench_projection(dim, count, seed);
          char line[160];
          std::snprintf(line, sizeof line, "%d,%ld,%.3f,%.3f,%.3f,%.3e\n", t.dim, t.count, t.analytic_ms, t.numeric_ms,
                        t.speedup, t.max_rel_frobenius_diff);
          out << line << std::flush;
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
