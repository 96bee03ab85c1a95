#include "gipc_app/curves.hpp"

#include "gipc/mollifier.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace gipc::app {

namespace {

BarrierParams params(const CurveOptions& o, BarrierForm form, bool filter) {
  BarrierParams p;
  p.d_hat = o.d_hat;
  p.kappa = o.kappa;
  p.d_thr_ratio = o.d_thr_ratio;
  p.form = form;
  p.filter = filter;
  return p;
}

double log_sample(double lo, double hi, int i, int n) {
  return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (n - 1));
}

void row(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  char buf[32];
  for (double v : values) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    out << (first ? "" : ",") << buf;
    first = false;
  }
  out << '\n';
}

void barrier_curve(const CurveOptions& o, std::ostream& out) {
  const BarrierParams quad = params(o, BarrierForm::QuadraticLog, false);
  const BarrierParams log = params(o, BarrierForm::Log, false);
  out << "d_over_d_hat,g,quadratic_log,log,reference_ipc\n";
  for (int i = 1; i <= o.samples; ++i) {
    const double r = 1.2 * i / o.samples;
    const double g = r * r;
    const double d = r * o.d_hat;
    const bool active = g < 1;
    row(out, {r, g, active ? barrier_value(g, quad) : 0.0, active ? barrier_value(g, log) : 0.0,
              active ? ipc_barrier(d, quad) : 0.0});
  }
}

void norms_curve(const CurveOptions& o, std::ostream& out) {
  const BarrierParams raw = params(o, BarrierForm::QuadraticLog, false);
  const BarrierParams filtered = params(o, BarrierForm::QuadraticLog, true);
  out << "g,grad_norm,hess_norm,ratio,hess_norm_filtered,ratio_filtered\n";
  for (int i = 0; i < o.samples; ++i) {
    const double g = log_sample(1e-8, 1 - 1e-3, i, o.samples);
    const NormDiagnostics a = norm_diagnostics(g, raw);
    const NormDiagnostics b = norm_diagnostics(g, filtered);
    row(out, {g, a.grad_norm, a.hess_norm, a.ratio, b.hess_norm, b.ratio});
  }
}

void gn_curve(const CurveOptions& o, std::ostream& out) {
  const BarrierParams p = params(o, BarrierForm::QuadraticLog, false);
  out << "d,ours,ipc_gn\n";
  for (int i = 0; i < o.samples; ++i) {
    const double d = o.d_hat * (0.01 + 0.98 * i / (o.samples - 1));
    const GnComparison c = gn_scalar_comparison(d, p);
    row(out, {d, c.ours, c.ipc_gn});
  }
}

void mollifier_curve(const CurveOptions& o, std::ostream& out) {
  const BarrierParams p = params(o, BarrierForm::QuadraticLog, false);
  const int n = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(o.samples))));
  out << "gamma,g,lambda_gamma1,lambda_gamma23,lambda_g1,lambda_g23,lambda7p,lambda8p\n";
  for (int i = 0; i < n; ++i) {
    const double gamma = (i + 0.5) / n;
    for (int k = 0; k < n; ++k) {
      const double g = log_sample(1e-6, 1 - 1e-3, k, n);
      const MollifiedEigenSystem s = mollified_eigensystem(g, gamma * o.eps_x, p, o.eps_x);
      row(out, {gamma, g, s.lambda_gamma[0], s.lambda_gamma[1], s.lambda_g[0], s.lambda_g[1], s.lambda7p, s.lambda8p});
    }
  }
}

}  // namespace

void write_curve(const std::string& which, const CurveOptions& options, std::ostream& out) {
  if (options.samples < 2) throw Error("curves need at least 2 samples");
  if (!(options.d_hat > 0) || !(options.kappa > 0) || !(options.eps_x > 0)) {
    throw Error("curves need positive d_hat, kappa and eps_x");
  }
  if (which == "barrier") return barrier_curve(options, out);
  if (which == "norms") return norms_curve(options, out);
  if (which == "gn-compare") return gn_curve(options, out);
  if (which == "mollifier-eigs") return mollifier_curve(options, out);
  throw Error("unknown curve '" + which + "' (expected barrier, norms, gn-compare or mollifier-eigs)");
}

}  // namespace gipc::app
