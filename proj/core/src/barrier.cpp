#include "gipc/barrier.hpp"

#include "gipc/mollifier.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace gipc {

namespace {

void check_gap(double g) {
  if (!(g > 0 && g < 1)) throw Error("barrier evaluated outside 0 < g < 1 (g = " + std::to_string(g) + ")");
}

double dhat4(const BarrierParams& p) { return p.d_hat * p.d_hat * p.d_hat * p.d_hat; }

LocalQuadratic empty_quadratic(const ContactStencil& stencil) {
  LocalQuadratic q;
  q.num_verts = stencil.num_dofs();
  for (int i = 0; i < q.num_verts; ++i) q.vert_ids[i] = stencil.dof(i);
  q.grad = LocalVec::Zero(3 * q.num_verts);
  q.hess = LocalMat::Zero(3 * q.num_verts, 3 * q.num_verts);
  return q;
}

// Positions of the stencil dofs, perturbed by delta.
Positions gather(const ContactStencil& stencil, const Positions& x, const LocalVec& delta, ContactStencil& local) {
  const int n = stencil.num_dofs();
  Positions y(3, n);
  for (int i = 0; i < n; ++i) y.col(i) = x.col(stencil.dof(i)) + delta.segment<3>(3 * i);
  local = stencil;
  for (int k = 0; k < stencil.num_verts(); ++k) {
    for (int i = 0; i < n; ++i) {
      if (stencil.verts[k] == stencil.dof(i)) local.verts[k] = i;
    }
  }
  if (is_parallel(stencil.kind)) local.edge_pair = {0, 1, 2, 3};
  return y;
}

// Distance-form barrier gradient over the stencil dofs; includes the mollifier for parallel variants.
LocalVec reference_gradient(const ContactStencil& stencil, const Positions& x, const BarrierParams& params) {
  const DistanceResult dist = stencil_distance(stencil, x);
  const double d = std::sqrt(dist.d2);
  const double bd = ipc_barrier_dd(d, params);
  const int n = stencil.num_dofs();
  LocalVec grad = LocalVec::Zero(3 * n);
  double e = 1;
  if (is_parallel(stencil.kind)) {
    const auto& ep = stencil.edge_pair;
    std::array<Vec3, 4> grad_c;
    const double c = edge_parallel_measure(x.col(ep[0]), x.col(ep[1]), x.col(ep[2]), x.col(ep[3]), &grad_c);
    const MollifierState m = mollifier_eval(c, stencil.eps_x);
    e = m.e;
    const double b = ipc_barrier(d, params);
    for (int k = 0; k < 4; ++k) grad.segment<3>(3 * k) += m.de * b * grad_c[k];
  }
  for (int k = 0; k < stencil.num_verts(); ++k) {
    for (int i = 0; i < n; ++i) {
      if (stencil.dof(i) == stencil.verts[k]) grad.segment<3>(3 * i) += e * bd * dist.grad_d2[k] / (2 * d);
    }
  }
  return grad;
}

}  // namespace

double barrier_value(double g, const BarrierParams& p) {
  check_gap(g);
  const double lg = std::log(g);
  const double s = (1 - g) * (1 - g);
  if (p.form == BarrierForm::Log) return -p.kappa * dhat4(p) * s * lg;
  return p.kappa * dhat4(p) * s * lg * lg;
}

double barrier_dg(double g, const BarrierParams& p) {
  check_gap(g);
  const double lg = std::log(g);
  if (p.form == BarrierForm::Log) return p.kappa * dhat4(p) * (2 * (1 - g) * lg - (1 - g) * (1 - g) / g);
  return p.kappa * dhat4(p) * (-2 * (1 - g) * lg * lg + 2 * (1 - g) * (1 - g) * lg / g);
}

double barrier_d2g(double g, const BarrierParams& p) {
  check_gap(g);
  const double lg = std::log(g);
  if (p.form == BarrierForm::Log) {
    return p.kappa * dhat4(p) * (-2 * lg + 2 * (1 - g) / g + (1 - g * g) / (g * g));
  }
  return p.kappa * dhat4(p) *
         (2 * lg * lg - 8 * (1 - g) * lg / g + 2 * (1 - g) * (1 - g) * (1 - lg) / (g * g));
}

double lambda1(double g, const BarrierParams& p) { return 4 * g * barrier_d2g(g, p) + 2 * barrier_dg(g, p); }

double lambda23(double g, const BarrierParams& p) { return 2 * barrier_dg(g, p); }

double filtered_lambda1(double g, const BarrierParams& p) { return lambda1(std::max(g, p.eps_g()), p); }

double hessian_lambda1(double g, const BarrierParams& p) {
  return std::max(0.0, p.filter ? filtered_lambda1(g, p) : lambda1(g, p));
}

LocalEigenSystem barrier_eigensystem(int m, double g, const BarrierParams& p) {
  LocalEigenSystem sys;
  auto slot = [m](int r, int c) {
    VecX q = VecX::Zero(m * m);
    q[r + m * c] = 1;
    return q;
  };
  sys.pairs.emplace_back(lambda1(g, p), slot(m - 1, m - 1));
  for (int r = 0; r < m - 1; ++r) sys.pairs.emplace_back(lambda23(g, p), slot(r, m - 1));
  return sys;
}

LocalQuadratic build_local_quadratic(const ContactStencil& stencil, const DiagonalJacobian& J,
                                     const BarrierParams& params) {
  LocalQuadratic q = empty_quadratic(stencil);
  const double g = J.f * J.f;
  const LocalVec u = J.stacked_grad_f();
  q.grad = barrier_dg(g, params) * 2 * J.f * u;
  q.hess = hessian_lambda1(g, params) * u * u.transpose();
  return q;
}

double ipc_barrier(double d, const BarrierParams& p) {
  const double dh = p.d_hat;
  if (!(d > 0)) throw Error("barrier evaluated at nonpositive distance");
  if (d >= dh) return 0;
  return -p.kappa * dh * dh * (dh - d) * (dh - d) * std::log(d / dh);
}

double ipc_barrier_dd(double d, const BarrierParams& p) {
  const double dh = p.d_hat;
  if (d >= dh) return 0;
  return p.kappa * dh * dh * (2 * (dh - d) * std::log(d / dh) - (dh - d) * (dh - d) / d);
}

double ipc_barrier_d2d(double d, const BarrierParams& p) {
  const double dh = p.d_hat;
  if (d >= dh) return 0;
  return p.kappa * dh * dh * (-2 * std::log(d / dh) + 2 * (dh - d) / d + (dh - d) * (dh + d) / (d * d));
}

double reference_ipc_energy(const ContactStencil& stencil, const Positions& x, const BarrierParams& params) {
  const double d = std::sqrt(stencil_distance(stencil, x).d2);
  double b = ipc_barrier(d, params);
  if (is_parallel(stencil.kind)) {
    const auto& e = stencil.edge_pair;
    b *= mollifier_eval(edge_parallel_measure(x.col(e[0]), x.col(e[1]), x.col(e[2]), x.col(e[3])), stencil.eps_x).e;
  }
  return b;
}

LocalQuadratic reference_ipc_local_quadratic(const ContactStencil& stencil, const Positions& x,
                                             const BarrierParams& params, double fd_h) {
  LocalQuadratic q = empty_quadratic(stencil);
  const int n = 3 * q.num_verts;
  ContactStencil local;
  LocalVec zero = LocalVec::Zero(n);
  Positions y = gather(stencil, x, zero, local);
  q.grad = reference_gradient(local, y, params);

  LocalMat H(n, n);
  if (!is_parallel(stencil.kind)) {
    // b'' grad_d grad_d^T + b' hess_d, with hess_d from central differences of grad_d.
    auto grad_d = [&](const Positions& z, double* d_out) {
      const DistanceResult r = stencil_distance(local, z);
      const double d = std::sqrt(r.d2);
      LocalVec gd(n);
      for (int i = 0; i < q.num_verts; ++i) gd.segment<3>(3 * i) = r.grad_d2[i] / (2 * d);
      if (d_out) *d_out = d;
      return gd;
    };
    double d;
    const LocalVec gd = grad_d(y, &d);
    LocalMat hd(n, n);
    for (int k = 0; k < n; ++k) {
      Positions yp = y, ym = y;
      yp(k % 3, k / 3) += fd_h;
      ym(k % 3, k / 3) -= fd_h;
      hd.col(k) = (grad_d(yp, nullptr) - grad_d(ym, nullptr)) / (2 * fd_h);
    }
    H = ipc_barrier_d2d(d, params) * gd * gd.transpose() + ipc_barrier_dd(d, params) * hd;
  } else {
    for (int k = 0; k < n; ++k) {
      Positions yp = y, ym = y;
      yp(k % 3, k / 3) += fd_h;
      ym(k % 3, k / 3) -= fd_h;
      H.col(k) = (reference_gradient(local, yp, params) - reference_gradient(local, ym, params)) / (2 * fd_h);
    }
  }
  H = 0.5 * (H + H.transpose()).eval();
  q.hess = project_psd(H);
  return q;
}

GnComparison gn_scalar_comparison(double d, const BarrierParams& params) {
  const double bd = ipc_barrier_dd(d, params);
  const double bdd = ipc_barrier_d2d(d, params);
  return {bdd + bd / (2 * d), bdd};
}

NormDiagnostics norm_diagnostics(double g, const BarrierParams& params) {
  NormDiagnostics out;
  out.grad_norm = -2 * std::sqrt(g) * barrier_dg(g, params);
  out.hess_norm = params.filter ? filtered_lambda1(g, params) : lambda1(g, params);
  out.ratio = out.grad_norm / out.hess_norm;
  return out;
}

LocalMat project_psd(const LocalMat& A) {
  Eigen::SelfAdjointEigenSolver<LocalMat> eig(A);
  LocalVec lam = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace gipc
