#pragma once

#include "gipc/gap.hpp"

namespace gipc {

enum class BarrierForm {
  QuadraticLog,  // kappa d_hat^4 (1 - g)^2 ln^2 g
  Log,           // -kappa d_hat^4 (1 - g)^2 ln g
};

struct BarrierParams {
  double d_hat = 1;
  double kappa = 1;
  double d_thr_ratio = 0.1;
  bool filter = true;
  BarrierForm form = BarrierForm::QuadraticLog;

  double d_thr() const { return d_thr_ratio * d_hat; }
  double eps_g() const { return d_thr_ratio * d_thr_ratio; }
};

double barrier_value(double g, const BarrierParams& params);
double barrier_dg(double g, const BarrierParams& params);
double barrier_d2g(double g, const BarrierParams& params);

double lambda1(double g, const BarrierParams& params);
double lambda23(double g, const BarrierParams& params);
// lambda1 frozen at its d_thr value for g < eps_g.
double filtered_lambda1(double g, const BarrierParams& params);
// The coefficient used by the Hessian: filtered_lambda1 when params.filter, else lambda1.
double hessian_lambda1(double g, const BarrierParams& params);

struct LocalEigenSystem {
  std::vector<std::pair<double, VecX>> pairs;  // (lambda, unit vec(Q)) in column-major m*m space
};

// Nonzero eigenpairs of d2b/dJ2 at a diagonal J of dimension m.
LocalEigenSystem barrier_eigensystem(int m, double g, const BarrierParams& params);

struct LocalQuadratic {
  std::array<int, 4> vert_ids{-1, -1, -1, -1};
  int num_verts = 0;
  LocalVec grad;
  LocalMat hess;
};

LocalQuadratic build_local_quadratic(const ContactStencil& stencil, const DiagonalJacobian& J,
                                     const BarrierParams& params);

// Distance-form barrier -kappa d_hat^2 (d_hat - d)^2 ln(d / d_hat) and its d-derivatives.
double ipc_barrier(double d, const BarrierParams& params);
double ipc_barrier_dd(double d, const BarrierParams& params);
double ipc_barrier_d2d(double d, const BarrierParams& params);

// Exact gradient and numerically projected full Hessian of the distance-form barrier
// (times the mollifier for parallel variants). fd_h is the central-difference step for second derivatives.
LocalQuadratic reference_ipc_local_quadratic(const ContactStencil& stencil, const Positions& x,
                                             const BarrierParams& params, double fd_h);
double reference_ipc_energy(const ContactStencil& stencil, const Positions& x, const BarrierParams& params);

struct GnComparison {
  double ours;
  double ipc_gn;
};
GnComparison gn_scalar_comparison(double d, const BarrierParams& params);

struct NormDiagnostics {
  double grad_norm;
  double hess_norm;
  double ratio;
};
NormDiagnostics norm_diagnostics(double g, const BarrierParams& params);

// Clamps negative eigenvalues of a symmetric matrix to zero.
LocalMat project_psd(const LocalMat& A);

}  // namespace gipc
