#pragma once

#include "gipc/barrier.hpp"

namespace gipc {

struct MollifierState {
  double c = 0;
  double eps_x = 0;
  double e = 1;
  double de = 0;   // de/dgamma
  double d2e = 0;  // d2e/dgamma2
};

MollifierState mollifier_eval(double c, double eps_x);

double mollified_barrier_value(double g, double c, const BarrierParams& params, double eps_x);

// Gradient over stencil.dof(i), stacked.
LocalVec mollified_gradient(const ContactStencil& stencil, const DiagonalJacobian& J, const BarrierParams& params);

// Eigen-analysis of the 9x9 J-space Hessian at J = diag(1, sqrt(c), f), column-major vec.
struct MollifiedEigenSystem {
  Vec3 lambda_gamma = Vec3::Zero();
  Vec3 lambda_g = Vec3::Zero();
  double t = 0;
  double p = 0;
  double lambda7p = 0;
  double lambda8p = 0;
  double k1 = 0;
  double k2 = 0;
  // Unit eigenvectors of [[lambda_gamma1, 4t], [4t, lambda_g1]] in (gamma, g) coordinates.
  Vec2 v7 = Vec2::Zero();
  Vec2 v8 = Vec2::Zero();
  Vec9 q_gamma2 = Vec9::Zero();
  Vec9 q_gamma3 = Vec9::Zero();
  Vec9 q_g2 = Vec9::Zero();
  Vec9 q_g3 = Vec9::Zero();
  Vec9 q7p = Vec9::Zero();
  Vec9 q8p = Vec9::Zero();
};

MollifiedEigenSystem mollified_eigensystem(double g, double c, const BarrierParams& params, double eps_x);

// Projected J-space Hessian: lambda_gamma2, lambda_gamma3 and lambda_8' pairs clamped at zero, plus the
// clamped lambda_7' pair when include_lambda7 (it is only positive for g below about 2e-3 and c < eps_x / 4).
Mat9 projected_j_hessian(const MollifiedEigenSystem& sys, bool include_lambda7 = true);

LocalQuadratic build_mollified_local_quadratic(const ContactStencil& stencil, const DiagonalJacobian& J,
                                               const BarrierParams& params);

// Gap actually used by Hessians: max(g, eps_g) when the filter is on.
double hessian_gap(double g, const BarrierParams& params);

}  // namespace gipc
