#include "gipc/mollifier.hpp"

#include <cmath>

namespace gipc {

namespace {

// Column-major slot index of (row, col) in the 3x3 J-space.
constexpr int slot(int r, int c) { return r + 3 * c; }

Vec9 unit_slot(int r, int c) {
  Vec9 q = Vec9::Zero();
  q[slot(r, c)] = 1;
  return q;
}

}  // namespace

MollifierState mollifier_eval(double c, double eps_x) {
  MollifierState s;
  s.c = c;
  s.eps_x = eps_x;
  if (c < eps_x) {
    s.e = -c * c / (eps_x * eps_x) + 2 * c / eps_x;
    s.de = 2 / eps_x - 2 * c / (eps_x * eps_x);
    s.d2e = -2 / (eps_x * eps_x);
  }
  return s;
}

double mollified_barrier_value(double g, double c, const BarrierParams& params, double eps_x) {
  return mollifier_eval(c, eps_x).e * barrier_value(g, params);
}

double hessian_gap(double g, const BarrierParams& params) {
  return params.filter ? std::max(g, params.eps_g()) : g;
}

LocalVec mollified_gradient(const ContactStencil& stencil, const DiagonalJacobian& J, const BarrierParams& params) {
  const double g = J.f * J.f;
  const double c = J.sqrt_c * J.sqrt_c;
  const MollifierState m = mollifier_eval(c, stencil.eps_x);
  const double b_gamma = m.de * barrier_value(g, params);
  const double b_g = m.e * barrier_dg(g, params);
  return b_gamma * 2 * J.sqrt_c * J.stacked_grad_sqrt_c() + b_g * 2 * J.f * J.stacked_grad_f();
}

MollifiedEigenSystem mollified_eigensystem(double g, double c, const BarrierParams& params, double eps_x) {
  MollifiedEigenSystem s;
  const MollifierState m = mollifier_eval(c, eps_x);
  const double b = barrier_value(g, params);
  const double bg = barrier_dg(g, params);
  const double bgg = barrier_d2g(g, params);

  const double mb_gamma = m.de * b;
  const double mb_gammagamma = m.d2e * b;
  const double mb_g = m.e * bg;
  const double mb_gg = m.e * bgg;
  const double mb_gammag = m.de * bg;

  const double lg1 = 2 * (mb_gamma + 2 * c * mb_gammagamma);
  const double lgam = 2 * mb_gamma;
  const double lgg1 = 2 * (mb_g + 2 * g * mb_gg);
  const double lg = 2 * mb_g;
  s.lambda_gamma = Vec3(lg1, lgam, lgam);
  s.lambda_g = Vec3(lgg1, lg, lg);
  s.t = mb_gammag * std::sqrt(c) * std::sqrt(g);

  const double half_sum = 0.5 * (lg1 + lgg1);
  const double half_diff = 0.5 * (lg1 - lgg1);
  s.p = 0.5 * std::sqrt((lg1 - lgg1) * (lg1 - lgg1) + 64 * s.t * s.t);
  s.lambda7p = half_sum - s.p;
  s.lambda8p = half_sum + s.p;

  if (std::abs(8 * s.t) < 1e-12 * (std::abs(lg1) + std::abs(lgg1)) || s.t == 0) {
    s.k1 = s.k2 = 0;
    if (lg1 >= lgg1) {
      s.v8 = Vec2(1, 0);
      s.v7 = Vec2(0, 1);
    } else {
      s.v8 = Vec2(0, 1);
      s.v7 = Vec2(1, 0);
    }
  } else {
    // k = (lg1 - lgg1 -+ 2p) / (8t); the rationalized form avoids cancellation on the small root.
    if (half_diff >= 0) {
      s.k2 = (lg1 - lgg1 + 2 * s.p) / (8 * s.t);
      s.k1 = -4 * s.t / (half_diff + s.p);
    } else {
      s.k2 = 4 * s.t / (s.p - half_diff);
      s.k1 = (lg1 - lgg1 - 2 * s.p) / (8 * s.t);
    }
    // Eigenvector entries: k at slot (2,2) and 1 at slot (3,3).
    s.v8 = Vec2(s.k2, 1).normalized();
    s.v7 = Vec2(s.k1, 1).normalized();
  }

  s.q_gamma2 = unit_slot(2, 1);
  s.q_gamma3 = unit_slot(0, 1);
  s.q_g2 = unit_slot(1, 2);
  s.q_g3 = unit_slot(0, 2);
  s.q7p.setZero();
  s.q7p[slot(1, 1)] = s.v7[0];
  s.q7p[slot(2, 2)] = s.v7[1];
  s.q8p.setZero();
  s.q8p[slot(1, 1)] = s.v8[0];
  s.q8p[slot(2, 2)] = s.v8[1];
  return s;
}

Mat9 projected_j_hessian(const MollifiedEigenSystem& s, bool include_lambda7) {
  Mat9 H = std::max(s.lambda_gamma[1], 0.0) * s.q_gamma2 * s.q_gamma2.transpose() +
           std::max(s.lambda_gamma[2], 0.0) * s.q_gamma3 * s.q_gamma3.transpose() +
           std::max(s.lambda8p, 0.0) * s.q8p * s.q8p.transpose();
  if (include_lambda7) H += std::max(s.lambda7p, 0.0) * s.q7p * s.q7p.transpose();
  return H;
}

LocalQuadratic build_mollified_local_quadratic(const ContactStencil& stencil, const DiagonalJacobian& J,
                                               const BarrierParams& params) {
  LocalQuadratic q;
  q.num_verts = stencil.num_dofs();
  for (int i = 0; i < q.num_verts; ++i) q.vert_ids[i] = stencil.dof(i);
  q.grad = mollified_gradient(stencil, J, params);

  const double g = hessian_gap(J.f * J.f, params);
  const double c = J.sqrt_c * J.sqrt_c;
  const MollifiedEigenSystem s = mollified_eigensystem(g, c, params, stencil.eps_x);
  // Only slots (2,2) and (3,3) carry position derivatives; the twist pairs map to zero.
  const LocalVec gc = J.stacked_grad_sqrt_c();
  const LocalVec gf = J.stacked_grad_f();
  const LocalVec w8 = s.v8[0] * gc + s.v8[1] * gf;
  const LocalVec w7 = s.v7[0] * gc + s.v7[1] * gf;
  q.hess = std::max(s.lambda8p, 0.0) * w8 * w8.transpose() + std::max(s.lambda7p, 0.0) * w7 * w7.transpose();
  return q;
}

}  // namespace gipc
