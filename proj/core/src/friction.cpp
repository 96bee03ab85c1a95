#include "gipc/friction.hpp"

#include "gipc/mollifier.hpp"

#include <cmath>

namespace gipc {

LocalMat FrictionDatum::basis_T() const {
  const int n = num_verts();
  LocalMat T(3 * n, 2);
  for (int i = 0; i < n; ++i) T.block<3, 2>(3 * i, 0) = weights[i] * tangent;
  return T;
}

FrictionScalars f0_f1(double u, double eps_v, double dt) {
  const double h = eps_v * dt;
  if (u >= h) return {u, 1, 0};
  return {-u * u * u / (3 * h * h) + u * u / h + h / 3, -u * u / (h * h) + 2 * u / h, 2 / h - 2 * u / (h * h)};
}

Vec2 tangential_displacement(const FrictionDatum& datum, const Positions& x, const Positions& x_prev) {
  Vec3 r = Vec3::Zero();
  for (int i = 0; i < datum.num_verts(); ++i) {
    const int v = datum.stencil.verts[i];
    r += datum.weights[i] * (x.col(v) - x_prev.col(v));
  }
  return datum.tangent.transpose() * r;
}

double friction_potential(const FrictionDatum& datum, const Vec2& u) {
  return datum.mu * datum.lambda_n * f0_f1(u.norm(), datum.eps_v, datum.dt).f0;
}

LocalVec friction_force(const FrictionDatum& datum, const Vec2& u) {
  const double un = u.norm();
  const LocalMat T = datum.basis_T();
  if (un == 0) return LocalVec::Zero(T.rows());
  const double f1 = f0_f1(un, datum.eps_v, datum.dt).f1;
  return -datum.mu * datum.lambda_n * f1 / un * (T * u);
}

Mat2 friction_core(const FrictionDatum& datum, const Vec2& u) {
  const double un = u.norm();
  const auto s = f0_f1(un, datum.eps_v, datum.dt);
  if (un == 0) return s.f1_prime * Mat2::Identity();
  return (s.f1_prime * un - s.f1) / (un * un * un) * u * u.transpose() + s.f1 / un * Mat2::Identity();
}

Mat2 project_psd_2x2(const Mat2& A) {
  const double a = A(0, 0), b = 0.5 * (A(0, 1) + A(1, 0)), d = A(1, 1);
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  const double l1 = mean + rad, l2 = mean - rad;
  if (l2 >= 0) return A;
  if (l1 <= 0) return Mat2::Zero();
  // Eigenvector of the larger root.
  Vec2 v;
  if (a >= d) {
    v = Vec2(l1 - d, b);
  } else {
    v = Vec2(b, l1 - a);
  }
  if (v.squaredNorm() == 0) v = Vec2(1, 0);
  v.normalize();
  return l1 * v * v.transpose();
}

LocalQuadratic friction_hessian_psd(const FrictionDatum& datum, const Vec2& u) {
  LocalQuadratic q;
  q.num_verts = datum.num_verts();
  for (int i = 0; i < q.num_verts; ++i) q.vert_ids[i] = datum.stencil.verts[i];
  const LocalMat T = datum.basis_T();
  q.grad = -friction_force(datum, u);
  q.hess = datum.mu * datum.lambda_n * T * project_psd_2x2(friction_core(datum, u)) * T.transpose();
  return q;
}

double contact_normal_force(const ContactStencil& stencil, const Positions& x, const BarrierParams& params,
                            bool reference_ipc) {
  const double d = std::sqrt(stencil_distance(stencil, x).d2);
  double e = 1;
  if (is_parallel(stencil.kind)) {
    const auto& ep = stencil.edge_pair;
    e = mollifier_eval(edge_parallel_measure(x.col(ep[0]), x.col(ep[1]), x.col(ep[2]), x.col(ep[3])),
                       stencil.eps_x)
            .e;
  }
  if (reference_ipc) return e * std::abs(ipc_barrier_dd(d, params));
  const double g = d * d / (params.d_hat * params.d_hat);
  if (!(g < 1)) return 0;
  return e * std::abs(barrier_dg(g, params) * 2 * d / (params.d_hat * params.d_hat));
}

std::vector<FrictionDatum> update_friction_state(const std::vector<ContactStencil>& stencils, const Positions& x,
                                                 const BarrierParams& params, bool reference_ipc, double mu,
                                                 double eps_v, double dt) {
  std::vector<FrictionDatum> out;
  if (mu <= 0) return out;
  for (const auto& s : stencils) {
    FrictionDatum fd;
    fd.stencil = s;
    fd.stencil.kind = distance_kind(s.kind);
    fd.stencil.edge_pair = {-1, -1, -1, -1};
    fd.stencil.eps_x = 0;
    fd.mu = mu;
    fd.eps_v = eps_v;
    fd.dt = dt;
    fd.lambda_n = s.multiplicity * contact_normal_force(s, x, params, reference_ipc);
    if (!(fd.lambda_n > 0)) continue;

    const DistanceResult dist = stencil_distance(fd.stencil, x);
    Vec2 w = dist.witness;
    // Clamp the witness onto the primitive so the weights stay a convex split.
    const StencilKind k = fd.stencil.kind;
    if (k == StencilKind::PointEdge) w[0] = std::clamp(w[0], 0.0, 1.0);
    if (k == StencilKind::EdgeEdge) w = w.cwiseMax(0.0).cwiseMin(1.0);
    fd.weights = witness_weights(k, w);

    Vec3 n = Vec3::Zero();
    for (int i = 0; i < fd.num_verts(); ++i) n += fd.weights[i] * x.col(fd.stencil.verts[i]);
    if (n.squaredNorm() == 0) continue;
    n.normalize();
    const Vec3 axis = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 t1 = n.cross(axis).normalized();
    const Vec3 t2 = n.cross(t1);
    fd.tangent.col(0) = t1;
    fd.tangent.col(1) = t2;
    out.push_back(fd);
  }
  return out;
}

}  // namespace gipc
