#include "gipc/gap.hpp"

#include <cmath>

namespace gipc {

namespace {

LocalVec stack(const std::array<Vec3, 4>& g, int n) {
  LocalVec out(3 * n);
  for (int i = 0; i < n; ++i) out.segment<3>(3 * i) = g[i];
  return out;
}

}  // namespace

LocalVec DiagonalJacobian::stacked_grad_f() const { return stack(grad_f, num_dofs); }
LocalVec DiagonalJacobian::stacked_grad_sqrt_c() const { return stack(grad_sqrt_c, num_dofs); }

int simplex_dimension(StencilKind kind) {
  if (is_parallel(kind)) return 3;
  switch (distance_kind(kind)) {
    case StencilKind::PointPoint: return 1;
    case StencilKind::PointEdge: return 2;
    default: return 3;
  }
}

DiagonalJacobian build_diagonal_jacobian(const ContactStencil& stencil, const Positions& x, double d_hat) {
  DiagonalJacobian J;
  J.distance = stencil_distance(stencil, x);
  const double d2 = J.distance.d2;
  if (!(d2 > 0)) throw Error(std::string("nonpositive distance on ") + kind_name(stencil.kind) + " stencil");
  if (!(d2 < d_hat * d_hat)) throw Error("inactive stencil: distance is not below d_hat");
  const double d = std::sqrt(d2);
  J.m = simplex_dimension(stencil.kind);
  J.num_dofs = stencil.num_dofs();
  J.f = d / d_hat;

  const int nv = stencil.num_verts();
  if (!is_parallel(stencil.kind)) {
    for (int i = 0; i < nv; ++i) J.grad_f[i] = J.distance.grad_d2[i] / (2 * d * d_hat);
    return J;
  }

  // Parallel variants: scatter the reduced gradient onto the edge-pair dofs.
  for (int i = 0; i < nv; ++i) {
    for (int k = 0; k < 4; ++k) {
      if (stencil.edge_pair[k] == stencil.verts[i]) J.grad_f[k] += J.distance.grad_d2[i] / (2 * d * d_hat);
    }
  }
  const auto& e = stencil.edge_pair;
  std::array<Vec3, 4> grad_c;
  const double c = edge_parallel_measure(x.col(e[0]), x.col(e[1]), x.col(e[2]), x.col(e[3]), &grad_c);
  J.has_c = true;
  J.sqrt_c = std::sqrt(c);
  if (J.sqrt_c > 0) {
    for (int k = 0; k < 4; ++k) J.grad_sqrt_c[k] = grad_c[k] / (2 * J.sqrt_c);
  }
  return J;
}

GapValue gap_function(const DiagonalJacobian& J) {
  GapValue out;
  out.g = J.f * J.f;
  if (J.has_c) out.gamma = J.sqrt_c * J.sqrt_c;
  return out;
}

MatX diagonal_matrix(const DiagonalJacobian& J) {
  MatX S = MatX::Identity(J.m, J.m);
  S(J.m - 1, J.m - 1) = J.f;
  if (J.has_c && J.m == 3) S(1, 1) = J.sqrt_c;
  return S;
}

}  // namespace gipc
