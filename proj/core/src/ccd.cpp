#include "gipc/proximity.hpp"

#include <algorithm>
#include <cmath>

namespace gipc {

double accd_step_bound(const PrimitivePair& pair, const Positions& x, const Positions& dx, double slack,
                       int max_iters) {
  std::array<Vec3, 4> p, q;
  Vec3 mean = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    q[k] = x.col(pair.verts[k]);
    p[k] = dx.col(pair.verts[k]);
    mean += p[k];
  }
  mean /= 4;
  for (auto& pk : p) pk -= mean;

  double lp;
  if (pair.kind == StencilKind::PointTriangle) {
    lp = p[0].norm() + std::max({p[1].norm(), p[2].norm(), p[3].norm()});
  } else {
    lp = std::max(p[0].norm(), p[1].norm()) + std::max(p[2].norm(), p[3].norm());
  }
  if (lp == 0) return 1;

  auto dist = [&]() {
    if (pair.kind == StencilKind::PointTriangle) return std::sqrt(classify_point_triangle(q[0], q[1], q[2], q[3]).dist.d2);
    return std::sqrt(classify_edge_edge(q[0], q[1], q[2], q[3]).dist.d2);
  };

  const double d0 = dist();
  if (!(d0 > 0)) throw Error("CCD query starts from zero distance");
  const double floor = (1 - slack) * d0;
  double t = 0;
  double tl = slack * d0 / lp;
  for (int it = 0; it < max_iters; ++it) {
    for (int k = 0; k < 4; ++k) q[k] += tl * p[k];
    const double d = dist();
    if (t > 0 && d < floor) return t;
    t += tl;
    if (t >= 1) return 1;
    tl = 0.9 * d / lp;
  }
  return t;
}

double global_ccd_filter(const SimMesh& mesh, const Positions& x, const Positions& dx, double slack) {
  double alpha = 1;
  for (const auto& pair : candidate_pairs(mesh, x, &dx, 0)) {
    alpha = std::min(alpha, accd_step_bound(pair, x, dx, slack));
  }
  return alpha;
}

}  // namespace gipc
