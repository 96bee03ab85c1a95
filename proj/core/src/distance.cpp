#include "gipc/proximity.hpp"

#include <algorithm>
#include <cmath>

namespace gipc {

namespace {

// d2 = (r.n)^2 / |n|^2 with n = u x v. Returns gradients w.r.t. r, u, v.
struct ScaledProjection {
  double d2;
  Vec3 g_r, g_u, g_v;
};

ScaledProjection projected_distance(const Vec3& r, const Vec3& u, const Vec3& v) {
  const Vec3 n = u.cross(v);
  const double N = n.squaredNorm();
  const double s = r.dot(n);
  ScaledProjection out;
  out.d2 = s * s / N;
  const double a = 2 * s / N;
  const double b = 2 * s * s / (N * N);
  out.g_r = a * n;
  out.g_u = a * v.cross(r) - b * v.cross(n);
  out.g_v = a * r.cross(u) - b * n.cross(u);
  return out;
}

Classification point_segment(const Vec3& p, const Vec3& e0, const Vec3& e1, int ip, int i0, int i1) {
  const Vec3 e = e1 - e0;
  const double t = (p - e0).dot(e) / e.squaredNorm();
  Classification c;
  if (t <= 0) {
    c.kind = StencilKind::PointPoint;
    c.local = {ip, i0, -1, -1};
    c.dist = point_point_distance(p, e0);
  } else if (t >= 1) {
    c.kind = StencilKind::PointPoint;
    c.local = {ip, i1, -1, -1};
    c.dist = point_point_distance(p, e1);
  } else {
    c.kind = StencilKind::PointEdge;
    c.local = {ip, i0, i1, -1};
    c.dist = point_line_distance(p, e0, e1);
  }
  return c;
}

// Smallest distance; exact ties go to the lower-dimensional stencil.
bool better(const Classification& a, const Classification& b) {
  if (a.dist.d2 != b.dist.d2) return a.dist.d2 < b.dist.d2;
  return kind_vertex_count(a.kind) < kind_vertex_count(b.kind);
}

}  // namespace

const char* kind_name(StencilKind kind) {
  switch (kind) {
    case StencilKind::PointPoint: return "PP";
    case StencilKind::PointEdge: return "PE";
    case StencilKind::PointTriangle: return "PT";
    case StencilKind::EdgeEdge: return "EE";
    case StencilKind::EdgeEdgeParallel: return "EE-parallel";
    case StencilKind::PointEdgeParallel: return "PE-parallel";
    case StencilKind::PointPointParallel: return "PP-parallel";
  }
  return "?";
}

int kind_vertex_count(StencilKind kind) {
  switch (distance_kind(kind)) {
    case StencilKind::PointPoint: return 2;
    case StencilKind::PointEdge: return 3;
    default: return 4;
  }
}

bool is_parallel(StencilKind kind) {
  return kind == StencilKind::EdgeEdgeParallel || kind == StencilKind::PointEdgeParallel ||
         kind == StencilKind::PointPointParallel;
}

StencilKind distance_kind(StencilKind kind) {
  switch (kind) {
    case StencilKind::EdgeEdgeParallel: return StencilKind::EdgeEdge;
    case StencilKind::PointEdgeParallel: return StencilKind::PointEdge;
    case StencilKind::PointPointParallel: return StencilKind::PointPoint;
    default: return kind;
  }
}

StencilKind parallel_variant(StencilKind kind) {
  switch (kind) {
    case StencilKind::EdgeEdge: return StencilKind::EdgeEdgeParallel;
    case StencilKind::PointEdge: return StencilKind::PointEdgeParallel;
    case StencilKind::PointPoint: return StencilKind::PointPointParallel;
    default: return kind;
  }
}

DistanceResult point_point_distance(const Vec3& p, const Vec3& q) {
  DistanceResult r;
  const Vec3 w = p - q;
  r.d2 = w.squaredNorm();
  r.grad_d2[0] = 2 * w;
  r.grad_d2[1] = -2 * w;
  return r;
}

DistanceResult point_line_distance(const Vec3& p, const Vec3& e0, const Vec3& e1) {
  DistanceResult r;
  const Vec3 e = e1 - e0;
  const double t = (p - e0).dot(e) / e.squaredNorm();
  const Vec3 w = p - (e0 + t * e);
  r.d2 = w.squaredNorm();
  r.grad_d2[0] = 2 * w;
  r.grad_d2[1] = -2 * (1 - t) * w;
  r.grad_d2[2] = -2 * t * w;
  r.witness = Vec2(t, 0);
  return r;
}

DistanceResult point_plane_distance(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
  const Vec3 e1 = t1 - t0, e2 = t2 - t0, r = p - t0;
  const auto s = projected_distance(r, e1, e2);
  DistanceResult out;
  out.d2 = s.d2;
  out.grad_d2[0] = s.g_r;
  out.grad_d2[1] = -s.g_r - s.g_u - s.g_v;
  out.grad_d2[2] = s.g_u;
  out.grad_d2[3] = s.g_v;
  Mat2 A;
  A << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  out.witness = A.inverse() * Vec2(e1.dot(r), e2.dot(r));
  return out;
}

DistanceResult line_line_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
  const Vec3 ea = a1 - a0, eb = b1 - b0, r = a0 - b0;
  const double A = ea.dot(ea), C = eb.dot(eb);
  const Vec3 n = ea.cross(eb);
  const double nn = n.squaredNorm();
  if (!(nn > 1e-24 * A * C)) {
    // Parallel lines: the distance of any point of one line to the other.
    DistanceResult pl = point_line_distance(a0, b0, b1);
    DistanceResult out;
    out.d2 = pl.d2;
    out.grad_d2[0] = pl.grad_d2[0];
    out.grad_d2[2] = pl.grad_d2[1];
    out.grad_d2[3] = pl.grad_d2[2];
    out.witness = Vec2(0, pl.witness[0]);
    return out;
  }
  const auto s = projected_distance(r, ea, eb);
  DistanceResult out;
  out.d2 = s.d2;
  out.grad_d2[0] = s.g_r - s.g_u;
  out.grad_d2[1] = s.g_u;
  out.grad_d2[2] = -s.g_r - s.g_v;
  out.grad_d2[3] = s.g_v;
  out.witness = Vec2(eb.cross(r).dot(n) / nn, ea.cross(r).dot(n) / nn);
  return out;
}

DistanceResult stencil_distance(const ContactStencil& stencil, const Positions& x) {
  const auto& v = stencil.verts;
  switch (distance_kind(stencil.kind)) {
    case StencilKind::PointPoint: return point_point_distance(x.col(v[0]), x.col(v[1]));
    case StencilKind::PointEdge: return point_line_distance(x.col(v[0]), x.col(v[1]), x.col(v[2]));
    case StencilKind::PointTriangle:
      return point_plane_distance(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3]));
    default: return line_line_distance(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3]));
  }
}

std::array<double, 4> witness_weights(StencilKind kind, const Vec2& w) {
  switch (distance_kind(kind)) {
    case StencilKind::PointPoint: return {1, -1, 0, 0};
    case StencilKind::PointEdge: return {1, -(1 - w[0]), -w[0], 0};
    case StencilKind::PointTriangle: return {1, -(1 - w[0] - w[1]), -w[0], -w[1]};
    default: return {1 - w[0], w[0], -(1 - w[1]), -w[1]};
  }
}

Classification classify_point_triangle(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
  const Vec3 e1 = t1 - t0, e2 = t2 - t0;
  const double scale = std::max({e1.squaredNorm(), e2.squaredNorm(), (t2 - t1).squaredNorm()});
  if (!(e1.cross(e2).squaredNorm() > 1e-28 * scale * scale)) throw Error("degenerate triangle in point-triangle query");

  const Vec3 r = p - t0;
  Mat2 A;
  A << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  const Vec2 beta = A.inverse() * Vec2(e1.dot(r), e2.dot(r));
  if (beta[0] > 0 && beta[1] > 0 && beta[0] + beta[1] < 1) {
    Classification c;
    c.kind = StencilKind::PointTriangle;
    c.local = {0, 1, 2, 3};
    c.dist = point_plane_distance(p, t0, t1, t2);
    return c;
  }
  Classification best = point_segment(p, t0, t1, 0, 1, 2);
  for (auto cand : {point_segment(p, t1, t2, 0, 2, 3), point_segment(p, t2, t0, 0, 3, 1)}) {
    if (better(cand, best)) best = cand;
  }
  return best;
}

Classification classify_edge_edge(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1, double eps_x) {
  const Vec3 ea = a1 - a0, eb = b1 - b0;
  const double A = ea.squaredNorm(), C = eb.squaredNorm();
  if (!(A > 0) || !(C > 0)) throw Error("zero-length edge in edge-edge query");
  const double c = edge_parallel_measure(a0, a1, b0, b1);

  Classification best;
  bool interior = false;
  const Vec3 n = ea.cross(eb);
  const double nn = n.squaredNorm();
  if (nn > 1e-24 * A * C) {
    // Closest-point parameters of the supporting lines, written in terms of n to avoid cancellation.
    const Vec3 w = b0 - a0;
    const double g1 = w.cross(eb).dot(n) / nn, g2 = w.cross(ea).dot(n) / nn;
    if (g1 > 0 && g1 < 1 && g2 > 0 && g2 < 1) {
      best.kind = StencilKind::EdgeEdge;
      best.local = {0, 1, 2, 3};
      best.dist = line_line_distance(a0, a1, b0, b1);
      interior = true;
    }
  }
  if (!interior) {
    best = point_segment(a0, b0, b1, 0, 2, 3);
    for (auto cand : {point_segment(a1, b0, b1, 1, 2, 3), point_segment(b0, a0, a1, 2, 0, 1),
                      point_segment(b1, a0, a1, 3, 0, 1)}) {
      if (better(cand, best)) best = cand;
    }
  }
  best.c = c;
  if (eps_x > 0 && c < eps_x) best.kind = parallel_variant(best.kind);
  return best;
}

double edge_parallel_measure(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                             std::array<Vec3, 4>* grad) {
  const Vec3 ea = a1 - a0, eb = b1 - b0;
  const Vec3 u = ea.cross(eb);
  if (grad) {
    const Vec3 ga = 2 * eb.cross(u);
    const Vec3 gb = 2 * u.cross(ea);
    (*grad)[0] = -ga;
    (*grad)[1] = ga;
    (*grad)[2] = -gb;
    (*grad)[3] = gb;
  }
  return u.squaredNorm();
}

double parallel_tolerance(const SimMesh& mesh, const std::array<int, 4>& e, double scale) {
  const auto& X = mesh.rest_vertices;
  return scale * (X.col(e[1]) - X.col(e[0])).squaredNorm() * (X.col(e[3]) - X.col(e[2])).squaredNorm();
}

}  // namespace gipc
