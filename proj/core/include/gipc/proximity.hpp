#pragma once

#include "gipc/mesh.hpp"
#include "gipc/types.hpp"

#include <optional>
#include <tuple>

namespace gipc {

enum class StencilKind : std::uint8_t {
  PointPoint,
  PointEdge,
  PointTriangle,
  EdgeEdge,
  EdgeEdgeParallel,
  PointEdgeParallel,
  PointPointParallel,
};

const char* kind_name(StencilKind kind);
int kind_vertex_count(StencilKind kind);
bool is_parallel(StencilKind kind);
// Non-parallel kind with the same distance formula.
StencilKind distance_kind(StencilKind kind);
StencilKind parallel_variant(StencilKind kind);

struct ContactStencil {
  StencilKind kind = StencilKind::PointPoint;
  // Order: PP (p, q); PE (p, e0, e1); PT (p, t0, t1, t2); EE (a0, a1, b0, b1).
  std::array<int, 4> verts{-1, -1, -1, -1};
  // Parallel variants: originating edges (a0, a1, b0, b1).
  std::array<int, 4> edge_pair{-1, -1, -1, -1};
  double eps_x = 0;
  // Number of surface primitive pairs that reduce to this stencil; the barrier counts each of them.
  int multiplicity = 1;

  int num_verts() const { return kind_vertex_count(kind); }
  // Vertices carrying derivatives: edge_pair for parallel variants, verts otherwise.
  int num_dofs() const { return is_parallel(kind) ? 4 : num_verts(); }
  int dof(int i) const { return is_parallel(kind) ? edge_pair[i] : verts[i]; }

  // Identity ignores multiplicity.
  auto key() const { return std::tie(kind, verts, edge_pair, eps_x); }
  bool operator==(const ContactStencil& o) const { return key() == o.key(); }
  auto operator<=>(const ContactStencil& o) const { return key() <=> o.key(); }
};

struct DistanceResult {
  double d2 = 0;
  std::array<Vec3, 4> grad_d2{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  // PE: (t, 0) along the edge; PT: (beta1, beta2); EE: (gamma1, gamma2); PP: unused.
  Vec2 witness = Vec2::Zero();
};

// Closed-form squared distances of a fixed stencil kind (no region classification):
// PE uses the supporting line, PT the supporting plane, EE the supporting lines.
DistanceResult point_point_distance(const Vec3& p, const Vec3& q);
DistanceResult point_line_distance(const Vec3& p, const Vec3& e0, const Vec3& e1);
DistanceResult point_plane_distance(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2);
DistanceResult line_line_distance(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1);

// Distance of a stencil at positions x, using the formula of distance_kind(stencil.kind) over stencil.verts.
DistanceResult stencil_distance(const ContactStencil& stencil, const Positions& x);

// Signed weights w with closest-point difference sum_i w_i x_i over stencil.verts.
std::array<double, 4> witness_weights(StencilKind kind, const Vec2& witness);

struct Classification {
  StencilKind kind = StencilKind::PointPoint;
  std::array<int, 4> local{-1, -1, -1, -1};  // indices into the query's input points
  DistanceResult dist;                        // gradient ordered like `local`
  double c = 0;                               // parallelness, edge-edge queries only
};

// Query points: (p, t0, t1, t2). Throws on degenerate triangles.
Classification classify_point_triangle(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2);
// Query points: (a0, a1, b0, b1). Parallel promotion happens when c < eps_x (pass 0 to disable).
Classification classify_edge_edge(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                                  double eps_x = 0);

// Parallelness c = |(a1 - a0) x (b1 - b0)|^2 and its gradient over (a0, a1, b0, b1).
double edge_parallel_measure(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1,
                             std::array<Vec3, 4>* grad = nullptr);
double parallel_tolerance(const SimMesh& mesh, const std::array<int, 4>& edge_pair, double scale = 1e-3);

struct ProximityOptions {
  bool promote_parallel = true;
  double eps_x_scale = 1e-3;
};

std::vector<ContactStencil> find_contact_pairs(const SimMesh& mesh, const Positions& x, double d_hat,
                                               const ProximityOptions& options = {});

// Exact minimum over all surface point-triangle and edge-edge pairs within `radius` (or `radius` when none).
double minimum_distance(const SimMesh& mesh, const Positions& x, double radius);

// Primitive pairs for CCD: kind PointTriangle (p, t0, t1, t2) or EdgeEdge (a0, a1, b0, b1).
struct PrimitivePair {
  StencilKind kind;
  std::array<int, 4> verts;
};

struct Aabb {
  Vec3 lo, hi;
};

// Index pairs (i, j) with overlapping boxes, sweep-and-prune along x. Sorted.
std::vector<std::pair<int, int>> overlapping_pairs(const std::vector<Aabb>& a, const std::vector<Aabb>& b);
std::vector<std::pair<int, int>> overlapping_pairs(const std::vector<Aabb>& a);

// Pairs whose boxes (swept over x -> x + dx when dx is given) inflated by `inflate` overlap.
// Pairs sharing a vertex or made only of fixed vertices are skipped.
std::vector<PrimitivePair> candidate_pairs(const SimMesh& mesh, const Positions& x, const Positions* dx,
                                           double inflate);

// Unsigned distance between the primitives (full region classification).
double primitive_distance2(const PrimitivePair& pair, const Positions& x);

double accd_step_bound(const PrimitivePair& pair, const Positions& x, const Positions& dx, double slack = 0.9,
                       int max_iters = 512);
double global_ccd_filter(const SimMesh& mesh, const Positions& x, const Positions& dx, double slack = 0.9);

}  // namespace gipc
