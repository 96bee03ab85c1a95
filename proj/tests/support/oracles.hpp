#pragma once

#include "gipc/solver.hpp"

#include <functional>
#include <random>

namespace gipc::testing {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);
Vec3 random_vec(Rng& rng, double scale = 1);
Vec3 random_unit(Rng& rng);
Mat3 random_rotation(Rng& rng);

// Central differences of a scalar function of a stacked vector.
VecX fd_gradient(const std::function<double(const VecX&)>& f, const VecX& x, double h);
MatX fd_jacobian(const std::function<VecX(const VecX&)>& f, const VecX& x, double h);

double min_eigenvalue(const MatX& A);
double rel_err(double a, double b);
double rel_err(const VecX& a, const VecX& b);

// Random stencil geometry with a prescribed distance d. Points are returned in stencil order
// (PP: p q; PE: p e0 e1; PT: p t0 t1 t2; EE: a0 a1 b0 b1).
std::vector<Vec3> random_stencil(Rng& rng, StencilKind kind, double d);
// Nearly parallel edges (sin^2 of the angle below about 1e-4) at line distance d with interior witnesses.
std::vector<Vec3> random_parallel_edges(Rng& rng, double d);

// Stencil over local vertex ids 0..n-1 and the matching position matrix.
// Nearly parallel edge pair (a0 a1 b0 b1) whose closest features form the reduced stencil of a parallel kind:
// interior-interior (EE), endpoint b0 against the interior of a (PE) or endpoints a1, b0 (PP), at distance d.
std::vector<Vec3> random_parallel_stencil(Rng& rng, StencilKind kind, double d);
// Parallel-variant stencil over local ids with the reduced vertices found by classification.
ContactStencil classified_parallel_stencil(const std::vector<Vec3>& pts, double eps_x);
ContactStencil local_stencil(StencilKind kind, double eps_x = 0);
Positions to_positions(const std::vector<Vec3>& pts);

// F = E * Ebar^-1 from explicit rest-shape constructions, for the four base kinds.
MatX explicit_jacobian_oracle(StencilKind kind, const std::vector<Vec3>& pts, double d_hat);

// Full J-space Hessians assembled term by term at J = diag(1, ..., f) (m x m) and J = diag(1, sqrt c, f).
MatX barrier_j_hessian(int m, double g, const BarrierParams& params);
Mat9 mollified_j_hessian(double g, double c, const BarrierParams& params, double eps_x);
Mat9 numeric_psd_projection(const Mat9& A);

// All stencils within d_hat by exhaustive enumeration (no broad phase).
std::vector<ContactStencil> brute_force_contacts(const SimMesh& mesh, const Positions& x, double d_hat,
                                                 const ProximityOptions& options = {});
// Role-preserving canonical key for set comparison.
std::vector<int> stencil_key(const ContactStencil& s);

// Brute-force grid minimum of the point-triangle / segment-segment distance.
double grid_point_triangle(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2, int n);
double grid_edge_edge(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1, int n);

// Small meshes.
SimMesh unit_tet(double scale = 1);
SimMesh cube_5tets(double size = 1);
SimMesh ground_quad(double half, double y);

}  // namespace gipc::testing
