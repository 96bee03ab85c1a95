#pragma once

#include "gipc/barrier.hpp"

namespace gipc {

struct FrictionDatum {
  ContactStencil stencil;  // reduced stencil: verts/kind define the sliding operator
  double lambda_n = 0;
  Eigen::Matrix<double, 3, 2> tangent = Eigen::Matrix<double, 3, 2>::Zero();  // orthonormal tangent basis P
  std::array<double, 4> weights{0, 0, 0, 0};  // signed witness weights over stencil.verts
  double mu = 0;
  double eps_v = 0;
  double dt = 0;

  int num_verts() const { return kind_vertex_count(stencil.kind); }
  // T = weights (x) P, maps stacked stencil displacement (3s) to u.
  LocalMat basis_T() const;
};

struct FrictionScalars {
  double f0;
  double f1;
  double f1_prime;
};

FrictionScalars f0_f1(double u_norm, double eps_v, double dt);

// u = T^T (x - x_prev) over the stencil vertices.
Vec2 tangential_displacement(const FrictionDatum& datum, const Positions& x, const Positions& x_prev);

double friction_potential(const FrictionDatum& datum, const Vec2& u);
// -mu lambda T f1 u / |u|, stacked over stencil.verts.
LocalVec friction_force(const FrictionDatum& datum, const Vec2& u);
// Projected 2x2 core expanded through T and scaled by mu lambda; grad = -friction_force.
LocalQuadratic friction_hessian_psd(const FrictionDatum& datum, const Vec2& u);
Mat2 friction_core(const FrictionDatum& datum, const Vec2& u);

// Closed-form eigenprojection of a symmetric 2x2 matrix.
Mat2 project_psd_2x2(const Mat2& A);

// Normal-force magnitude |db/dd| of a contact stencil for the chosen barrier family.
double contact_normal_force(const ContactStencil& stencil, const Positions& x, const BarrierParams& params,
                            bool reference_ipc);

// Lagged data from the converged state of the previous step.
std::vector<FrictionDatum> update_friction_state(const std::vector<ContactStencil>& stencils, const Positions& x,
                                                 const BarrierParams& params, bool reference_ipc, double mu,
                                                 double eps_v, double dt);

}  // namespace gipc
