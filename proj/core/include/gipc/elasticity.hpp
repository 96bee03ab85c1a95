#pragma once

#include "gipc/types.hpp"

namespace gipc {

struct ElasticMaterial {
  double youngs_E = 1e5;
  double poisson_nu = 0.4;
  double lame_mu = 0;
  double lame_lambda = 0;

  static ElasticMaterial from_young_poisson(double E, double nu);
};

struct TetEnergy {
  double energy = 0;  // energy density Psi(F)
  Vec12 grad = Vec12::Zero();
  Mat12 hess = Mat12::Zero();
};

// Stable neo-Hookean density Psi = mu/2 (I_C - 3) - mu (J - 1) + lambda'/2 (J - 1)^2, lambda' = lambda + mu.
double snh_energy(const Mat3& F, const ElasticMaterial& m);
Mat3 snh_first_piola(const Mat3& F, const ElasticMaterial& m);
Mat9 snh_hessian(const Mat3& F, const ElasticMaterial& m);

Mat3 deformation_gradient(const Mat3& rest_inv, const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3);
// dvec(F)/dx for F = Ds * rest_inv, x stacked (x0, x1, x2, x3).
Eigen::Matrix<double, 9, 12> deformation_jacobian(const Mat3& rest_inv);

// Per-unit-rest-volume energy, gradient and Hessian w.r.t. the 4 tet vertices.
TetEnergy tet_energy_grad_hess(const Mat3& rest_inv, const Vec3& x0, const Vec3& x1, const Vec3& x2,
                               const Vec3& x3, const ElasticMaterial& material, bool project = true);

}  // namespace gipc
