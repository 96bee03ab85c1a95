#include "gipc/elasticity.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace gipc {

namespace {

Mat3 cross_matrix(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Vec9 vec(const Mat3& A) { return Eigen::Map<const Vec9>(A.data()); }

Mat3 cofactor(const Mat3& F) {
  Mat3 g;
  g.col(0) = F.col(1).cross(F.col(2));
  g.col(1) = F.col(2).cross(F.col(0));
  g.col(2) = F.col(0).cross(F.col(1));
  return g;
}

double lambda_prime(const ElasticMaterial& m) { return m.lame_lambda + m.lame_mu; }

}  // namespace

ElasticMaterial ElasticMaterial::from_young_poisson(double E, double nu) {
  if (!(E > 0) || !(nu > 0 && nu < 0.5)) throw Error("invalid elastic material (need E > 0, 0 < nu < 0.5)");
  ElasticMaterial m;
  m.youngs_E = E;
  m.poisson_nu = nu;
  m.lame_mu = E / (2 * (1 + nu));
  m.lame_lambda = E * nu / ((1 + nu) * (1 - 2 * nu));
  return m;
}

double snh_energy(const Mat3& F, const ElasticMaterial& m) {
  const double Ic = F.squaredNorm();
  const double J = F.determinant();
  return 0.5 * m.lame_mu * (Ic - 3) - m.lame_mu * (J - 1) + 0.5 * lambda_prime(m) * (J - 1) * (J - 1);
}

Mat3 snh_first_piola(const Mat3& F, const ElasticMaterial& m) {
  const double J = F.determinant();
  return m.lame_mu * F + (lambda_prime(m) * (J - 1) - m.lame_mu) * cofactor(F);
}

Mat9 snh_hessian(const Mat3& F, const ElasticMaterial& m) {
  const double J = F.determinant();
  const Vec9 g = vec(cofactor(F));
  Mat9 HJ = Mat9::Zero();
  const Mat3 f0 = cross_matrix(F.col(0)), f1 = cross_matrix(F.col(1)), f2 = cross_matrix(F.col(2));
  HJ.block<3, 3>(0, 3) = -f2;
  HJ.block<3, 3>(0, 6) = f1;
  HJ.block<3, 3>(3, 0) = f2;
  HJ.block<3, 3>(3, 6) = -f0;
  HJ.block<3, 3>(6, 0) = -f1;
  HJ.block<3, 3>(6, 3) = f0;
  const double lp = lambda_prime(m);
  return m.lame_mu * Mat9::Identity() + lp * g * g.transpose() + (lp * (J - 1) - m.lame_mu) * HJ;
}

Mat3 deformation_gradient(const Mat3& rest_inv, const Vec3& x0, const Vec3& x1, const Vec3& x2, const Vec3& x3) {
  Mat3 Ds;
  Ds << x1 - x0, x2 - x0, x3 - x0;
  return Ds * rest_inv;
}

Eigen::Matrix<double, 9, 12> deformation_jacobian(const Mat3& Dinv) {
  Eigen::Matrix<double, 9, 12> B = Eigen::Matrix<double, 9, 12>::Zero();
  for (int j = 0; j < 3; ++j) {
    const double s0 = -(Dinv(0, j) + Dinv(1, j) + Dinv(2, j));
    for (int i = 0; i < 3; ++i) {
      const int row = i + 3 * j;
      B(row, i) = s0;
      for (int a = 1; a <= 3; ++a) B(row, 3 * a + i) = Dinv(a - 1, j);
    }
  }
  return B;
}

TetEnergy tet_energy_grad_hess(const Mat3& rest_inv, const Vec3& x0, const Vec3& x1, const Vec3& x2,
                               const Vec3& x3, const ElasticMaterial& material, bool project) {
  const Mat3 F = deformation_gradient(rest_inv, x0, x1, x2, x3);
  const auto B = deformation_jacobian(rest_inv);
  TetEnergy out;
  out.energy = snh_energy(F, material);
  out.grad = B.transpose() * vec(snh_first_piola(F, material));
  Mat9 H = snh_hessian(F, material);
  if (project) {
    Eigen::SelfAdjointEigenSolver<Mat9> eig(H);
    const Vec9 lam = eig.eigenvalues().cwiseMax(0.0);
    H = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
  }
  out.hess = B.transpose() * H * B;
  return out;
}

}  // namespace gipc
