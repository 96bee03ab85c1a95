#include "gipc/linear.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace gipc {

namespace {

void mask(const BlockSystem& sys, VecX& v) {
  for (std::size_t i = 0; i < sys.fixed.size(); ++i) {
    if (sys.fixed[i]) v.segment<3>(3 * i).setZero();
  }
}

}  // namespace

VecX matvec_matrix_free(const BlockSystem& sys, const VecX& v) {
  VecX out = sys.mass.cwiseProduct(v);
  LocalVec local;
  for (const auto& b : sys.blocks) {
    local.resize(3 * b.num_verts);
    for (int i = 0; i < b.num_verts; ++i) {
      const int id = b.vert_ids[i];
      local.segment<3>(3 * i) = sys.fixed[id] ? Vec3::Zero() : Vec3(v.segment<3>(3 * id));
    }
    const LocalVec r = b.hess * local;
    for (int i = 0; i < b.num_verts; ++i) out.segment<3>(3 * b.vert_ids[i]) += r.segment<3>(3 * i);
  }
  for (std::size_t i = 0; i < sys.fixed.size(); ++i) {
    if (sys.fixed[i]) out.segment<3>(3 * i) = v.segment<3>(3 * i);
  }
  return out;
}

MatX assemble_dense(const BlockSystem& sys) {
  MatX A = sys.mass.asDiagonal();
  for (const auto& b : sys.blocks) {
    for (int i = 0; i < b.num_verts; ++i) {
      for (int j = 0; j < b.num_verts; ++j) {
        A.block<3, 3>(3 * b.vert_ids[i], 3 * b.vert_ids[j]) += b.hess.block<3, 3>(3 * i, 3 * j);
      }
    }
  }
  for (std::size_t i = 0; i < sys.fixed.size(); ++i) {
    if (!sys.fixed[i]) continue;
    A.middleRows(3 * i, 3).setZero();
    A.middleCols(3 * i, 3).setZero();
    A.block<3, 3>(3 * i, 3 * i).setIdentity();
  }
  return A;
}

std::vector<Mat3> block_jacobi_inverse(const BlockSystem& sys) {
  const int nv = sys.dofs() / 3;
  std::vector<Mat3> diag(nv);
  for (int i = 0; i < nv; ++i) diag[i] = sys.mass.segment<3>(3 * i).asDiagonal();
  for (const auto& b : sys.blocks) {
    for (int i = 0; i < b.num_verts; ++i) diag[b.vert_ids[i]] += b.hess.block<3, 3>(3 * i, 3 * i);
  }
  for (int i = 0; i < nv; ++i) {
    diag[i] = sys.fixed[i] ? Mat3::Identity() : Mat3(diag[i].inverse());
  }
  return diag;
}

PcgResult pcg_solve(const BlockSystem& sys, const VecX& rhs, double rel_tol, int max_iters) {
  const int n = sys.dofs();
  const auto Pinv = block_jacobi_inverse(sys);
  auto precondition = [&](const VecX& r) {
    VecX z(n);
    for (int i = 0; i < n / 3; ++i) z.segment<3>(3 * i) = Pinv[i] * r.segment<3>(3 * i);
    return z;
  };

  PcgResult out;
  out.x = VecX::Zero(n);
  VecX r = rhs;
  mask(sys, r);
  VecX c = precondition(r);
  mask(sys, c);
  double delta_new = r.dot(c);
  const double delta0 = delta_new;
  if (delta0 == 0) return out;

  while (delta_new > rel_tol * delta0) {
    if (out.iterations >= max_iters) {
      out.converged = false;
      break;
    }
    VecX q = matvec_matrix_free(sys, c);
    mask(sys, q);
    const double alpha = delta_new / c.dot(q);
    out.x += alpha * c;
    r -= alpha * q;
    VecX s = precondition(r);
    const double delta_old = delta_new;
    delta_new = r.dot(s);
    c = s + (delta_new / delta_old) * c;
    mask(sys, c);
    ++out.iterations;
  }
  return out;
}

VecX dense_solve(const BlockSystem& sys, const VecX& rhs) {
  VecX b = rhs;
  mask(sys, b);
  const MatX A = assemble_dense(sys);
  Eigen::LLT<MatX> llt(A);
  if (llt.info() != Eigen::Success) throw Error("dense solve: operator is not positive definite");
  return llt.solve(b);
}

}  // namespace gipc
