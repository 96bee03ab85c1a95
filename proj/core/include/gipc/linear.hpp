#pragma once

#include "gipc/barrier.hpp"

namespace gipc {

// Global operator A = diag(mass) + sum of scattered local blocks, with fixed DOFs masked to identity.
struct BlockSystem {
  VecX mass;  // per DOF (3 entries per vertex)
  std::vector<LocalQuadratic> blocks;
  std::vector<std::uint8_t> fixed;  // per vertex

  int dofs() const { return static_cast<int>(mass.size()); }
};

VecX matvec_matrix_free(const BlockSystem& sys, const VecX& v);
MatX assemble_dense(const BlockSystem& sys);

// Per-vertex inverted 3x3 diagonal blocks (identity on fixed vertices).
std::vector<Mat3> block_jacobi_inverse(const BlockSystem& sys);

struct PcgResult {
  VecX x;
  int iterations = 0;
  bool converged = true;
};

// Modified PCG: stops when delta_new < rel_tol * delta_0 on the masked residual.
PcgResult pcg_solve(const BlockSystem& sys, const VecX& rhs, double rel_tol, int max_iters);
// Dense Cholesky on the assembled operator (small systems, oracle use).
VecX dense_solve(const BlockSystem& sys, const VecX& rhs);

}  // namespace gipc
