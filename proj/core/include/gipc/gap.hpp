#pragma once

#include "gipc/proximity.hpp"

#include <optional>

namespace gipc {

// Diagonal constraint Jacobian in reduced form. Gradients are indexed like stencil.dof(i).
struct DiagonalJacobian {
  int m = 1;  // simplex dimension: 1 (PP), 2 (PE), 3 (PT, EE)
  int num_dofs = 2;
  double f = 0;  // d / d_hat
  std::array<Vec3, 4> grad_f{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  bool has_c = false;
  double sqrt_c = 0;
  std::array<Vec3, 4> grad_sqrt_c{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  DistanceResult distance;  // over stencil.verts

  LocalVec stacked_grad_f() const;
  LocalVec stacked_grad_sqrt_c() const;
};

struct GapValue {
  double g = 0;
  std::optional<double> gamma;
};

int simplex_dimension(StencilKind kind);

DiagonalJacobian build_diagonal_jacobian(const ContactStencil& stencil, const Positions& x, double d_hat);
GapValue gap_function(const DiagonalJacobian& J);

// The m x m diagonal matrix diag(1, ..., f), or diag(1, sqrt_c, f) for parallel variants.
MatX diagonal_matrix(const DiagonalJacobian& J);

}  // namespace gipc
