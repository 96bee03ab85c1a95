#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gipc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Column i holds vertex i.
using Positions = Eigen::Matrix3Xd;

// Per-stencil vectors and matrices: at most 4 vertices, 12 DOFs.
using LocalVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 12, 1>;
using LocalMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 12, 12>;

using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat12 = Eigen::Matrix<double, 12, 12>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Eigen::Map<VecX> flat(Positions& x) { return {x.data(), x.size()}; }
inline Eigen::Map<const VecX> flat(const Positions& x) { return {x.data(), x.size()}; }

}  // namespace gipc
