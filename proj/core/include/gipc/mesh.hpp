#pragma once

#include "gipc/types.hpp"

#include <filesystem>

namespace gipc {

struct SimMesh {
  Positions vertices;
  Positions rest_vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::array<int, 3>> surface_tris;
  std::vector<std::array<int, 2>> surface_edges;
  std::vector<int> surface_verts;
  VecX vertex_mass;
  std::vector<std::uint8_t> is_fixed;

  std::vector<double> rest_volume;
  std::vector<Mat3> rest_inv;  // inverse of the rest edge matrix per tet
  std::vector<int> tet_body;   // body index per tet (merged meshes)
  std::vector<int> vertex_body;

  int num_vertices() const { return static_cast<int>(vertices.cols()); }
};

struct Scene {
  std::vector<SimMesh> bodies;
  Vec3 gravity = Vec3(0, -9.81, 0);
  double bbox_diagonal = 0;
};

// Builds a volumetric mesh: orients tets positively, caches rest data and extracts the boundary.
SimMesh make_tet_mesh(const Positions& verts, std::vector<std::array<int, 4>> tets);
// Builds a co-dimensional triangle mesh. All vertices are fixed.
SimMesh make_surface_mesh(const Positions& verts, const std::vector<std::array<int, 3>>& tris);

SimMesh load_tet_mesh(const std::filesystem::path& node_path, const std::filesystem::path& ele_path);
SimMesh load_obj_surface(const std::filesystem::path& path);

// Faces used by exactly one tet, outward oriented.
std::vector<std::array<int, 3>> extract_boundary(const std::vector<std::array<int, 4>>& tets);
std::vector<std::array<int, 2>> unique_edges(const std::vector<std::array<int, 3>>& tris);

VecX compute_lumped_masses(const SimMesh& mesh, double density);

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);
double bbox_diagonal(const std::vector<SimMesh>& bodies);

// Applies x <- R * (scale * x) + t to current and rest positions.
void transform_mesh(SimMesh& mesh, double scale, const Mat3& rotation, const Vec3& translation);

// Concatenates bodies into one index space, filling tet_body and vertex_body.
SimMesh merge_bodies(const std::vector<SimMesh>& bodies);

void write_obj(const std::filesystem::path& path, const Positions& x,
               const std::vector<std::array<int, 3>>& tris);

}  // namespace gipc
