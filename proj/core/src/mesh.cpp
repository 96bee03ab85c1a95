#include "gipc/mesh.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace gipc {

namespace {

double mesh_diagonal(const Positions& x) {
  if (x.cols() == 0) return 0;
  return (x.rowwise().maxCoeff() - x.rowwise().minCoeff()).norm();
}

void cache_rest_data(SimMesh& mesh) {
  const double l = mesh_diagonal(mesh.rest_vertices);
  mesh.rest_volume.resize(mesh.tets.size());
  mesh.rest_inv.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    auto& tet = mesh.tets[t];
    const auto& X = mesh.rest_vertices;
    double vol = signed_tet_volume(X.col(tet[0]), X.col(tet[1]), X.col(tet[2]), X.col(tet[3]));
    if (std::abs(vol) < 1e-14 * l * l * l) {
      throw Error("degenerate tet " + std::to_string(t) + " (volume " + std::to_string(vol) + ")");
    }
    if (vol < 0) {
      std::swap(tet[2], tet[3]);
      vol = -vol;
    }
    Mat3 Dm;
    Dm << X.col(tet[1]) - X.col(tet[0]), X.col(tet[2]) - X.col(tet[0]), X.col(tet[3]) - X.col(tet[0]);
    mesh.rest_volume[t] = vol;
    mesh.rest_inv[t] = Dm.inverse();
  }
}

void fill_surface(SimMesh& mesh, std::vector<std::array<int, 3>> tris) {
  mesh.surface_tris = std::move(tris);
  mesh.surface_edges = unique_edges(mesh.surface_tris);
  std::vector<int> verts;
  for (const auto& t : mesh.surface_tris) verts.insert(verts.end(), t.begin(), t.end());
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  mesh.surface_verts = std::move(verts);
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// Next non-empty, non-comment line.
bool next_record(std::istream& in, std::istringstream& line) {
  std::string s;
  while (std::getline(in, s)) {
    auto hash = s.find('#');
    if (hash != std::string::npos) s.resize(hash);
    if (s.find_first_not_of(" \t\r") == std::string::npos) continue;
    line.clear();
    line.str(s);
    return true;
  }
  return false;
}

}  // namespace

double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

std::vector<std::array<int, 3>> extract_boundary(const std::vector<std::array<int, 4>>& tets) {
  // Faces of a positively oriented tet with outward normals.
  static constexpr int kFaces[4][3] = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
  std::map<std::array<int, 3>, std::pair<int, std::array<int, 3>>> faces;
  for (const auto& tet : tets) {
    for (const auto& f : kFaces) {
      std::array<int, 3> tri{tet[f[0]], tet[f[1]], tet[f[2]]};
      std::array<int, 3> key = tri;
      std::sort(key.begin(), key.end());
      auto& entry = faces[key];
      entry.first += 1;
      entry.second = tri;
    }
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& [key, entry] : faces) {
    if (entry.first == 1) out.push_back(entry.second);
  }
  return out;
}

std::vector<std::array<int, 2>> unique_edges(const std::vector<std::array<int, 3>>& tris) {
  std::vector<std::array<int, 2>> edges;
  edges.reserve(tris.size() * 3);
  for (const auto& t : tris) {
    for (int k = 0; k < 3; ++k) {
      int a = t[k], b = t[(k + 1) % 3];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

SimMesh make_tet_mesh(const Positions& verts, std::vector<std::array<int, 4>> tets) {
  SimMesh mesh;
  mesh.vertices = verts;
  mesh.rest_vertices = verts;
  const int n = static_cast<int>(verts.cols());
  for (std::size_t t = 0; t < tets.size(); ++t) {
    for (int v : tets[t]) {
      if (v < 0 || v >= n) throw Error("tet " + std::to_string(t) + " references missing vertex");
    }
  }
  mesh.tets = std::move(tets);
  cache_rest_data(mesh);
  fill_surface(mesh, extract_boundary(mesh.tets));
  mesh.vertex_mass = VecX::Zero(n);
  mesh.is_fixed.assign(n, 0);
  mesh.tet_body.assign(mesh.tets.size(), 0);
  mesh.vertex_body.assign(n, 0);
  return mesh;
}

SimMesh make_surface_mesh(const Positions& verts, const std::vector<std::array<int, 3>>& tris) {
  SimMesh mesh;
  mesh.vertices = verts;
  mesh.rest_vertices = verts;
  const int n = static_cast<int>(verts.cols());
  for (std::size_t t = 0; t < tris.size(); ++t) {
    for (int v : tris[t]) {
      if (v < 0 || v >= n) throw Error("triangle " + std::to_string(t) + " references missing vertex");
    }
  }
  fill_surface(mesh, tris);
  mesh.vertex_mass = VecX::Zero(n);
  mesh.is_fixed.assign(n, 1);
  mesh.vertex_body.assign(n, 0);
  return mesh;
}

SimMesh load_tet_mesh(const std::filesystem::path& node_path, const std::filesystem::path& ele_path) {
  auto node = open_or_throw(node_path);
  std::istringstream line;
  int count = 0, dim = 0;
  if (!next_record(node, line) || !(line >> count >> dim) || dim != 3 || count <= 0) {
    throw Error(node_path.string() + ": bad header");
  }
  Positions x(3, count);
  int base = -1;
  for (int i = 0; i < count; ++i) {
    int idx;
    double a, b, c;
    if (!next_record(node, line) || !(line >> idx >> a >> b >> c)) {
      throw Error(node_path.string() + ": bad vertex record " + std::to_string(i));
    }
    if (base < 0) base = idx;
    if (idx - base != i) throw Error(node_path.string() + ": vertex indices not consecutive");
    x.col(i) = Vec3(a, b, c);
  }

  auto ele = open_or_throw(ele_path);
  int ntet = 0, per = 0;
  if (!next_record(ele, line) || !(line >> ntet >> per) || per < 4 || ntet <= 0) {
    throw Error(ele_path.string() + ": bad header");
  }
  std::vector<std::array<int, 4>> tets(ntet);
  for (int t = 0; t < ntet; ++t) {
    int idx;
    auto& tet = tets[t];
    if (!next_record(ele, line) || !(line >> idx >> tet[0] >> tet[1] >> tet[2] >> tet[3])) {
      throw Error(ele_path.string() + ": bad tet record " + std::to_string(t));
    }
    for (int& v : tet) v -= base;
  }
  return make_tet_mesh(x, std::move(tets));
}

SimMesh load_obj_surface(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  std::string s;
  int lineno = 0;
  while (std::getline(in, s)) {
    ++lineno;
    std::istringstream line(s);
    std::string tag;
    if (!(line >> tag)) continue;
    if (tag == "v") {
      Vec3 p;
      if (!(line >> p.x() >> p.y() >> p.z())) throw Error(path.string() + ": bad vertex at line " + std::to_string(lineno));
      verts.push_back(p);
    } else if (tag == "f") {
      std::vector<int> ids;
      std::string tok;
      while (line >> tok) {
        int v = std::stoi(tok.substr(0, tok.find('/')));
        ids.push_back(v < 0 ? static_cast<int>(verts.size()) + v : v - 1);
      }
      if (ids.size() != 3) throw Error(path.string() + ": non-triangle face at line " + std::to_string(lineno));
      tris.push_back({ids[0], ids[1], ids[2]});
    }
  }
  Positions x(3, verts.size());
  for (std::size_t i = 0; i < verts.size(); ++i) x.col(i) = verts[i];
  return make_surface_mesh(x, tris);
}

VecX compute_lumped_masses(const SimMesh& mesh, double density) {
  if (density <= 0) throw Error("density must be positive");
  VecX m = VecX::Zero(mesh.num_vertices());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
    const double share = density * mesh.rest_volume[t] / 4.0;
    for (int v : mesh.tets[t]) m[v] += share;
  }
  return m;
}

double bbox_diagonal(const std::vector<SimMesh>& bodies) {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (const auto& b : bodies) {
    if (b.vertices.cols() == 0) continue;
    lo = lo.cwiseMin(b.vertices.rowwise().minCoeff());
    hi = hi.cwiseMax(b.vertices.rowwise().maxCoeff());
  }
  if (!(hi.x() >= lo.x())) return 0;
  return (hi - lo).norm();
}

void transform_mesh(SimMesh& mesh, double scale, const Mat3& rotation, const Vec3& translation) {
  mesh.vertices = (rotation * (scale * mesh.vertices)).colwise() + translation;
  mesh.rest_vertices = (rotation * (scale * mesh.rest_vertices)).colwise() + translation;
  if (!mesh.tets.empty()) cache_rest_data(mesh);
}

SimMesh merge_bodies(const std::vector<SimMesh>& bodies) {
  SimMesh out;
  int nv = 0;
  for (const auto& b : bodies) nv += b.num_vertices();
  out.vertices.resize(3, nv);
  out.rest_vertices.resize(3, nv);
  out.vertex_mass.resize(nv);
  int offset = 0;
  for (std::size_t bi = 0; bi < bodies.size(); ++bi) {
    const auto& b = bodies[bi];
    const int n = b.num_vertices();
    out.vertices.middleCols(offset, n) = b.vertices;
    out.rest_vertices.middleCols(offset, n) = b.rest_vertices;
    out.vertex_mass.segment(offset, n) = b.vertex_mass;
    out.is_fixed.insert(out.is_fixed.end(), b.is_fixed.begin(), b.is_fixed.end());
    out.vertex_body.insert(out.vertex_body.end(), n, static_cast<int>(bi));
    for (std::size_t t = 0; t < b.tets.size(); ++t) {
      auto tet = b.tets[t];
      for (int& v : tet) v += offset;
      out.tets.push_back(tet);
      out.rest_volume.push_back(b.rest_volume[t]);
      out.rest_inv.push_back(b.rest_inv[t]);
      out.tet_body.push_back(static_cast<int>(bi));
    }
    for (auto tri : b.surface_tris) {
      for (int& v : tri) v += offset;
      out.surface_tris.push_back(tri);
    }
    for (auto e : b.surface_edges) {
      for (int& v : e) v += offset;
      out.surface_edges.push_back(e);
    }
    for (int v : b.surface_verts) out.surface_verts.push_back(v + offset);
    offset += n;
  }
  return out;
}

void write_obj(const std::filesystem::path& path, const Positions& x,
               const std::vector<std::array<int, 3>>& tris) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    out << "v " << x(0, i) << ' ' << x(1, i) << ' ' << x(2, i) << '\n';
  }
  for (const auto& t : tris) out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

}  // namespace gipc
