#include "gipc/proximity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace gipc {

namespace {

bool overlaps(const Aabb& a, const Aabb& b) {
  return (a.lo.array() <= b.hi.array()).all() && (b.lo.array() <= a.hi.array()).all();
}

struct SweepItem {
  double lo;
  int set;
  int idx;
};

std::vector<std::pair<int, int>> sweep(const std::vector<Aabb>& a, const std::vector<Aabb>* b) {
  std::vector<SweepItem> items;
  items.reserve(a.size() + (b ? b->size() : 0));
  for (std::size_t i = 0; i < a.size(); ++i) items.push_back({a[i].lo.x(), 0, static_cast<int>(i)});
  if (b) {
    for (std::size_t i = 0; i < b->size(); ++i) items.push_back({(*b)[i].lo.x(), 1, static_cast<int>(i)});
  }
  std::sort(items.begin(), items.end(), [](const SweepItem& l, const SweepItem& r) {
    return std::tie(l.lo, l.set, l.idx) < std::tie(r.lo, r.set, r.idx);
  });
  const std::vector<Aabb>* sets[2] = {&a, b ? b : &a};
  std::vector<int> active[2];
  std::vector<std::pair<int, int>> out;
  for (const auto& item : items) {
    const Aabb& box = (*sets[item.set])[item.idx];
    const int other = b ? 1 - item.set : 0;
    for (int s = 0; s < 2; ++s) {
      auto& act = active[s];
      act.erase(std::remove_if(act.begin(), act.end(),
                               [&](int j) { return (*sets[s])[j].hi.x() < item.lo; }),
                act.end());
    }
    for (int j : active[other]) {
      if (!overlaps(box, (*sets[other])[j])) continue;
      if (!b) {
        out.emplace_back(std::min(j, item.idx), std::max(j, item.idx));
      } else if (item.set == 0) {
        out.emplace_back(item.idx, j);
      } else {
        out.emplace_back(j, item.idx);
      }
    }
    active[item.set].push_back(item.idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

template <int N>
Aabb box_of(const Positions& x, const std::array<int, N>& ids, const Positions* dx, double inflate) {
  Aabb box{Vec3::Constant(std::numeric_limits<double>::infinity()),
           Vec3::Constant(-std::numeric_limits<double>::infinity())};
  for (int v : ids) {
    box.lo = box.lo.cwiseMin(x.col(v));
    box.hi = box.hi.cwiseMax(x.col(v));
    if (dx) {
      const Vec3 y = x.col(v) + dx->col(v);
      box.lo = box.lo.cwiseMin(y);
      box.hi = box.hi.cwiseMax(y);
    }
  }
  box.lo.array() -= inflate;
  box.hi.array() += inflate;
  return box;
}

bool all_fixed(const SimMesh& mesh, std::initializer_list<int> ids) {
  return std::all_of(ids.begin(), ids.end(), [&](int v) { return mesh.is_fixed[v] != 0; });
}

void sort2(int& a, int& b) {
  if (b < a) std::swap(a, b);
}

ContactStencil canonical(ContactStencil s) {
  auto& v = s.verts;
  switch (distance_kind(s.kind)) {
    case StencilKind::PointPoint: sort2(v[0], v[1]); break;
    case StencilKind::PointEdge: sort2(v[1], v[2]); break;
    case StencilKind::PointTriangle: std::sort(v.begin() + 1, v.end()); break;
    default:
      sort2(v[0], v[1]);
      sort2(v[2], v[3]);
      if (std::tie(v[2], v[3]) < std::tie(v[0], v[1])) {
        std::swap(v[0], v[2]);
        std::swap(v[1], v[3]);
      }
  }
  if (is_parallel(s.kind)) {
    auto& e = s.edge_pair;
    sort2(e[0], e[1]);
    sort2(e[2], e[3]);
    if (std::tie(e[2], e[3]) < std::tie(e[0], e[1])) {
      std::swap(e[0], e[2]);
      std::swap(e[1], e[3]);
    }
  }
  return s;
}

}  // namespace

std::vector<std::pair<int, int>> overlapping_pairs(const std::vector<Aabb>& a, const std::vector<Aabb>& b) {
  return sweep(a, &b);
}

std::vector<std::pair<int, int>> overlapping_pairs(const std::vector<Aabb>& a) { return sweep(a, nullptr); }

std::vector<PrimitivePair> candidate_pairs(const SimMesh& mesh, const Positions& x, const Positions* dx,
                                           double inflate) {
  std::vector<Aabb> points, tris, edges;
  for (int v : mesh.surface_verts) points.push_back(box_of<1>(x, {v}, dx, inflate));
  for (const auto& t : mesh.surface_tris) tris.push_back(box_of<3>(x, t, dx, 0));
  for (const auto& e : mesh.surface_edges) edges.push_back(box_of<2>(x, e, dx, inflate * 0.5));

  std::vector<PrimitivePair> out;
  for (auto [i, j] : overlapping_pairs(points, tris)) {
    const int p = mesh.surface_verts[i];
    const auto& t = mesh.surface_tris[j];
    if (p == t[0] || p == t[1] || p == t[2]) continue;
    if (all_fixed(mesh, {p, t[0], t[1], t[2]})) continue;
    out.push_back({StencilKind::PointTriangle, {p, t[0], t[1], t[2]}});
  }
  for (auto [i, j] : overlapping_pairs(edges)) {
    const auto& a = mesh.surface_edges[i];
    const auto& b = mesh.surface_edges[j];
    if (a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1]) continue;
    if (all_fixed(mesh, {a[0], a[1], b[0], b[1]})) continue;
    out.push_back({StencilKind::EdgeEdge, {a[0], a[1], b[0], b[1]}});
  }
  return out;
}

double primitive_distance2(const PrimitivePair& pair, const Positions& x) {
  const auto& v = pair.verts;
  if (pair.kind == StencilKind::PointTriangle) {
    return classify_point_triangle(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3])).dist.d2;
  }
  return classify_edge_edge(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3])).dist.d2;
}

std::vector<ContactStencil> find_contact_pairs(const SimMesh& mesh, const Positions& x, double d_hat,
                                               const ProximityOptions& options) {
  if (!(d_hat > 0)) throw Error("d_hat must be positive");
  const double d_hat2 = d_hat * d_hat;
  std::vector<ContactStencil> out;
  for (const auto& pair : candidate_pairs(mesh, x, nullptr, d_hat)) {
    const auto& v = pair.verts;
    const bool pt = pair.kind == StencilKind::PointTriangle;
    const double eps_x = !pt && options.promote_parallel ? parallel_tolerance(mesh, v, options.eps_x_scale) : 0.0;
    const Classification cls = pt ? classify_point_triangle(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3]))
                                  : classify_edge_edge(x.col(v[0]), x.col(v[1]), x.col(v[2]), x.col(v[3]), eps_x);
    if (!(cls.dist.d2 < d_hat2)) continue;
    if (!(cls.dist.d2 > 0)) {
      throw Error(std::string("zero distance on ") + kind_name(cls.kind) + " stencil (" + std::to_string(v[0]) +
                  ", " + std::to_string(v[1]) + ", " + std::to_string(v[2]) + ", " + std::to_string(v[3]) + ")");
    }
    ContactStencil s;
    s.kind = cls.kind;
    for (int k = 0; k < kind_vertex_count(cls.kind); ++k) s.verts[k] = v[cls.local[k]];
    if (is_parallel(cls.kind)) {
      s.edge_pair = v;
      s.eps_x = eps_x;
    }
    s = canonical(s);
    bool free_dof = false;
    for (int k = 0; k < s.num_dofs(); ++k) free_dof |= mesh.is_fixed[s.dof(k)] == 0;
    if (!free_dof) continue;
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  std::vector<ContactStencil> merged;
  for (const auto& s : out) {
    if (!merged.empty() && merged.back() == s) {
      ++merged.back().multiplicity;
    } else {
      merged.push_back(s);
    }
  }
  return merged;
}

double minimum_distance(const SimMesh& mesh, const Positions& x, double radius) {
  double best = radius * radius;
  for (const auto& pair : candidate_pairs(mesh, x, nullptr, radius)) {
    best = std::min(best, primitive_distance2(pair, x));
  }
  return std::sqrt(best);
}

}  // namespace gipc
