#include "gipc/solver.hpp"

#include <chrono>
#include <cmath>

namespace gipc {

double exhaustive_min_distance(const SimMesh& mesh, const Positions& x) {
  double best = std::numeric_limits<double>::infinity();
  for (int p : mesh.surface_verts) {
    for (const auto& t : mesh.surface_tris) {
      if (p == t[0] || p == t[1] || p == t[2]) continue;
      if (mesh.is_fixed[p] && mesh.is_fixed[t[0]] && mesh.is_fixed[t[1]] && mesh.is_fixed[t[2]]) continue;
      best = std::min(best, primitive_distance2({StencilKind::PointTriangle, {p, t[0], t[1], t[2]}}, x));
    }
  }
  const auto& E = mesh.surface_edges;
  for (std::size_t i = 0; i < E.size(); ++i) {
    for (std::size_t j = i + 1; j < E.size(); ++j) {
      const auto& a = E[i];
      const auto& b = E[j];
      if (a[0] == b[0] || a[0] == b[1] || a[1] == b[0] || a[1] == b[1]) continue;
      if (mesh.is_fixed[a[0]] && mesh.is_fixed[a[1]] && mesh.is_fixed[b[0]] && mesh.is_fixed[b[1]]) continue;
      best = std::min(best, primitive_distance2({StencilKind::EdgeEdge, {a[0], a[1], b[0], b[1]}}, x));
    }
  }
  return std::sqrt(best);
}

Simulation::Simulation(const Scene& scene, std::vector<ElasticMaterial> body_materials, const SolverConfig& config)
    : mesh_(merge_bodies(scene.bodies)), config_(config), gravity_(scene.gravity) {
  if (!(config.dt > 0) || !(config.eps_d > 0) || !(config.pcg_rel_tol > 0)) {
    throw Error("solver tolerances and dt must be positive");
  }
  if (body_materials.size() < scene.bodies.size()) throw Error("one material per body required");
  l_ = scene.bbox_diagonal > 0 ? scene.bbox_diagonal : gipc::bbox_diagonal(scene.bodies);
  if (!(l_ > 0)) throw Error("scene has zero extent");
  for (int b : mesh_.tet_body) tet_material_.push_back(body_materials[b]);
  const int n = mesh_.num_vertices();
  for (int i = 0; i < n; ++i) {
    if (!mesh_.is_fixed[i] && !(mesh_.vertex_mass[i] > 0)) {
      throw Error("free vertex " + std::to_string(i) + " has no mass");
    }
  }
  x_ = mesh_.vertices;
  v_ = Positions::Zero(3, n);
  x_prev_ = x_;
  x_tilde_ = x_;
  mass_ = VecX::Zero(3 * n);
  for (int i = 0; i < n; ++i) mass_.segment<3>(3 * i).setConstant(mesh_.vertex_mass[i]);
  // Fail early on an invalid initial state.
  detect(x_);
}

std::vector<ContactStencil> Simulation::detect(const Positions& x) const {
  ProximityOptions opt;
  opt.promote_parallel = config_.mollify;
  return find_contact_pairs(mesh_, x, config_.barrier.d_hat, opt);
}

void Simulation::begin_step() {
  const double dt = config_.dt;
  x_prev_ = x_;
  x_tilde_ = x_;
  for (int i = 0; i < mesh_.num_vertices(); ++i) {
    if (mesh_.is_fixed[i]) continue;
    x_tilde_.col(i) += dt * v_.col(i) + dt * dt * gravity_;
  }
  friction_.clear();
  if (config_.friction_mu > 0) {
    friction_ = update_friction_state(detect(x_), x_, config_.barrier, config_.mode == SolverMode::ReferenceIpc,
                                      config_.friction_mu, config_.friction_eps_v, dt);
  }
}

double Simulation::barrier_energy(const Positions& x, const std::vector<ContactStencil>& contacts) const {
  const auto& bp = config_.barrier;
  double sum = 0;
  for (const auto& s : contacts) {
    if (config_.mode == SolverMode::ReferenceIpc) {
      sum += s.multiplicity * reference_ipc_energy(s, x, bp);
      continue;
    }
    const double g = stencil_distance(s, x).d2 / (bp.d_hat * bp.d_hat);
    if (is_parallel(s.kind)) {
      const auto& e = s.edge_pair;
      sum += s.multiplicity *
             mollified_barrier_value(g, edge_parallel_measure(x.col(e[0]), x.col(e[1]), x.col(e[2]), x.col(e[3])), bp,
                                     s.eps_x);
    } else {
      sum += s.multiplicity * barrier_value(g, bp);
    }
  }
  return sum;
}

double Simulation::evaluate_energy(const Positions& x) const {
  const double dt = config_.dt;
  double inertia = 0;
  for (int i = 0; i < mesh_.num_vertices(); ++i) {
    if (mesh_.is_fixed[i]) continue;
    inertia += 0.5 * mesh_.vertex_mass[i] * (x.col(i) - x_tilde_.col(i)).squaredNorm();
  }
  double elastic = 0;
  for (std::size_t t = 0; t < mesh_.tets.size(); ++t) {
    const auto& tet = mesh_.tets[t];
    const Mat3 F = deformation_gradient(mesh_.rest_inv[t], x.col(tet[0]), x.col(tet[1]), x.col(tet[2]), x.col(tet[3]));
    elastic += mesh_.rest_volume[t] * snh_energy(F, tet_material_[t]);
  }
  const double barrier = barrier_energy(x, detect(x));
  double friction = 0;
  for (const auto& fd : friction_) friction += friction_potential(fd, tangential_displacement(fd, x, x_prev_));
  return inertia + dt * dt * (elastic + barrier + friction);
}

LocalQuadratic Simulation::barrier_quadratic(const ContactStencil& s, const Positions& x) const {
  const auto& bp = config_.barrier;
  if (config_.mode == SolverMode::ReferenceIpc) return reference_ipc_local_quadratic(s, x, bp, 1e-6 * l_);
  const DiagonalJacobian J = build_diagonal_jacobian(s, x, bp.d_hat);
  if (is_parallel(s.kind)) return build_mollified_local_quadratic(s, J, bp);
  return build_local_quadratic(s, J, bp);
}

std::vector<LocalQuadratic> Simulation::assemble_local_quadratics(const Positions& x,
                                                                  const std::vector<ContactStencil>& contacts) const {
  const double dt2 = config_.dt * config_.dt;
  std::vector<LocalQuadratic> blocks;
  blocks.reserve(mesh_.tets.size() + contacts.size() + friction_.size());
  for (std::size_t t = 0; t < mesh_.tets.size(); ++t) {
    const auto& tet = mesh_.tets[t];
    const TetEnergy te = tet_energy_grad_hess(mesh_.rest_inv[t], x.col(tet[0]), x.col(tet[1]), x.col(tet[2]),
                                              x.col(tet[3]), tet_material_[t]);
    LocalQuadratic q;
    q.num_verts = 4;
    q.vert_ids = tet;
    q.grad = dt2 * mesh_.rest_volume[t] * te.grad;
    q.hess = dt2 * mesh_.rest_volume[t] * te.hess;
    blocks.push_back(std::move(q));
  }
  for (const auto& s : contacts) {
    LocalQuadratic q = barrier_quadratic(s, x);
    q.grad *= dt2 * s.multiplicity;
    q.hess *= dt2 * s.multiplicity;
    blocks.push_back(std::move(q));
  }
  for (const auto& fd : friction_) {
    LocalQuadratic q = friction_hessian_psd(fd, tangential_displacement(fd, x, x_prev_));
    q.grad *= dt2;
    q.hess *= dt2;
    blocks.push_back(std::move(q));
  }
  return blocks;
}

VecX Simulation::energy_gradient(const Positions& x, const std::vector<ContactStencil>& contacts) const {
  const int n = mesh_.num_vertices();
  VecX grad = mass_.cwiseProduct(flat(x) - flat(x_tilde_));
  for (const auto& q : assemble_local_quadratics(x, contacts)) {
    for (int i = 0; i < q.num_verts; ++i) grad.segment<3>(3 * q.vert_ids[i]) += q.grad.segment<3>(3 * i);
  }
  for (int i = 0; i < n; ++i) {
    if (mesh_.is_fixed[i]) grad.segment<3>(3 * i).setZero();
  }
  return grad;
}

BlockSystem Simulation::assemble_system(const Positions& x, const std::vector<ContactStencil>& contacts) const {
  BlockSystem sys;
  sys.mass = mass_;
  sys.blocks = assemble_local_quadratics(x, contacts);
  sys.fixed = mesh_.is_fixed;
  return sys;
}

NewtonResult Simulation::newton_step() {
  NewtonResult res;
  const double dt = config_.dt;
  const auto contacts = detect(x_);
  res.contacts = static_cast<int>(contacts.size());
  const double E0 = evaluate_energy(x_);

  BlockSystem sys;
  sys.mass = mass_;
  sys.fixed = mesh_.is_fixed;
  sys.blocks = assemble_local_quadratics(x_, contacts);
  VecX grad = mass_.cwiseProduct(flat(x_) - flat(x_tilde_));
  for (const auto& q : sys.blocks) {
    for (int i = 0; i < q.num_verts; ++i) grad.segment<3>(3 * q.vert_ids[i]) += q.grad.segment<3>(3 * i);
  }
  for (int i = 0; i < mesh_.num_vertices(); ++i) {
    if (mesh_.is_fixed[i]) grad.segment<3>(3 * i).setZero();
  }

  VecX d;
  if (config_.linear_solver == LinearSolverKind::Dense) {
    d = dense_solve(sys, -grad);
  } else {
    PcgResult pcg = pcg_solve(sys, -grad, config_.pcg_rel_tol, config_.pcg_max_iters);
    d = std::move(pcg.x);
    res.pcg_iters = pcg.iterations;
  }
  res.step_norm_rel = d.size() ? d.lpNorm<Eigen::Infinity>() / (l_ * dt) : 0.0;
  if (res.step_norm_rel <= config_.eps_d) {
    res.converged = true;
    return res;
  }

  Positions dx = Eigen::Map<const Positions>(d.data(), 3, mesh_.num_vertices());
  double alpha = std::min(1.0, global_ccd_filter(mesh_, x_, dx, config_.ccd_slack));
  while (true) {
    Positions xc = x_ + alpha * dx;
    if (config_.check_candidates) {
      const double m = exhaustive_min_distance(mesh_, xc);
      min_candidate_distance_ = std::min(min_candidate_distance_, m);
      if (!(m > 0)) throw Error("line-search candidate intersects");
    }
    if (evaluate_energy(xc) <= E0) {
      x_ = std::move(xc);
      break;
    }
    alpha *= 0.5;
    if (alpha < config_.alpha_floor) {
      res.line_search_failed = true;
      alpha = 0;
      break;
    }
  }
  res.alpha = alpha;
  return res;
}

StepDiagnostics Simulation::advance_time_step() {
  const auto t0 = std::chrono::steady_clock::now();
  StepDiagnostics diag;
  diag.step = step_ + 1;
  begin_step();
  for (int it = 0; it < config_.newton_max_iters; ++it) {
    const NewtonResult r = newton_step();
    ++diag.newton_iters;
    diag.pcg_iters += r.pcg_iters;
    diag.contacts = r.contacts;
    if (r.converged) {
      diag.converged = true;
      break;
    }
    diag.alpha_min = std::min(diag.alpha_min, r.alpha);
    if (r.line_search_failed) {
      diag.line_search_failed = true;
      break;
    }
  }
  v_ = (x_ - x_prev_) / config_.dt;
  ++step_;
  diag.energy = evaluate_energy(x_);
  diag.min_distance_rel = minimum_distance(mesh_, x_, 0.1 * l_) / l_;
  diag.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return diag;
}

}  // namespace gipc
