#include "stokes2p/scheme.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "stokes2p/mesh_io.hpp"
#include "stokes2p/norms.hpp"
#include "stokes2p/vtk.hpp"

namespace stokes2p {

SparseMat SaddleSystem::monolithic() const {
  const int nu = n_u(), np = n_p();
  const int off_p = nu, off_l = nu + np, off_k = nu + np + 1;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(viscous.nonZeros() + 2 * divergence.nonZeros() + 2 * np +
                2 * mass_trace.nonZeros() + stiffness_trace.nonZeros() + iface_mass.nonZeros());
  for (int c = 0; c < viscous.outerSize(); ++c)
    for (SparseMat::InnerIterator it(viscous, c); it; ++it)
      trips.emplace_back(it.row(), it.col(), it.value());
  for (int c = 0; c < divergence.outerSize(); ++c)
    for (SparseMat::InnerIterator it(divergence, c); it; ++it) {
      trips.emplace_back(off_p + it.row(), it.col(), it.value());   // B u
      trips.emplace_back(it.col(), off_p + it.row(), -it.value());  // -B^T p
    }
  for (int i = 0; i < np; ++i) {
    trips.emplace_back(off_p + i, off_l, mean[i]);  // c lambda
    trips.emplace_back(off_l, off_p + i, mean[i]);  // c^T p
  }
  for (int c = 0; c < mass_trace.outerSize(); ++c)
    for (SparseMat::InnerIterator it(mass_trace, c); it; ++it)
      trips.emplace_back(it.col(), off_k + it.row(), it.value());  // C^T kappa
  for (int c = 0; c < stiffness_trace.outerSize(); ++c)
    for (SparseMat::InnerIterator it(stiffness_trace, c); it; ++it)
      trips.emplace_back(off_k + it.row(), it.col(), tau * it.value());  // tau SR u
  for (int c = 0; c < iface_mass.outerSize(); ++c)
    for (SparseMat::InnerIterator it(iface_mass, c); it; ++it)
      trips.emplace_back(off_k + it.row(), off_k + it.col(), -it.value());  // -M kappa
  SparseMat full(size(), size());
  full.setFromTriplets(trips.begin(), trips.end());
  return full;
}

Eigen::VectorXd SaddleSystem::rhs() const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(size());
  r.tail(n_k()) = rhs_kappa;
  return r;
}

SaddleSystem build_step_system(const CurvedMesh& mesh, const FeSystem& sys, double tau,
                               double nu_minus, double nu_plus) {
  SaddleSystem s;
  s.tau = tau;
  s.viscous = assemble_viscous(mesh, sys, nu_minus, nu_plus);
  s.divergence = assemble_divergence(mesh, sys);
  s.mean = assemble_pressure_mean(mesh, sys);
  InterfaceOperators ops = assemble_interface(mesh, sys);
  s.iface_mass = std::move(ops.mass);
  s.iface_stiffness = std::move(ops.stiffness);
  s.mass_trace = std::move(ops.mass_trace);
  s.stiffness_trace = std::move(ops.stiffness_trace);
  s.rhs_kappa = -(s.iface_stiffness * sys.interface_positions(mesh));
  return s;
}

namespace {

StepSolution split_solution(const SaddleSystem& sys, const Eigen::VectorXd& x,
                            double rel_residual) {
  StepSolution sol;
  sol.u = x.head(sys.n_u());
  sol.p = x.segment(sys.n_u(), sys.n_p());
  sol.lambda_mean = x[sys.n_u() + sys.n_p()];
  sol.kappa = x.tail(sys.n_k());
  sol.relative_residual = rel_residual;
  return sol;
}

}  // namespace

StepSolution solve_step(const SaddleSystem& sys) {
  StepSolver solver;
  return solver.solve(sys);
}

StepSolution StepSolver::solve(const SaddleSystem& sys) {
  const SparseMat full = sys.monolithic();
  const Eigen::VectorXd rhs = sys.rhs();
  if (!lu_) lu_ = std::make_unique<Eigen::SparseLU<SparseMat>>();
  if (!analyzed_) {
    lu_->analyzePattern(full);
    analyzed_ = true;
  }
  lu_->factorize(full);
  if (lu_->info() != Eigen::Success)
    throw SingularSystem("sparse LU factorization failed (degenerate mesh or invalid pairing)");
  const Eigen::VectorXd x = lu_->solve(rhs);
  const double rhs_norm = rhs.norm();
  const double rel = rhs_norm > 0.0 ? (full * x - rhs).norm() / rhs_norm : (full * x).norm();
  if (!(rel <= 1e-10))
    throw SingularSystem("step solve residual " + format_double(rel) + " exceeds 1e-10");
  return split_solution(sys, x, rel);
}

StateSnapshot advance(const StateSnapshot& solved, const FeSystem& sys, double tau) {
  std::vector<Vec2> d(solved.mesh.num_nodes(), Vec2::Zero());
  for (int node = 0; node < solved.mesh.num_nodes(); ++node) {
    const int gi = sys.velocity_node_index(node);
    if (gi >= 0) d[node] = tau * Vec2(solved.u[2 * gi], solved.u[2 * gi + 1]);
  }
  StateSnapshot next;
  next.m = solved.m + 1;
  next.t = solved.t + tau;
  next.mesh = displace(solved.mesh, d);
  next.kappa = solved.kappa;
  next.metrics = shape_metrics(next.mesh);
  return next;
}

std::string diagnostics_csv_header() {
  return "step,t,perimeter,area_minus,dissipation,energy_residual,u_H1,p_L2,kappa_L2,"
         "min_scaled_jacobian,kappa_mesh,kappa_star_mesh";
}

std::string diagnostics_csv_line(const DiagnosticsRow& r) {
  std::string line = std::to_string(r.step);
  for (double v : {r.t, r.perimeter, r.area_minus, r.dissipation, r.energy_residual, r.u_h1,
                   r.p_l2, r.kappa_l2, r.min_scaled_jacobian, r.kappa_mesh, r.kappa_star_mesh})
    line += "," + format_double(v);
  return line;
}

RunResult run(const RunConfig& cfg, const std::string& out_dir) {
  RunResult result;
  const InterfaceDescriptor desc = cfg.make_descriptor();
  const FlatFittedMesh flat = generate_fitted_mesh(cfg.domain, desc, cfg.target_h);
  CurvedMesh mesh = lenoir_curve(flat, desc, cfg.k);
  const FeSystem sys(mesh);

  const double tau = cfg.tau();
  const int n_steps =
      cfg.final_time <= 0.0
          ? 0
          : static_cast<int>(std::ceil(cfg.final_time / tau - 1e-9));

  std::ofstream csv;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    csv.open(out_dir + "/diagnostics.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open diagnostics.csv in " + out_dir);
    csv << diagnostics_csv_header() << "\n";
  }

  StateSnapshot state;
  state.m = 0;
  state.t = 0.0;
  state.mesh = std::move(mesh);
  state.metrics = shape_metrics(state.mesh);

  StepSolver solver;
  for (int m = 0; m <= n_steps; ++m) {
    const SaddleSystem step = build_step_system(state.mesh, sys, tau, cfg.nu_minus, cfg.nu_plus);
    StepSolution sol;
    try {
      sol = solver.solve(step);
    } catch (const SingularSystem& err) {
      result.aborted = true;
      result.abort_reason = err.what();
      break;
    }
    state.u = std::move(sol.u);
    state.p = std::move(sol.p);
    state.kappa = std::move(sol.kappa);
    state.lambda_mean = sol.lambda_mean;

    DiagnosticsRow row;
    row.step = state.m;
    row.t = state.t;
    row.perimeter = interface_length(state.mesh);
    row.area_minus = phase_areas(state.mesh).minus;
    row.dissipation = state.u.dot(step.viscous * state.u);
    row.u_h1 = velocity_norms(state.mesh, sys, state.u).h1();
    row.p_l2 = pressure_l2(state.mesh, sys, state.p);
    row.kappa_l2 = interface_norms(state.mesh, sys, state.kappa).l2;
    row.min_scaled_jacobian = state.metrics.min_scaled_jacobian;
    row.kappa_mesh = state.metrics.kappa;
    row.kappa_star_mesh = state.metrics.kappa_star;
    row.energy_residual = std::numeric_limits<double>::quiet_NaN();

    if (!out_dir.empty() && state.m % cfg.snapshot_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "/snapshot_%06d.vtk", state.m);
      write_vtk(out_dir + name, state.mesh, sys, state.u, state.p);
    }

    if (m < n_steps) {
      StateSnapshot next;
      try {
        next = advance(state, sys, tau);
      } catch (const JacobianFlip& err) {
        result.aborted = true;
        result.abort_reason = err.what();
        result.rows.push_back(row);
        if (csv.is_open()) csv << diagnostics_csv_line(row) << "\n" << std::flush;
        result.final_state = std::move(state);
        if (csv.is_open()) csv.close();
        return result;
      }
      row.energy_residual =
          (interface_length(next.mesh) - row.perimeter) / tau + row.dissipation;
      result.rows.push_back(row);
      if (csv.is_open()) csv << diagnostics_csv_line(row) << "\n" << std::flush;
      next.u = state.u;  // carry the last solved fields for inspection
      next.p = state.p;
      next.lambda_mean = state.lambda_mean;
      state = std::move(next);
    } else {
      result.rows.push_back(row);
      if (csv.is_open()) csv << diagnostics_csv_line(row) << "\n" << std::flush;
    }
  }

  result.final_state = std::move(state);
  if (csv.is_open()) csv.close();
  return result;
}

}  // namespace stokes2p
