#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stokes2p/assembly.hpp"
#include "stokes2p/config.hpp"

namespace stokes2p {

// Discrete state at one time level. Field vectors are empty until the level
// has been solved; the mesh node positions carry the domain parametrization.
struct StateSnapshot {
  int m = 0;
  double t = 0.0;
  CurvedMesh mesh;
  Eigen::VectorXd u, p, kappa;
  double lambda_mean = 0.0;
  ShapeMetrics metrics;
};

// Per-step coupled linear system in the unknown layout [u | p | lambda | kappa]:
//   A u - B^T p           + C^T kappa = 0
//   B u        + c lambda             = 0
//       c^T p                         = 0
//   tau*SR u              - M kappa   = -S x_interface
// where C and SR act on the velocity trace along the interface. The fourth
// row is the curve equation with the next positions eliminated through the
// nodal update X^{m+1} = X^m + tau*u.
struct SaddleSystem {
  SparseMat viscous;           // A, n_u x n_u
  SparseMat divergence;        // B, n_p x n_u
  Eigen::VectorXd mean;        // c, n_p
  SparseMat iface_mass;        // M, n_k x n_k
  SparseMat iface_stiffness;   // S, n_k x n_k
  SparseMat mass_trace;        // C, n_k x n_u
  SparseMat stiffness_trace;   // SR, n_k x n_u
  Eigen::VectorXd rhs_kappa;   // -S x_interface
  double tau = 0.0;

  int n_u() const { return static_cast<int>(viscous.rows()); }
  int n_p() const { return static_cast<int>(divergence.rows()); }
  int n_k() const { return static_cast<int>(iface_mass.rows()); }
  int size() const { return n_u() + n_p() + 1 + n_k(); }

  SparseMat monolithic() const;
  Eigen::VectorXd rhs() const;
};

SaddleSystem build_step_system(const CurvedMesh& mesh, const FeSystem& sys, double tau,
                               double nu_minus, double nu_plus);

struct StepSolution {
  Eigen::VectorXd u, p, kappa;
  double lambda_mean = 0.0;
  double relative_residual = 0.0;
};

// Direct sparse solve of the monolithic system; throws SingularSystem when
// the factorization fails or the residual stays above 1e-10 * |rhs|.
StepSolution solve_step(const SaddleSystem& sys);

// Same, but reusing the symbolic factorization across time steps (the
// sparsity pattern is fixed because the mesh topology never changes).
class StepSolver {
 public:
  StepSolution solve(const SaddleSystem& sys);

 private:
  std::unique_ptr<Eigen::SparseLU<SparseMat>> lu_;
  bool analyzed_ = false;
};

// Moves every mesh node by tau * u (zero at constrained boundary nodes) and
// returns the next, not-yet-solved state. Throws JacobianFlip if the moved
// mesh tangles.
StateSnapshot advance(const StateSnapshot& solved, const FeSystem& sys, double tau);

struct DiagnosticsRow {
  int step = 0;
  double t = 0.0;
  double perimeter = 0.0;
  double area_minus = 0.0;
  double dissipation = 0.0;
  double energy_residual = 0.0;  // NaN when the level has no successor
  double u_h1 = 0.0;
  double p_l2 = 0.0;
  double kappa_l2 = 0.0;
  double min_scaled_jacobian = 0.0;
  double kappa_mesh = 0.0;
  double kappa_star_mesh = 0.0;
};

std::string diagnostics_csv_header();
std::string diagnostics_csv_line(const DiagnosticsRow& row);

struct RunResult {
  std::vector<DiagnosticsRow> rows;
  StateSnapshot final_state;  // solved fields at the last reached level
  bool aborted = false;
  std::string abort_reason;
};

// Full time integration per the configuration. When out_dir is non-empty,
// writes diagnostics.csv and VTK snapshots there (directory must exist or
// be creatable). A zero-duration run still solves the initial level.
RunResult run(const RunConfig& cfg, const std::string& out_dir = "");

}  // namespace stokes2p
