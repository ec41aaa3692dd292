#pragma once

#include <optional>

#include "stokes2p/scheme.hpp"

namespace stokes2p {

struct ErrorRecord {
  double h = 0.0;
  double tau = 0.0;
  double u_h1 = 0.0;      // velocity error, H1
  double p_l2 = 0.0;      // pressure error, broken L2
  double x_h1 = 0.0;      // interface position error, H1 on the cycle
  double kappa_l2 = 0.0;  // curvature error, L2 on the cycle
  double pressure_jump = 0.0;  // relative Laplace-Young defect
  std::string source;          // "exact_circle" or "reference_run"
};

struct EocTable {
  struct Rates {
    double u_h1, p_l2, x_h1, kappa_l2, pressure_jump;
  };
  std::vector<ErrorRecord> records;
  std::vector<Rates> rates;  // between consecutive levels
  std::string to_csv() const;
  std::string to_text() const;
};

// Rates log(e_i/e_{i+1}) / log(h_i/h_{i+1}); needs >= 2 levels with
// strictly decreasing h.
EocTable eoc(const std::vector<ErrorRecord>& records);

// Nodal projection error: interface node positions minus their closest
// points on the exact curve, with its H1 norm along the discrete interface.
struct ProjectionError {
  Eigen::VectorXd nodal;  // interface dof layout
  double h1 = 0.0;
};
ProjectionError projection_error(const CurvedMesh& mesh, const FeSystem& sys,
                                 const InterfaceDescriptor& desc);

// Error norms of a solved state against the stationary-circle solution
// (u = 0, piecewise-constant pressure with jump 1/R, curvature (1/R) n).
ErrorRecord theorem_errors_exact_circle(const StateSnapshot& state, const FeSystem& sys,
                                        const InterfaceDescriptor& circle, double h, double tau);

// Relative static force-balance defect |(mean p_minus - mean p_plus) - 1/R| * R.
double laplace_young_error(const CurvedMesh& mesh, const FeSystem& sys,
                           const Eigen::VectorXd& p, double radius);

// Self-convergence error norms: the comparison fields come from an overkill
// reference run evaluated at the coarse mesh's physical node positions.
ErrorRecord theorem_errors_reference(const StateSnapshot& coarse, const FeSystem& coarse_sys,
                                     const StateSnapshot& ref, const FeSystem& ref_sys,
                                     double h, double tau);

// ----- moving-domain identity checks -----

// Integral of the product of two scalar nodal interface fields over the
// curve given by explicit interface node positions (dof layout).
double interface_product_integral(const CurvedMesh& mesh, const FeSystem& sys,
                                  const Eigen::VectorXd& positions, const Eigen::VectorXd& f,
                                  const Eigen::VectorXd& g);

// int_Gamma f g (div_Gamma e) with e a nodal interface displacement.
double interface_transport_form(const CurvedMesh& mesh, const FeSystem& sys,
                                const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                const Eigen::VectorXd& e);

// Bulk analogues on the whole mesh: f, g scalar nodal; d one vector per node.
double bulk_product_integral(const CurvedMesh& mesh, const Eigen::VectorXd& f,
                             const Eigen::VectorXd& g);
double bulk_transport_form(const CurvedMesh& mesh, const Eigen::VectorXd& f,
                           const Eigen::VectorXd& g, const std::vector<Vec2>& d);

struct IdentityReport {
  struct Check {
    std::string name;
    double value;
    double threshold;
    bool pass;
    bool larger_is_better;
  };
  std::vector<Check> checks;
  bool all_pass() const;
  std::string to_text() const;  // one PASS/FAIL line per check
};

// Finite-difference transport checks on the given mesh plus the closed-curve
// integration-by-parts identity on an analytic circle.
IdentityReport identity_suite(const CurvedMesh& mesh, const FeSystem& sys);

// ----- point location and dense interface sampling -----

class PointLocator {
 public:
  explicit PointLocator(const CurvedMesh& mesh);
  struct Hit {
    int elem;
    double xi, eta;
  };
  std::optional<Hit> locate(const Vec2& x, std::optional<Phase> phase = std::nullopt) const;

 private:
  const CurvedMesh& mesh_;
  int nx_, ny_;
  Rect box_;
  std::vector<std::vector<int>> bins_;
};

double evaluate_scalar_at(const CurvedMesh& mesh, const Eigen::VectorXd& nodal,
                          const PointLocator::Hit& hit);
Vec2 evaluate_velocity_at(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& u,
                          const PointLocator::Hit& hit);
double evaluate_pressure_at(const CurvedMesh& mesh, const FeSystem& sys,
                            const Eigen::VectorXd& p, const PointLocator::Hit& hit);

// Dense polyline sampling of the discrete interface, with closest-point
// queries that report the owning edge and edge parameter.
class InterfacePolyline {
 public:
  InterfacePolyline(const CurvedMesh& mesh, const FeSystem& sys, int per_edge);
  struct Foot {
    Vec2 point;
    int edge;
    double t;
    double dist;
  };
  Foot closest(const Vec2& x) const;

  // Evaluate an interface dof vector at (edge, t).
  Vec2 evaluate(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& v,
                int edge, double t) const;

 private:
  std::vector<Vec2> points_;
  std::vector<int> edge_;
  std::vector<double> t_;
};

// Two-sided Hausdorff distance between the discrete interface and the exact
// curve, from dense samples on both.
double interface_hausdorff(const CurvedMesh& mesh, const InterfaceDescriptor& desc,
                           int per_edge = 64);

// Weak curvature solve M kappa = S id on the interface cycle.
Eigen::VectorXd solve_interface_curvature(const CurvedMesh& mesh, const FeSystem& sys);

}  // namespace stokes2p
