#pragma once

#include <functional>
#include <optional>

#include "stokes2p/fe_space.hpp"

namespace stokes2p {

struct BulkNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1() const { return std::sqrt(l2 * l2 + h1_semi * h1_semi); }
};

struct CurveNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1() const { return std::sqrt(l2 * l2 + h1_semi * h1_semi); }
};

// Norms of a scalar field given by values at every geometry node.
// `boost` raises the quadrature degree above the assembly default 2k+2.
BulkNorms scalar_norms(const CurvedMesh& mesh, const Eigen::VectorXd& nodal, int boost = 0);

// Norms of the error against an analytic field (gradient needed for H1).
BulkNorms scalar_error_norms(const CurvedMesh& mesh, const Eigen::VectorXd& nodal,
                             const std::function<double(const Vec2&)>& f,
                             const std::function<Vec2(const Vec2&)>& grad_f, int boost = 0);

// Norms of a velocity dof vector (constrained nodes contribute zero).
BulkNorms velocity_norms(const CurvedMesh& mesh, const FeSystem& sys,
                         const Eigen::VectorXd& u, int boost = 0);

// L2 norm of a pressure dof vector; optionally restricted to one phase.
double pressure_l2(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                   std::optional<Phase> phase = std::nullopt, int boost = 0);

double pressure_error_l2(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                         const std::function<double(const Vec2&, Phase)>& f,
                         std::optional<Phase> phase = std::nullopt, int boost = 0);

// Integral and per-phase means of a pressure field.
double pressure_integral(const CurvedMesh& mesh, const FeSystem& sys, const Eigen::VectorXd& p,
                         std::optional<Phase> phase = std::nullopt);

// Norms of an interface dof vector along the curved interface cycle.
CurveNorms interface_norms(const CurvedMesh& mesh, const FeSystem& sys,
                           const Eigen::VectorXd& v, int boost = 0);

// L2 distance between an interface dof vector and an analytic curve field.
double interface_error_l2(const CurvedMesh& mesh, const FeSystem& sys,
                          const Eigen::VectorXd& v,
                          const std::function<Vec2(const Vec2&)>& exact, int boost = 0);

}  // namespace stokes2p
