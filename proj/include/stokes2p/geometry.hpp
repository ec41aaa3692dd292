#pragma once

#include <Eigen/Dense>

#include "stokes2p/errors.hpp"

namespace stokes2p {

using Vec2 = Eigen::Vector2d;

// Analytic closed curve used as the phase interface. All three kinds are
// star-shaped about `center` and parametrized counterclockwise by
// t in [0, 2pi): the circle and star by polar angle, the ellipse by its
// standard trigonometric parameter.
//
// Sign conventions, fixed once here: the unit normal n points from the
// interior phase to the exterior one, and the scalar curvature H is
// positive when the interior is convex (a circle of radius R has H = 1/R).
// The signed distance is negative inside and positive outside.
class InterfaceDescriptor {
 public:
  enum class Kind { circle, ellipse, star };

  static InterfaceDescriptor circle(Vec2 center, double radius);
  static InterfaceDescriptor ellipse(Vec2 center, double a, double b);
  static InterfaceDescriptor star(Vec2 center, double r0, double amplitude, int lobes);

  Kind kind() const { return kind_; }
  const Vec2& center() const { return center_; }

  // Curve parametrization and its first two derivatives.
  Vec2 point(double t) const;
  Vec2 derivative(double t) const;
  Vec2 second_derivative(double t) const;

  // Star-shaped polar representation about the center (radius as a function
  // of the polar angle) and its derivative. For the ellipse this is the
  // polar radius, not the trigonometric parameter.
  double polar_radius(double theta) const;
  double polar_radius_derivative(double theta) const;

  // Recovers the curve parameter of a point lying on the curve.
  double parameter_of(const Vec2& p) const;

  // Outward unit normal and signed curvature at parameter t.
  Vec2 normal_at(double t) const;
  double curvature_at(double t) const;

  double max_abs_curvature() const { return max_abs_curvature_; }
  double perimeter() const { return perimeter_; }

  bool contains(const Vec2& x) const;  // strictly inside the curve

  friend Vec2 closest_point(const Vec2& x, const InterfaceDescriptor& desc);
  friend double signed_distance(const Vec2& x, const InterfaceDescriptor& desc);

  // Accessors for configuration round-trips.
  double param_radius() const { return radius_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  double param_r0() const { return r0_; }
  double param_amplitude() const { return amplitude_; }
  int param_lobes() const { return lobes_; }

 private:
  InterfaceDescriptor() = default;
  void finalize();  // caches perimeter and curvature bound

  // Newton refinement of the closest-point parameter from a seed; returns
  // the polished parameter or throws NonUniqueProjection on breakdown.
  double project_parameter(const Vec2& x, double seed) const;

  // All local minimizers of the distance to the curve (polished), used for
  // global distance queries and multiplicity detection.
  void distance_minima(const Vec2& x, std::vector<double>& params,
                       std::vector<double>& dists) const;

  Kind kind_ = Kind::circle;
  Vec2 center_ = Vec2::Zero();
  double radius_ = 1.0;                    // circle
  double a_ = 1.0, b_ = 1.0;               // ellipse semi-axes
  double r0_ = 1.0, amplitude_ = 0.0;      // star
  int lobes_ = 0;
  double max_abs_curvature_ = 0.0;
  double perimeter_ = 0.0;
};

// Closest point of x on the curve. Requires x inside the tube where the
// projection is single-valued; throws NonUniqueProjection otherwise.
Vec2 closest_point(const Vec2& x, const InterfaceDescriptor& desc);

// Normal and curvature at a point on the curve (|signed_distance| <= 1e-8).
struct NormalCurvature {
  Vec2 normal;
  double curvature;
};
NormalCurvature normal_and_curvature(const Vec2& p, const InterfaceDescriptor& desc);

// Signed distance to the curve; defined for every x, negative inside.
double signed_distance(const Vec2& x, const InterfaceDescriptor& desc);

}  // namespace stokes2p
