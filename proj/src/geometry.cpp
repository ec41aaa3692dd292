#include "stokes2p/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace stokes2p {

namespace {

constexpr int kSeedSamples = 256;

double wrap_2pi(double t) {
  const double two_pi = 2.0 * M_PI;
  t = std::fmod(t, two_pi);
  if (t < 0.0) t += two_pi;
  return t;
}

}  // namespace

InterfaceDescriptor InterfaceDescriptor::circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw ValidationError("circle radius must be positive");
  InterfaceDescriptor d;
  d.kind_ = Kind::circle;
  d.center_ = center;
  d.radius_ = radius;
  d.finalize();
  return d;
}

InterfaceDescriptor InterfaceDescriptor::ellipse(Vec2 center, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("ellipse semi-axes must be positive");
  InterfaceDescriptor d;
  d.kind_ = Kind::ellipse;
  d.center_ = center;
  d.a_ = a;
  d.b_ = b;
  d.finalize();
  return d;
}

InterfaceDescriptor InterfaceDescriptor::star(Vec2 center, double r0, double amplitude,
                                              int lobes) {
  if (!(r0 > 0.0)) throw ValidationError("star base radius must be positive");
  if (!(amplitude >= 0.0 && amplitude < 1.0))
    throw ValidationError("star amplitude must lie in [0,1) so the radius stays positive");
  if (lobes < 1) throw ValidationError("star lobe count must be >= 1");
  InterfaceDescriptor d;
  d.kind_ = Kind::star;
  d.center_ = center;
  d.r0_ = r0;
  d.amplitude_ = amplitude;
  d.lobes_ = lobes;
  d.finalize();
  return d;
}

void InterfaceDescriptor::finalize() {
  const int n = 4096;
  double per = 0.0;
  double hmax = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * M_PI * (i + 0.5) / n;
    per += derivative(t).norm();
    hmax = std::max(hmax, std::abs(curvature_at(t)));
  }
  perimeter_ = per * 2.0 * M_PI / n;
  max_abs_curvature_ = hmax;
}

Vec2 InterfaceDescriptor::point(double t) const {
  switch (kind_) {
    case Kind::circle:
      return center_ + radius_ * Vec2(std::cos(t), std::sin(t));
    case Kind::ellipse:
      return center_ + Vec2(a_ * std::cos(t), b_ * std::sin(t));
    case Kind::star: {
      const double r = r0_ * (1.0 + amplitude_ * std::cos(lobes_ * t));
      return center_ + r * Vec2(std::cos(t), std::sin(t));
    }
  }
  return center_;
}

Vec2 InterfaceDescriptor::derivative(double t) const {
  switch (kind_) {
    case Kind::circle:
      return radius_ * Vec2(-std::sin(t), std::cos(t));
    case Kind::ellipse:
      return Vec2(-a_ * std::sin(t), b_ * std::cos(t));
    case Kind::star: {
      const double c = std::cos(t), s = std::sin(t);
      const double r = r0_ * (1.0 + amplitude_ * std::cos(lobes_ * t));
      const double dr = -r0_ * amplitude_ * lobes_ * std::sin(lobes_ * t);
      return Vec2(dr * c - r * s, dr * s + r * c);
    }
  }
  return Vec2::Zero();
}

Vec2 InterfaceDescriptor::second_derivative(double t) const {
  switch (kind_) {
    case Kind::circle:
      return -radius_ * Vec2(std::cos(t), std::sin(t));
    case Kind::ellipse:
      return Vec2(-a_ * std::cos(t), -b_ * std::sin(t));
    case Kind::star: {
      const double c = std::cos(t), s = std::sin(t);
      const double L = lobes_;
      const double r = r0_ * (1.0 + amplitude_ * std::cos(L * t));
      const double dr = -r0_ * amplitude_ * L * std::sin(L * t);
      const double ddr = -r0_ * amplitude_ * L * L * std::cos(L * t);
      return Vec2((ddr - r) * c - 2.0 * dr * s, (ddr - r) * s + 2.0 * dr * c);
    }
  }
  return Vec2::Zero();
}

double InterfaceDescriptor::polar_radius(double theta) const {
  switch (kind_) {
    case Kind::circle:
      return radius_;
    case Kind::ellipse: {
      const double c = std::cos(theta), s = std::sin(theta);
      return a_ * b_ / std::sqrt(b_ * b_ * c * c + a_ * a_ * s * s);
    }
    case Kind::star:
      return r0_ * (1.0 + amplitude_ * std::cos(lobes_ * theta));
  }
  return 0.0;
}

double InterfaceDescriptor::polar_radius_derivative(double theta) const {
  switch (kind_) {
    case Kind::circle:
      return 0.0;
    case Kind::ellipse: {
      const double c = std::cos(theta), s = std::sin(theta);
      const double q = b_ * b_ * c * c + a_ * a_ * s * s;
      return -a_ * b_ * (a_ * a_ - b_ * b_) * s * c / (q * std::sqrt(q));
    }
    case Kind::star:
      return -r0_ * amplitude_ * lobes_ * std::sin(lobes_ * theta);
  }
  return 0.0;
}

double InterfaceDescriptor::parameter_of(const Vec2& p) const {
  const Vec2 d = p - center_;
  switch (kind_) {
    case Kind::circle:
    case Kind::star:
      return wrap_2pi(std::atan2(d.y(), d.x()));
    case Kind::ellipse:
      return wrap_2pi(std::atan2(d.y() / b_, d.x() / a_));
  }
  return 0.0;
}

Vec2 InterfaceDescriptor::normal_at(double t) const {
  // Tangent rotated by -90 degrees: outward for a counterclockwise curve.
  const Vec2 g = derivative(t);
  return Vec2(g.y(), -g.x()).normalized();
}

double InterfaceDescriptor::curvature_at(double t) const {
  const Vec2 g = derivative(t);
  const Vec2 gg = second_derivative(t);
  const double cross = g.x() * gg.y() - g.y() * gg.x();
  const double speed = g.norm();
  return cross / (speed * speed * speed);
}

bool InterfaceDescriptor::contains(const Vec2& x) const {
  const Vec2 d = x - center_;
  const double r = d.norm();
  return r < polar_radius(std::atan2(d.y(), d.x()));
}

double InterfaceDescriptor::project_parameter(const Vec2& x, double seed) const {
  double t = seed;
  double g = (point(t) - x).dot(derivative(t));
  for (int it = 0; it < 80; ++it) {
    const Vec2 gp = derivative(t);
    const double dg = gp.squaredNorm() + (point(t) - x).dot(second_derivative(t));
    if (dg == 0.0) break;
    double step = -g / dg;
    // Damping: halve the step until the stationarity residual decreases.
    double t_new = t + step;
    double g_new = (point(t_new) - x).dot(derivative(t_new));
    int halvings = 0;
    while (std::abs(g_new) > std::abs(g) && halvings < 40) {
      step *= 0.5;
      t_new = t + step;
      g_new = (point(t_new) - x).dot(derivative(t_new));
      ++halvings;
    }
    t = t_new;
    g = g_new;
    const double scale = derivative(t).norm() * (1.0 + (point(t) - x).norm());
    if (std::abs(g) <= 1e-12 * scale && std::abs(step) <= 1e-10) break;
  }
  const double scale = derivative(t).norm() * (1.0 + (point(t) - x).norm());
  if (std::abs(g) > 1e-9 * scale)
    throw NonUniqueProjection("closest-point Newton did not converge");
  return wrap_2pi(t);
}

void InterfaceDescriptor::distance_minima(const Vec2& x, std::vector<double>& params,
                                          std::vector<double>& dists) const {
  params.clear();
  dists.clear();
  double sample_d[kSeedSamples];
  for (int i = 0; i < kSeedSamples; ++i) {
    const double t = 2.0 * M_PI * i / kSeedSamples;
    sample_d[i] = (point(t) - x).norm();
  }
  for (int i = 0; i < kSeedSamples; ++i) {
    const int prev = (i + kSeedSamples - 1) % kSeedSamples;
    const int next = (i + 1) % kSeedSamples;
    if (sample_d[i] <= sample_d[prev] && sample_d[i] <= sample_d[next]) {
      const double t = project_parameter(x, 2.0 * M_PI * i / kSeedSamples);
      const double d = (point(t) - x).norm();
      bool duplicate = false;
      for (std::size_t j = 0; j < params.size(); ++j) {
        if ((point(params[j]) - point(t)).norm() < 1e-8 * (1.0 + d)) {
          duplicate = true;
          if (d < dists[j]) { params[j] = t; dists[j] = d; }
          break;
        }
      }
      if (!duplicate) {
        params.push_back(t);
        dists.push_back(d);
      }
    }
  }
}

Vec2 closest_point(const Vec2& x, const InterfaceDescriptor& desc) {
  if (desc.kind_ == InterfaceDescriptor::Kind::circle) {
    const Vec2 d = x - desc.center_;
    const double r = d.norm();
    if (r <= 1e-12 * desc.radius_)
      throw NonUniqueProjection("point at the circle center has no unique projection");
    return desc.center_ + desc.radius_ / r * d;
  }

  if (desc.kind_ == InterfaceDescriptor::Kind::ellipse) {
    // Interior reach of the ellipse: min(a,b)^2 / max(a,b).
    const double amax = std::max(desc.a_, desc.b_);
    const double amin = std::min(desc.a_, desc.b_);
    const double reach = amin * amin / amax;
    const double sd = signed_distance(x, desc);
    if (sd < 0.0 && -sd >= reach * (1.0 - 1e-12))
      throw NonUniqueProjection("point outside the unique-projection tube of the ellipse");
    return desc.point(desc.project_parameter(x, desc.parameter_of(x)));
  }

  // Star: detect ambiguity from the multiplicity of polished distance minima.
  std::vector<double> params, dists;
  desc.distance_minima(x, params, dists);
  if (params.empty()) throw NonUniqueProjection("no projection candidate found");
  std::size_t best = 0;
  for (std::size_t j = 1; j < params.size(); ++j)
    if (dists[j] < dists[best]) best = j;
  int near_ties = 0;
  for (std::size_t j = 0; j < params.size(); ++j)
    if (dists[j] <= dists[best] * (1.0 + 1e-9) + 1e-14) ++near_ties;
  if (near_ties > 1)
    throw NonUniqueProjection("multiple equidistant feet on the star curve");
  return desc.point(params[best]);
}

NormalCurvature normal_and_curvature(const Vec2& p, const InterfaceDescriptor& desc) {
  const double t = desc.parameter_of(p);
  return {desc.normal_at(t), desc.curvature_at(t)};
}

double signed_distance(const Vec2& x, const InterfaceDescriptor& desc) {
  double dist;
  if (desc.kind() == InterfaceDescriptor::Kind::circle) {
    dist = std::abs((x - desc.center()).norm() - desc.param_radius());
  } else {
    std::vector<double> params, dists;
    desc.distance_minima(x, params, dists);
    dist = dists.empty() ? 0.0 : *std::min_element(dists.begin(), dists.end());
  }
  return desc.contains(x) ? -dist : dist;
}

}  // namespace stokes2p
