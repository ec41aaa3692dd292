#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "stokes2p/geometry.hpp"

using namespace stokes2p;

namespace {

// Brute-force distance to the curve over dense parameter samples; also
// reports how many well-separated samples attain (nearly) the minimum.
struct DenseDistance {
  double dist;
  int minima;
};
DenseDistance dense_distance(const Vec2& x, const InterfaceDescriptor& desc, int n = 1000000) {
  double best = 1e300;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = (desc.point(2.0 * M_PI * i / n) - x).norm();
    best = std::min(best, d[i]);
  }
  // Count local minima of the sampled distance that tie the global one.
  int minima = 0;
  for (int i = 0; i < n; ++i) {
    const double prev = d[(i + n - 1) % n], next = d[(i + 1) % n];
    if (d[i] <= prev && d[i] <= next && d[i] < best * (1.0 + 1e-7) + 1e-12) ++minima;
  }
  return {best, minima};
}

// Finite-difference curvature of the parametrized curve.
double fd_curvature(const InterfaceDescriptor& desc, double t, double dt) {
  const Vec2 a = desc.point(t - dt), b = desc.point(t), c = desc.point(t + dt);
  const Vec2 d1 = (c - a) / (2.0 * dt);
  const Vec2 d2 = (c - 2.0 * b + a) / (dt * dt);
  return (d1.x() * d2.y() - d1.y() * d2.x()) / std::pow(d1.norm(), 3);
}

}  // namespace

TEST_CASE("circle closed forms are exact") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 1.0);
  CHECK((closest_point({2.0, 0.0}, circle) - Vec2(1.0, 0.0)).norm() < 1e-14);
  CHECK(signed_distance({0.0, 0.0}, circle) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(signed_distance({3.0, 4.0}, circle) == doctest::Approx(4.0).epsilon(1e-14));

  const auto half = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  const auto nc = normal_and_curvature({0.5, 0.0}, half);
  CHECK((nc.normal - Vec2(1.0, 0.0)).norm() < 1e-14);
  CHECK(nc.curvature == doctest::Approx(2.0).epsilon(1e-14));

  // Point on the curve projects to itself.
  const Vec2 p = circle.point(1.234);
  CHECK((closest_point(p, circle) - p).norm() < 1e-14);
  CHECK(std::abs(signed_distance(p, circle)) < 1e-14);
}

TEST_CASE("ellipse curvature at the vertex matches a/b^2") {
  const auto ell = InterfaceDescriptor::ellipse({0.0, 0.0}, 2.0, 1.0);
  const auto nc = normal_and_curvature({2.0, 0.0}, ell);
  CHECK((nc.normal - Vec2(1.0, 0.0)).norm() < 1e-13);
  CHECK(nc.curvature == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("star curvature agrees with the dense polyline oracle") {
  const auto star = InterfaceDescriptor::star({0.0, 0.0}, 1.0, 0.1, 3);
  const double oracle = fd_curvature(star, 0.0, 2.0 * M_PI / 1000000);
  const auto nc = normal_and_curvature(star.point(0.0), star);
  CHECK(nc.curvature == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("ellipse signed distance matches the dense oracle") {
  const auto ell = InterfaceDescriptor::ellipse({0.0, 0.0}, 2.0, 1.0);
  CHECK(signed_distance({3.0, 0.0}, ell) == doctest::Approx(1.0).epsilon(1e-10));
  const DenseDistance oracle = dense_distance({0.7, 0.4}, ell, 100000);
  CHECK(std::abs(std::abs(signed_distance({0.7, 0.4}, ell)) - oracle.dist) < 1e-8);
}

TEST_CASE("ellipse center is outside the unique-projection tube") {
  const auto ell = InterfaceDescriptor::ellipse({0.0, 0.0}, 2.0, 1.0);
  // The oracle confirms two equidistant feet at the center.
  const DenseDistance oracle = dense_distance({0.0, 0.0}, ell, 100000);
  CHECK(oracle.minima >= 2);
  CHECK_THROWS_AS((void)closest_point({0.0, 0.0}, ell), NonUniqueProjection);
}

TEST_CASE("circle center has no projection") {
  const auto circle = InterfaceDescriptor::circle({0.3, -0.1}, 0.7);
  CHECK_THROWS_AS((void)closest_point({0.3, -0.1}, circle), NonUniqueProjection);
}

TEST_CASE("projection idempotence and orthogonality for random points") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> offset(-0.15, 0.15);
  const auto star = InterfaceDescriptor::star({0.1, 0.2}, 0.8, 0.15, 4);
  const auto ell = InterfaceDescriptor::ellipse({-0.2, 0.0}, 1.1, 0.7);
  for (const auto& desc : {star, ell}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = angle(rng);
      // A point in the tube: on-curve point pushed along the normal.
      const Vec2 x = desc.point(t) + offset(rng) * desc.normal_at(t);
      const Vec2 p = closest_point(x, desc);
      CHECK(std::abs(signed_distance(p, desc)) <= 1e-10);
      CHECK((closest_point(p, desc) - p).norm() <= 1e-10);
      // (x - p) parallel to the normal at p.
      const Vec2 n = normal_and_curvature(p, desc).normal;
      const Vec2 r = x - p;
      CHECK(std::abs(r.x() * n.y() - r.y() * n.x()) <= 1e-8);
    }
  }
}

TEST_CASE("normals are unit length everywhere") {
  const auto star = InterfaceDescriptor::star({0.0, 0.0}, 1.0, 0.3, 5);
  const auto ell = InterfaceDescriptor::ellipse({0.0, 0.0}, 2.0, 0.5);
  for (const auto& desc : {star, ell}) {
    for (int i = 0; i < 1000; ++i) {
      const double t = 2.0 * M_PI * i / 1000;
      CHECK(std::abs(desc.normal_at(t).norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("normal points from the interior to the exterior") {
  const auto star = InterfaceDescriptor::star({0.0, 0.0}, 1.0, 0.2, 3);
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * M_PI * i / 64;
    const Vec2 p = star.point(t);
    const Vec2 n = star.normal_at(t);
    CHECK(signed_distance(p + 1e-4 * n, star) > 0.0);
    CHECK(signed_distance(p - 1e-4 * n, star) < 0.0);
  }
}

TEST_CASE("descriptor validation") {
  CHECK_THROWS_AS(InterfaceDescriptor::circle({0, 0}, -1.0), ValidationError);
  CHECK_THROWS_AS(InterfaceDescriptor::star({0, 0}, 1.0, 1.0, 3), ValidationError);
  CHECK_THROWS_AS(InterfaceDescriptor::star({0, 0}, 1.0, 0.5, 0), ValidationError);
}

TEST_CASE("perimeter matches closed forms") {
  const auto circle = InterfaceDescriptor::circle({0.0, 0.0}, 0.5);
  CHECK(circle.perimeter() == doctest::Approx(M_PI).epsilon(1e-10));
}
