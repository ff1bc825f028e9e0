#include <doctest.h>

#include "autpert/hausdorff.hpp"
#include "autpert/sampling.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace autpert;
using oracle::C;

namespace {

// Largest gap between a set of angles on the circle.
double max_angle_gap(std::vector<double> a) {
  std::sort(a.begin(), a.end());
  double g = a.front() + 2 * M_PI - a.back();
  for (std::size_t k = 1; k < a.size(); ++k) g = std::max(g, a[k] - a[k - 1]);
  return g;
}

}  // namespace

TEST_CASE("circle sample density") {
  const PointCloud c = boundary_sample(Region::disc(C(0), 1), 0.01);
  CHECK(c.size() >= 628);
  CHECK(c.size() <= 800);
  std::vector<double> ang;
  double radial = 0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const C z = c.point(k)[0];
    radial = std::max(radial, std::abs(std::abs(z) - 1));
    ang.push_back(std::arg(z));
  }
  CHECK(radial < 1e-14);
  CHECK(max_angle_gap(ang) <= 0.01 + 1e-12);
}

TEST_CASE("boundary points classify as boundary") {
  const Region r = Region::union_of({Region::disc(C(0), 1), Region::disc(C(0.9, 0.2), 0.5)});
  const Region m = Region::mapped(ConformalMap::disc_mobius(0.4), Region::difference(Region::disc(C(0), 0.9), Region::disc(C(0.2), 0.2)));
  for (const Region& x : {r, m}) {
    const PointCloud c = boundary_sample(x, 0.01);
    for (Eigen::Index k = 0; k < c.size(); ++k) REQUIRE(contains(x, c.point(k)) == Classification::Boundary);
  }
}

TEST_CASE("difference keeps the inner circle") {
  const Region r = Region::difference(Region::disc(C(0), 1), Region::disc(C(0.2), 0.3));
  const PointCloud c = boundary_sample(r, 0.01);
  int inner = 0, outer = 0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const C z = c.point(k)[0];
    inner += std::abs(std::abs(z - 0.2) - 0.3) < 1e-12;
    outer += std::abs(std::abs(z) - 1) < 1e-12;
  }
  CHECK(inner >= 188);
  CHECK(outer >= 628);
  CHECK(inner + outer == c.size());
}

TEST_CASE("punctures appear in the cloud") {
  const std::vector<PointN> ps = {make_point({C(0.1, 0.2)}), make_point({C(-0.4, 0)})};
  const PointCloud c = boundary_sample(Region::punctured(Region::disc(C(0), 1), ps), 0.05);
  for (const auto& p : ps) {
    double best = 1;
    for (Eigen::Index k = 0; k < c.size(); ++k) best = std::min(best, (c.point(k) - p).norm());
    CHECK(best == 0.0);
  }
}

TEST_CASE("mapped discs sample the image circle") {
  const Region r = Region::mapped(ConformalMap::disc_mobius(0.9), Region::disc(C(0), 0.5));
  const PointCloud c = boundary_sample(r, 0.005);
  // Image of |z| = 0.5 under z -> (z+a)/(1+az).
  double worst = 0;
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const C w = c.point(k)[0];
    worst = std::max(worst, std::abs(std::abs((w - 0.9) / (1.0 - 0.9 * w)) - 0.5));
  }
  CHECK(worst < 1e-12);
  // Consecutive spacing along the curve below h: every oracle point of the
  // image circle is close to the cloud.
  std::vector<PointN> ref;
  for (int k = 0; k < 20000; ++k) ref.push_back(make_point({oracle::mobius(std::polar(0.5, 2 * M_PI * k / 20000), 0.9)}));
  CHECK(directed_hausdorff(PointCloud::from_points(ref, 0).points, c.points) <= 0.0025 + 1e-9);
}

TEST_CASE("half planes are clipped to the window") {
  SampleOptions o;
  o.window = Box{RealPoint::Constant(2, -2.0), RealPoint::Constant(2, 2.0)};
  const PointCloud c = boundary_sample(Region::half_plane(C(0, 1), 0.5), 0.01, o);
  CHECK(c.size() >= 400);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    CHECK(std::abs(c.points(1, k) - 0.5) < 1e-12);
    CHECK(std::abs(c.points(0, k)) <= 2.0);
  }
}

TEST_CASE("sphere grid covers the sphere") {
  const PointN c = make_point({C(0.1), C(0, 0.2)});
  const auto g = sphere_grid(c, 0.7, 0.1);
  double radial = 0;
  for (const auto& p : g) radial = std::max(radial, std::abs((p - c).norm() - 0.7));
  CHECK(radial < 1e-14);
  // Random sphere points have a grid point within the step.
  std::mt19937_64 gen(3);
  std::normal_distribution<double> n01;
  double worst = 0;
  for (int k = 0; k < 300; ++k) {
    PointN z(2);
    for (int i = 0; i < 2; ++i) z[i] = C(n01(gen), n01(gen));
    z = c + 0.7 * z / z.norm();
    double best = 1e9;
    for (const auto& p : g) best = std::min(best, (p - z).norm());
    worst = std::max(worst, best);
  }
  CHECK(worst < 0.1);
}

TEST_CASE("ball boundary in two variables") {
  const Region b = Region::ball(make_point({C(0), C(0)}), 1);
  const PointCloud c = boundary_sample(b, 0.1);
  for (Eigen::Index k = 0; k < c.size(); ++k) CHECK(std::abs(c.point(k).norm() - 1.0) < 1e-12);
}

TEST_CASE("product boundaries via the ambient sampler") {
  const Region p = Region::product({Region::disc(C(0), 1), Region::disc(C(0), 1)});
  SampleOptions o;
  o.ambient_budget = 1 << 14;
  const PointCloud c = boundary_sample(p, 0.1, o);
  CHECK(c.size() > 100);
  for (Eigen::Index k = 0; k < c.size(); ++k) CHECK(std::abs(level(p, c.point(k))) < 1e-9);
}

TEST_CASE("interior samples") {
  const Region r = Region::difference(Region::disc(C(0), 1), Region::disc(C(0.2), 0.3));
  const auto a = interior_sample(r, 500, 7), b = interior_sample(r, 500, 7);
  REQUIRE(a.size() == 500);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(contains(r, a[k]) == Classification::Interior);
    CHECK(a[k] == b[k]);
  }
  const Region empty = Region::intersection({Region::disc(C(0), 0.5), Region::disc(C(3), 0.5)});
  CHECK_THROWS_AS(interior_sample(empty, 10, 0), EmptyRegionError);
}
