#include <doctest.h>

#include "autpert/region.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace autpert;
using oracle::C;

namespace {

bool box_close(const Box& b, std::vector<double> lo, std::vector<double> hi, double tol) {
  for (std::size_t k = 0; k < lo.size(); ++k)
    if (std::abs(b.lo[k] - lo[k]) > tol || std::abs(b.hi[k] - hi[k]) > tol) return false;
  return true;
}

}  // namespace

TEST_CASE("disc membership") {
  const Region d = Region::disc(C(0), 1);
  CHECK(contains(d, C(0.5)) == Classification::Interior);
  CHECK(contains(d, C(1.0)) == Classification::Boundary);
  CHECK(contains(d, C(0, 1.5)) == Classification::Exterior);
}

TEST_CASE("boolean operations follow the set predicates") {
  const Region a = Region::disc(C(0), 1), b = Region::disc(C(0.8, 0), 0.5);
  const Region h = Region::half_plane(C(0, 1), 0.1);  // Im z > 0.1
  const Region u = Region::union_of({a, b}), x = Region::intersection({a, h}), d = Region::difference(a, b);
  const Region c = Region::complement(a);
  const auto pts = oracle::disc_points(4000, 1.6, 11);
  int mismatches = 0;
  for (C z : pts) {
    const bool ia = std::abs(z) < 1, ib = std::abs(z - 0.8) < 0.5, ih = z.imag() > 0.1;
    // Skip points within the classification tolerance of any boundary.
    if (std::abs(std::abs(z) - 1) < 1e-6 || std::abs(std::abs(z - 0.8) - 0.5) < 1e-6 || std::abs(z.imag() - 0.1) < 1e-6) continue;
    auto in = [&](const Region& r) { return contains(r, z) == Classification::Interior; };
    mismatches += in(u) != (ia || ib);
    mismatches += in(x) != (ia && ih);
    mismatches += in(d) != (ia && !ib);
    mismatches += in(c) != !ia;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("mapped regions pull back through the inverse") {
  const ConformalMap f = ConformalMap::disc_mobius(0.6);
  const Region small = Region::disc(C(0), 0.5);
  const Region img = Region::mapped(f, small);
  for (C z : oracle::disc_points(2000, 0.999, 12)) {
    const C pre = (z - 0.6) / (1.0 - 0.6 * z);
    if (std::abs(std::abs(pre) - 0.5) < 1e-6) continue;
    CHECK((contains(img, z) == Classification::Interior) == (std::abs(pre) < 0.5));
  }
  // Points over the pole are outside.
  const Region phi_img = Region::mapped(ConformalMap::inverse_of(ConformalMap::cayley_phi()), Region::disc(C(0), 0.5));
  CHECK(contains(phi_img, C(0, -1)) == Classification::Exterior);
}

TEST_CASE("bounding boxes") {
  CHECK(box_close(bounding_box(Region::disc(C(1, 0), 0.5)), {0.5, -0.5}, {1.5, 0.5}, 1e-12));
  CHECK(box_close(bounding_box(Region::mapped(ConformalMap::rotation(M_PI / 2), Region::disc(C(1, 0), 0.5))), {-0.5, 0.5},
                  {0.5, 1.5}, 1e-12));
  CHECK_FALSE(is_bounded(Region::half_plane(C(1, 0), 0)));
  CHECK_FALSE(is_bounded(Region::complement(Region::disc(C(0), 1))));
  CHECK(is_bounded(Region::intersection({Region::half_plane(C(1, 0), 0), Region::disc(C(0), 1)})));
  // The image of a disc under a Mobius map is enclosed by a disc.
  const Box m = bounding_box(Region::mapped(ConformalMap::disc_mobius(0.5), Region::disc(C(0), 0.9)));
  CHECK(m.bounded());
  CHECK(m.hi[0] <= 1.0 + 1e-12);
  // Mapping the strip factor of a disc x strip product into the disc bounds the whole product.
  const Region strip = Region::intersection({Region::half_plane(C(0, 1), -1.0), Region::half_plane(C(0, -1), -1.0)});
  const Region prod = Region::product({Region::disc(C(0), 1), strip});
  REQUIRE_FALSE(is_bounded(prod));
  const Box s = bounding_box(Region::mapped(ConformalMap::product({ConformalMap::identity(), ConformalMap::strip_to_disc()}), prod));
  CHECK(box_close(s, {-1, -1, -1, -1}, {1, 1, 1, 1}, 1e-12));
}

TEST_CASE("fibered regions exclude the marker graph") {
  const Region base = Region::disc(C(0), 1), fiber = Region::disc(C(0), 1);
  const Region f = Region::fibered(base, fiber, {markers::Diagonal{}});
  CHECK(contains(f, make_point({C(0.2), C(0.2)})) == Classification::Boundary);
  CHECK(contains(f, make_point({C(0.2), C(-0.3)})) == Classification::Interior);
  CHECK(contains(f, make_point({C(1.2), C(0.1)})) == Classification::Exterior);
  // The pj marker matches the reference formula.
  const PointN b = make_point({C(0.3, -0.4), C(0.2, 0.1)});
  CHECK(std::abs(evaluate_marker(markers::Pj{3}, b) - oracle::pj(b[0], b[1], 3)) < 1e-14);
}

TEST_CASE("punctures are boundary points") {
  const Region p = Region::punctured(Region::disc(C(0), 1), {make_point({C(0.25, 0.1)})});
  CHECK(contains(p, C(0.25, 0.1)) == Classification::Boundary);
  CHECK(contains(p, C(-0.25, 0.1)) == Classification::Interior);
}

TEST_CASE("products take the worst factor") {
  const Region p = Region::product({Region::disc(C(0), 1), Region::disc(C(0), 0.5)});
  CHECK(p.dim() == 2);
  CHECK(contains(p, make_point({C(0.9), C(0.4)})) == Classification::Interior);
  CHECK(contains(p, make_point({C(0.9), C(0.6)})) == Classification::Exterior);
  CHECK(box_close(bounding_box(p), {-1, -1, -0.5, -0.5}, {1, 1, 0.5, 0.5}, 1e-12));
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(Region::disc(C(0), -1), DomainError);
  CHECK_THROWS_AS(Region::union_of({Region::disc(C(0), 1), Region::ball(make_point({C(0), C(0)}), 1)}), DimensionError);
  CHECK_THROWS_AS(Region::mapped(ConformalMap::ball_shift(0.3, 2), Region::disc(C(0), 1)), DimensionError);
  CHECK_THROWS_AS(Region::fibered(Region::disc(C(0), 1), Region::disc(C(0), 1), {markers::Pj{2}}), DimensionError);
}

TEST_CASE("printing round-trips the spelling") {
  CHECK(to_string(Region::difference(Region::disc(C(0), 1), Region::disc(C(0.3), 0.1))) == "diff(disc(0, 1), disc(0.3, 0.1))");
  CHECK(required_precision(Region::with_precision(Precision::Quad, Region::disc(C(0), 1))) == Precision::Quad);
}
