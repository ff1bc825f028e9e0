#include <doctest.h>

#include "autpert/maps.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace autpert;
using oracle::C;

namespace {

double max_roundtrip(const ConformalMap& f, const std::vector<C>& zs) {
  double worst = 0.0;
  for (C z : zs) worst = std::max(worst, std::abs(autpert::apply_inverse(f, autpert::apply(f, z)) - z));
  return worst;
}

}  // namespace

TEST_CASE("catalog values at simple points") {
  CHECK(std::abs(autpert::apply(ConformalMap::disc_mobius(0.5), C(0)) - C(0.5)) < 1e-15);
  CHECK(std::abs(autpert::apply(ConformalMap::cayley_phi(), C(0)) - oracle::I) < 1e-15);
  for (double t : {-3.0, 0.2, 7.5}) CHECK(std::abs(autpert::apply(ConformalMap::gt(t), C(1)) - C(1)) < 1e-15);
  const PointN q = autpert::apply(ConformalMap::ball_shift(0.5, 2), make_point({0.0, 0.0}));
  CHECK(std::abs(q[0] - 0.5) < 1e-15);
  CHECK(std::abs(q[1]) < 1e-15);
}

TEST_CASE("evaluation matches the defining formulas") {
  const auto zs = oracle::disc_points(1000, 0.99, 1);
  double dm = 0, dg = 0, dp = 0;
  for (C z : zs) {
    dm = std::max(dm, std::abs(autpert::apply(ConformalMap::disc_mobius(0.7), z) - oracle::mobius(z, 0.7)));
    dg = std::max(dg, std::abs(autpert::apply(ConformalMap::gt(1.3), z) - oracle::gt(z, 1.3)));
    dp = std::max(dp, std::abs(autpert::apply(ConformalMap::cayley_phi(), z) - oracle::phi(z)));
  }
  CHECK(dm < 1e-14);
  CHECK(dg < 1e-10);
  CHECK(dp < 1e-10);
}

TEST_CASE("closed-form inverses round-trip") {
  const auto zs = oracle::disc_points(1000, 0.95, 2);
  const std::vector<ConformalMap> planar = {
      ConformalMap::disc_mobius(0.3),
      ConformalMap::disc_automorphism(0.8, C(0.2, -0.4)),
      ConformalMap::rotation(2.1),
      ConformalMap::gt(-2.5),
      ConformalMap::compose({ConformalMap::disc_mobius(0.9), ConformalMap::rotation(1.2566), ConformalMap::disc_mobius(0.4)}),
      ConformalMap::inverse_of(ConformalMap::gt(0.5)),
  };
  for (const auto& f : planar) {
    CHECK(max_roundtrip(f, zs) < 1e-12);
    // A simplified inverse must agree with apply_inverse.
    const ConformalMap g = inverse(f);
    double d = 0;
    for (C z : zs) d = std::max(d, std::abs(autpert::apply(g, autpert::apply(f, z)) - z));
    CHECK(d < 1e-12);
  }
  // inverse(DiscMobius(a)) is the automorphism z -> (z - a)/(1 - a z).
  const ConformalMap li = inverse(ConformalMap::disc_mobius(0.6));
  CHECK(std::holds_alternative<maps::DiscAutomorphism>(li.node().v));
  for (C z : zs) CHECK(std::abs(autpert::apply(li, z) - (z - 0.6) / (1.0 - 0.6 * z)) < 1e-14);
  // inverse(Gt(t)) = Gt(-t) checked numerically on disc points.
  double d = 0;
  for (C z : zs) d = std::max(d, std::abs(autpert::apply(ConformalMap::gt(-0.9), autpert::apply(ConformalMap::gt(0.9), z)) - z));
  CHECK(d < 1e-12);
  CHECK(std::get<maps::Rotation>(inverse(ConformalMap::rotation(0.4)).node().v).theta == -0.4);
}

TEST_CASE("ball shift preserves the sphere and round-trips") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> n01;
  double sphere = 0, rt = 0;
  const ConformalMap t = ConformalMap::ball_shift(0.83, 3);
  for (int k = 0; k < 1000; ++k) {
    PointN z(3);
    for (int c = 0; c < 3; ++c) z[c] = C(n01(gen), n01(gen));
    z /= z.norm();
    const PointN w = autpert::apply(t, z);
    sphere = std::max(sphere, std::abs(w.squaredNorm() - 1.0));
    rt = std::max(rt, (autpert::apply_inverse(t, w) - z).norm());
  }
  CHECK(sphere < 1e-12);
  CHECK(rt < 1e-12);
}

TEST_CASE("group law and conjugacy of g_t") {
  const auto zs = oracle::disc_points(1000, 0.99, 3);
  for (auto [s, t] : std::vector<std::pair<double, double>>{{0.3, 0.7}, {-1, 2}, {5, -5}}) {
    double d = 0;
    for (C w : zs)
      d = std::max(d, std::abs(autpert::apply(ConformalMap::gt(s), autpert::apply(ConformalMap::gt(t), w)) -
                               autpert::apply(ConformalMap::gt(s + t), w)));
    CHECK(d < 1e-12);
  }
  double d = 0;
  const ConformalMap phi = ConformalMap::cayley_phi();
  for (C w : zs)
    d = std::max(d, std::abs(autpert::apply(phi, autpert::apply(ConformalMap::gt(2.0), w)) - autpert::apply(phi, w) - 2.0));
  CHECK(d < 1e-10);
}

TEST_CASE("fixed points") {
  auto fp = fixed_points(ConformalMap::rotation(M_PI / 3));
  REQUIRE(fp.size() == 1);
  CHECK(std::abs(fp[0]) < 1e-15);
  fp = fixed_points(ConformalMap::disc_mobius(0.5));
  REQUIRE(fp.size() == 2);
  CHECK(std::abs(fp[0] + 1.0) < 1e-12);
  CHECK(std::abs(fp[1] - 1.0) < 1e-12);
  fp = fixed_points(ConformalMap::gt(2.0));
  REQUIRE(fp.size() == 1);
  CHECK(std::abs(fp[0] - 1.0) < 1e-9);
  CHECK_THROWS_AS(fixed_points(ConformalMap::identity()), IdentityMapError);
  CHECK_THROWS_AS(fixed_points(ConformalMap::compose({ConformalMap::gt(1.0), ConformalMap::gt(-1.0)})), IdentityMapError);
  CHECK_THROWS_AS(fixed_points(ConformalMap::ball_shift(0.3, 2)), DomainError);
  // A conjugated rotation fixes L^{-1}(0) = -a.
  fp = fixed_points(ConformalMap::compose({inverse(ConformalMap::disc_mobius(0.4)), ConformalMap::rotation(1.0),
                                           ConformalMap::disc_mobius(0.4)}));
  bool found = false;
  for (C z : fp) found = found || std::abs(z + 0.4) < 1e-12;
  CHECK(found);
}

TEST_CASE("infinitesimal generators") {
  MapFamily rot1 = [](double t) { return ConformalMap::rotation(t, 0); };
  const RealPoint g = infinitesimal_generator(rot1, make_point({0.5, 0.2}));
  // d/dt e^{it} z = i z: (i 0.5, 0) in real coordinates.
  CHECK(std::abs(g[0]) < 1e-9);
  CHECK(std::abs(g[1] - 0.5) < 1e-9);
  CHECK(std::abs(g[2]) < 1e-12);
  CHECK(std::abs(g[3]) < 1e-12);

  MapFamily gt = [](double t) { return ConformalMap::gt(t); };
  for (C w : {C(0), C(0.3, -0.2), C(-0.5, 0.5)}) {
    const RealPoint v = infinitesimal_generator(gt, make_point({w}));
    const C sym = oracle::dgt_dt_at0(w);
    CHECK(std::abs(C(v[0], v[1]) - sym) < 1e-9);
  }
  MapFamily id = [](double) { return ConformalMap::identity(); };
  CHECK(infinitesimal_generator(id, make_point({0.4})).norm() == 0.0);
  MapFamily bad = [](double t) { return ConformalMap::gt(t + 1.0); };
  CHECK_THROWS_AS(infinitesimal_generator(bad, make_point({0.1})), DomainError);
}

TEST_CASE("domain preservation on the reference domain") {
  const auto zs = oracle::disc_points(1000, 0.999, 4);
  for (const auto& f : {ConformalMap::disc_mobius(0.9), ConformalMap::rotation(0.3), ConformalMap::gt(4.0),
                        ConformalMap::disc_automorphism(2.0, C(-0.5, 0.3))})
    for (C z : zs) CHECK(std::abs(autpert::apply(f, z)) < 1.0);
}

TEST_CASE("strip to disc") {
  const ConformalMap f = ConformalMap::strip_to_disc();
  for (double eps : {0.1, 0.01}) {
    double lo = 1, hi = 0;
    for (int k = -200; k <= 200; ++k)
      for (double s : {-1.0, 1.0}) {
        const double m = std::abs(autpert::apply(f, C(k * 0.05, s * (1 - eps))));
        lo = std::min(lo, m);
        hi = std::max(hi, m);
      }
    CHECK(hi < 1.0);
    CHECK(lo > 0.5);
  }
  const auto zs = oracle::disc_points(500, 0.99, 6);
  CHECK(max_roundtrip(ConformalMap::inverse_of(f), zs) < 1e-10);
}

TEST_CASE("quad evaluation agrees with double where both are accurate") {
  const ConformalMap f = ConformalMap::compose({ConformalMap::ball_shift(-0.4, 2), ConformalMap::permutation({1, 0}),
                                                ConformalMap::ball_shift(0.4, 2)});
  const PointN z = make_point({C(0.1, 0.2), C(-0.3, 0.1)});
  const PointN d = autpert::apply(f, z);
  const PointN q = point_cast<double>(autpert::apply<Quad>(f, point_cast<Quad>(z)));
  const PointN e = point_cast<double>(autpert::apply<long double>(f, point_cast<long double>(z)));
  CHECK((d - q).norm() < 1e-14);
  CHECK((e - q).norm() < 1e-15);
  const ConformalMap pf = ConformalMap::with_precision(Precision::Quad, f);
  CHECK((autpert::apply(pf, z) - q).norm() == 0.0);
  CHECK(to_string(pf).rfind("quad(", 0) == 0);
}

TEST_CASE("validation and dimension errors") {
  CHECK_THROWS_AS(ConformalMap::disc_mobius(1.0), DomainError);
  CHECK_THROWS_AS(ConformalMap::disc_automorphism(0, C(1, 0)), DomainError);
  CHECK_THROWS_AS(ConformalMap::permutation({0, 0}), DomainError);
  CHECK_THROWS_AS(ConformalMap::gj(0, 1.0), DomainError);
  CHECK_THROWS_AS(autpert::apply(ConformalMap::gj(2, 1.0), make_point({0.1})), DimensionError);
  CHECK_THROWS_AS(ConformalMap::compose({ConformalMap::gt(1.0), ConformalMap::ball_shift(0.2, 2)}), DimensionError);
  CHECK_THROWS_AS(autpert::apply(ConformalMap::cayley_phi(), C(1.0)), PoleError);
  CHECK_THROWS_AS(autpert::apply_inverse(ConformalMap::cayley_phi(), C(0, -1)), PoleError);
}

TEST_CASE("spelling") {
  CHECK(to_string(ConformalMap::compose({ConformalMap::inverse_of(ConformalMap::disc_mobius(0.9)), ConformalMap::rotation(1.2566),
                                         ConformalMap::disc_mobius(0.9)})) == "compose(inv(mobius(0.9)), rot(1.2566), mobius(0.9))");
  CHECK(to_string(ConformalMap::product({ConformalMap::gt(-0.5), ConformalMap::rotation(0.25)})) == "prodmap(gt(-0.5), rot(0.25))");
  CHECK(to_string(ConformalMap::disc_automorphism(1, C(0.5, -0.25))) == "discauto(1, 0.5-0.25i)");
}
