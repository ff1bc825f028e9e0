#include <doctest.h>

#include "autpert/verify.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace autpert;
using oracle::C;

namespace {

const Region kDisc = Region::disc(0.0, 1.0);

Region polydisc(int n) { return Region::product(std::vector<Region>(static_cast<std::size_t>(n), kDisc)); }

MapFamily coordinate_rotation(int k) {
  return [k](double t) { return ConformalMap::rotation(t, k); };
}

}  // namespace

TEST_CASE("invariance of the disc under rotations and automorphisms") {
  const auto r = check_invariance(kDisc, ConformalMap::rotation(1.1), 1000, 1e-6, 0);
  CHECK(r.pass);
  CHECK(r.max_deviation < 1e-14);
  CHECK(r.samples > 1000);
  CHECK(check_invariance(kDisc, ConformalMap::disc_automorphism(0.4, C(0.3, -0.5)), 1000, 1e-6, 1).pass);
}

TEST_CASE("a rotation does not preserve an off-centre hole") {
  const Region d = Region::difference(kDisc, Region::disc(0.3, 0.1));
  const auto r = check_invariance(d, ConformalMap::rotation(M_PI), 1000, 1e-6, 0);
  CHECK_FALSE(r.pass);
  // The hole's circle lands at distance >= 0.4 from both boundary circles.
  CHECK(r.max_deviation > 0.1);
  REQUIRE_FALSE(r.details.empty());
  CHECK(r.details.front().deviation == r.max_deviation);
}

TEST_CASE("the upper half-disc under real shifts and a half turn") {
  // Real Moebius shifts fix the real diameter and the upper half-plane.
  const Region half = Region::intersection({kDisc, Region::half_plane(C(0, 1), 0.0)});
  CHECK(check_invariance(half, ConformalMap::disc_mobius(0.5), 500, 1e-6, 0).pass);
  CHECK_FALSE(check_invariance(half, ConformalMap::rotation(M_PI), 500, 1e-6, 0).pass);
}

TEST_CASE("passing checks are stable under reseeding and inversion") {
  const Region annulus = Region::difference(kDisc, Region::disc(0.0, 0.4));
  const ConformalMap f = ConformalMap::rotation(0.77);
  const auto a = check_invariance(annulus, f, 800, 1e-6, 3);
  REQUIRE(a.pass);
  CHECK(check_invariance(annulus, f, 800, 2e-6, 99).pass);
  CHECK(check_invariance(annulus, inverse(f), 800, 1e-6, 3).pass);
  for (std::uint64_t seed : {5u, 6u, 7u}) {
    const ConformalMap g = ConformalMap::disc_automorphism(0.1 * seed, C(0.05 * seed, -0.02 * seed));
    CHECK(check_invariance(kDisc, g, 300, 1e-6, seed).pass);
    CHECK(check_invariance(kDisc, inverse(g), 300, 1e-6, seed).pass);
  }
}

TEST_CASE("group law") {
  const MapFamily gt = [](double t) { return ConformalMap::gt(t); };
  const auto r = check_group_law(gt, 0.3, 0.7, kDisc, 1000, 1e-12);
  CHECK(r.pass);
  CHECK(r.max_deviation < 1e-12);
  CHECK(check_group_law(gt, 0.0, 0.0, kDisc, 200, 0.0).max_deviation == 0.0);

  const MapFamily gj5 = [](double t) { return ConformalMap::gj(5, t); };
  const Region strip = Region::intersection({Region::half_plane(C(0, 1), -1.0), Region::half_plane(C(0, -1), -1.0)});
  const Region box = Region::product({kDisc, strip, kDisc});
  CHECK(check_group_law(gj5, 1.0, -1.0, box, 500, 1e-12).pass);

  // Moebius shifts with parameter t/2 do not add up linearly.
  const MapFamily bad = [](double t) { return t == 0 ? ConformalMap::identity() : ConformalMap::disc_mobius(t / 2); };
  CHECK_FALSE(check_group_law(bad, 0.4, 0.6, kDisc, 300, 1e-6).pass);
}

TEST_CASE("element orders") {
  const auto r = check_order(ConformalMap::rotation(2 * M_PI / 4), 4, kDisc, 1000, 1e-12);
  CHECK(r.pass);
  CHECK(r.max_deviation < 1e-14);
  // Rotation by pi/2 three times moves x by |e^{3 pi i / 2} - 1| |x|.
  const auto f = check_order(ConformalMap::rotation(2 * M_PI / 4), 3, kDisc, 1000, 1e-9);
  CHECK_FALSE(f.pass);
  REQUIRE_FALSE(f.details.empty());
  const double predicted = std::abs(std::exp(C(0, 3 * M_PI / 2)) - 1.0) * f.details.front().point.norm();
  CHECK(f.max_deviation == doctest::Approx(predicted).epsilon(1e-12));
  CHECK(f.max_deviation <= std::sqrt(2.0));
  CHECK(f.max_deviation > 0.9 * std::sqrt(2.0));
}

TEST_CASE("commutation") {
  const Region d2 = polydisc(2);
  CHECK(check_commuting(ConformalMap::rotation(0.4, 0), ConformalMap::rotation(1.3, 1), d2, 500, 1e-14).pass);
  // At w = 0.5 the two orders differ.
  const C w(0.5);
  const C a = oracle::gt(std::exp(C(0, 1)) * w, 1.0);
  const C b = std::exp(C(0, 1)) * oracle::gt(w, 1.0);
  REQUIRE(std::abs(a - b) > 0.1);
  CHECK_FALSE(check_commuting(ConformalMap::gt(1.0), ConformalMap::rotation(1.0), kDisc, 500, 1e-6).pass);

  const auto fs = ConformalMap::product({ConformalMap::gt(0.4), ConformalMap::gt(0.4)});
  const auto ft = ConformalMap::product({ConformalMap::gt(-1.7), ConformalMap::gt(-1.7)});
  CHECK(check_commuting(fs, ft, d2, 1000, 1e-12).pass);
}

TEST_CASE("rank witness on polydiscs") {
  for (int n : {2, 3}) {
    std::vector<MapFamily> fams;
    for (int k = 0; k < n; ++k) fams.push_back(coordinate_rotation(k));
    PointN p(n);
    for (int k = 0; k < n; ++k) p[k] = C(0.5 - 0.2 * k, 0.3);
    const RankWitness w = torus_rank_witness(polydisc(n), fams, p, 300);
    CHECK(w.k == n);
    CHECK(w.n == n);
    CHECK(w.verified);
    CHECK_FALSE(w.degenerate);
  }
  // (t, 0), (0, t), (t, t): the third generator is the sum of the first two.
  std::vector<MapFamily> fams = {coordinate_rotation(0), coordinate_rotation(1), [](double t) {
                                   return ConformalMap::compose({ConformalMap::rotation(t, 0), ConformalMap::rotation(t, 1)});
                                 }};
  const RankWitness w = torus_rank_witness(polydisc(2), fams, make_point({0.5, 0.3}), 300);
  CHECK(w.k == 2);
  REQUIRE(w.singular_values.size() == 3);
  CHECK(w.singular_values[2] < 1e-8 * w.singular_values[0]);

  const RankWitness z = torus_rank_witness(polydisc(2), {coordinate_rotation(0), coordinate_rotation(1)}, make_point({0.0, 0.0}), 200);
  CHECK(z.k == 0);
  CHECK(z.degenerate);
}

TEST_CASE("rank witness stays within the bound on random base points") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 2;
    std::vector<MapFamily> fams;
    for (int k = 0; k < n; ++k) fams.push_back(coordinate_rotation(k));
    fams.push_back([n](double t) {
      std::vector<ConformalMap> chain;
      for (int k = 0; k < n; ++k) chain.push_back(ConformalMap::rotation(t * (k + 1), k));
      return ConformalMap::compose(chain);
    });
    PointN p(n);
    for (int k = 0; k < n; ++k) p[k] = C(u(gen), u(gen));
    const RankWitness w = torus_rank_witness(polydisc(n), fams, p, 100, trial);
    CHECK(w.k <= n);
    CHECK(w.k == n);
  }
}

TEST_CASE("a family that leaves the domain is not a witness") {
  // z1 -> z1 + t moves the polydisc.
  std::vector<MapFamily> fams = {coordinate_rotation(0), [](double t) {
                                   return ConformalMap::similarity(1.0, make_point({C(t, 0), C(0)}));
                                 }};
  const RankWitness w = torus_rank_witness(polydisc(2), fams, make_point({0.5, 0.3}), 200);
  CHECK_FALSE(w.verified);
}

TEST_CASE("convergence table") {
  std::vector<PointN> pts;
  for (C z : oracle::disc_points(200, 0.9, 8)) pts.push_back(make_point({z, 0.5 * z, -z}));
  const IndexedFamily seq = [](int j, double t) { return ConformalMap::gj(j, t); };
  const MapFamily limit = [](double t) { return ConformalMap::rotation(t, 0); };
  const auto rows = check_convergence(seq, limit, {1, 2, 5, 10}, {0.7, -1.3, 0.0}, pts);
  REQUIRE(rows.size() == 12);
  for (const auto& row : rows) CHECK(std::abs(row.deviation - std::abs(row.t) / row.j) < 1e-12);
  for (std::size_t k = 0; k + 3 < rows.size(); ++k)
    if (rows[k].t != 0) CHECK(rows[k + 3].deviation < rows[k].deviation);
}
