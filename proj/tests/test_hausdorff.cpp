#include <doctest.h>

#include "autpert/hausdorff.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <random>

using namespace autpert;
using oracle::C;

namespace {

double brute_directed(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.cols(); ++j) best = std::min(best, squared_distance(a.col(i).data(), b.col(j).data(), int(a.rows())));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

Eigen::MatrixXd random_set(std::mt19937_64& gen, int d, int n) {
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::MatrixXd m(d, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = u(gen);
  return m;
}

}  // namespace

TEST_CASE("k-d tree agrees exactly with brute force") {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> sz(1, 2000), dim(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 * dim(gen);
    const Eigen::MatrixXd a = random_set(gen, d, sz(gen)), b = random_set(gen, d, sz(gen));
    CHECK(directed_hausdorff(a, b) == brute_directed(a, b));
    CHECK(hausdorff(a, b) == std::max(brute_directed(a, b), brute_directed(b, a)));
  }
}

TEST_CASE("nearest query with duplicates and degenerate sets") {
  Eigen::MatrixXd a(2, 5);
  a << 0, 0, 0, 1, 1, 0, 0, 0, 1, 1;
  const KdTree t(a, 1);
  const double q[2] = {0.5, 0.5};
  CHECK(t.nearest_squared(q) == doctest::Approx(0.5));
  CHECK(hausdorff(a, a) == 0.0);
  CHECK_THROWS_AS(KdTree(Eigen::MatrixXd(2, 0)), SamplingError);
}

TEST_CASE("concentric circles") {
  const auto h = boundary_hausdorff(Region::disc(C(0), 1), Region::disc(C(0), 0.7), 1e-3);
  CHECK(std::abs(h.value - 0.3) <= h.error_bound);
  CHECK(h.error_bound <= 2e-3 + 1e-15);
  const auto s = boundary_hausdorff(Region::disc(C(0), 1), Region::disc(C(0.2, 0), 1), 1e-3);
  CHECK(std::abs(s.value - 0.2) <= s.error_bound);
}

TEST_CASE("large sets are fast") {
  std::mt19937_64 gen(9);
  const Eigen::MatrixXd a = random_set(gen, 2, 100000), b = random_set(gen, 2, 100000);
  const auto t0 = std::chrono::steady_clock::now();
  const double v = hausdorff(a, b);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(v > 0);
  CHECK(secs < 5.0);
}
