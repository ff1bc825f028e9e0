#pragma once

// Numerical checks: invariance, group laws, orders, commutation, rank and
// convergence of families.

#include "autpert/maps.hpp"
#include "autpert/region.hpp"
#include "autpert/sampling.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace autpert {

struct Offender {
  PointN point;
  double deviation = 0.0;
  std::string what;
};

struct VerificationReport {
  std::string check;
  bool pass = true;
  double max_deviation = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  double elapsed_ms = 0.0;
  /// Worst offenders, largest deviation first.
  std::vector<Offender> details;
};

struct InvarianceOptions {
  double tau = kDefaultTau;
  /// Boundary cloud resolution; 0 skips the boundary part.
  double resolution = 1e-3;
  /// Upper bound on tested boundary points (evenly strided subsample).
  std::size_t max_boundary = 20000;
  SampleOptions sampling;
  /// Optional precomputed boundary cloud.
  const PointCloud* cloud = nullptr;
};

/// f(R) = R numerically: interior samples stay interior under f and f^-1,
/// boundary samples stay on the boundary.  The interior deviation is the
/// positive part of the level at the image; the boundary deviation is
/// |level| at the image, both evaluated in the precision of R and f.
VerificationReport check_invariance(const Region& r, const ConformalMap& f, std::size_t n_samples, double tol,
                                    std::uint64_t seed, const InvarianceOptions& opt = {});

/// |F(s) F(t) x - F(s+t) x| over interior samples of `domain`.
VerificationReport check_group_law(const MapFamily& family, double s, double t, const Region& domain, std::size_t n_samples,
                                   double tol, std::uint64_t seed = 0);

/// |f^j x - x| over interior samples of `domain`.
VerificationReport check_order(const ConformalMap& f, int j, const Region& domain, std::size_t n_samples, double tol,
                               std::uint64_t seed = 0);

/// |f g x - g f x| over interior samples of `domain`.
VerificationReport check_commuting(const ConformalMap& f, const ConformalMap& g, const Region& domain, std::size_t n_samples,
                                   double tol, std::uint64_t seed = 0);

struct RankWitness {
  int k = 0;
  int n = 0;
  std::vector<double> singular_values;
  /// All generators vanish at the base point.
  bool degenerate = false;
  /// Invariance and commutation checks behind the witness.
  std::vector<VerificationReport> reports;
  bool verified = true;
};

/// Real rank of the infinitesimal generators of commuting families at p,
/// after checking each family preserves R and that they commute.
RankWitness torus_rank_witness(const Region& r, const std::vector<MapFamily>& families, const PointN& p,
                               std::size_t n_samples = 1000, std::uint64_t seed = 0, double rank_threshold = 1e-8);

struct ConvergenceRow {
  int j;
  double t;
  double deviation;
};

using IndexedFamily = std::function<ConformalMap(int, double)>;

/// sup over the samples of |seq(j, t) x - limit(t) x| for every (j, t).
std::vector<ConvergenceRow> check_convergence(const IndexedFamily& seq, const MapFamily& limit, const std::vector<int>& js,
                                              const std::vector<double>& ts, const std::vector<PointN>& samples);

/// Finalises a report from per-sample deviations.
VerificationReport make_report(std::string name, const std::vector<std::pair<PointN, double>>& deviations, double tol,
                               std::size_t keep = 5);

}  // namespace autpert
