#pragma once

// The perturbation constructions and the two explicit fibered examples.

#include "autpert/maps.hpp"
#include "autpert/region.hpp"
#include "autpert/verify.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace autpert {

struct BallSpec {
  PointN center;
  double radius;
};

struct EnclosingBall {
  PointN center;
  double radius = 0.0;
  /// Indices of the input balls touching the enclosing sphere.
  std::vector<int> support;
};

/// Smallest ball containing all the given balls (exact up to rounding;
/// enumerates support sets of size <= 2n + 1).
EnclosingBall smallest_enclosing_ball(const std::vector<BallSpec>& balls);

struct Param {
  std::string name;
  double value;
};

struct ConstructionResult {
  ConstructionResult(std::string name, Region in, Region out)
      : construction(std::move(name)), input(std::move(in)), output(std::move(out)) {}

  std::string construction;
  Region input;
  Region output;
  std::vector<ConformalMap> generators;
  std::vector<Param> params;
  std::vector<PointN> punctures;
  /// Built-in self-checks run while constructing.
  std::vector<VerificationReport> audits;
  std::vector<std::string> notes;

  double param(const std::string& name) const;
  bool audits_pass() const;
};

/// Closed discs removed from the unit disc: accepts disc(0,1) and nested
/// differences of it with discs or unions of discs.
std::vector<BallSpec> deleted_discs(const Region& d);

/// Z_j-symmetric perturbation of the unit disc minus closed discs.
ConstructionResult zj_perturb(const Region& d, double eps, int j);

/// Sup of |L(z) - 1| over the boundary of S = {|z| < 1, Re z > -1 + eps1},
/// L(z) = (z + a)/(1 + a z), on `samples` points spread by arc length.
double l_bound_audit(double a, double eps1, int samples);

/// Balls of a union-of-balls region.
std::vector<BallSpec> union_balls(const Region& d);

/// P_m-symmetric perturbation of a finite union of balls in C^n.
ConstructionResult finite_group_perturb(const Region& d, int m, double eps);

/// Invariant hyperbolic distance of a disc or ball region.
double hyperbolic_distance(const Region& d, const PointN& z, const PointN& w);

/// All elements of the group generated by `gens`, identity first.  Maps are
/// identified by their action on probe points of `domain`.
std::vector<ConformalMap> generate_group(const std::vector<ConformalMap>& gens, const Region& domain, std::size_t max_order = 64);

/// Removes the orbit of n + 2 general points so that only G survives.
ConstructionResult puncture_rigidify(const Region& d, const std::vector<ConformalMap>& group, double eps, std::uint64_t seed = 0);

struct Example {
  std::string name;
  Region region;
  /// One-parameter family expected to act on the region.
  MapFamily family;
};

/// Example with Q = {|z| < 1, |z - 1/2| > 1/2}; j set means the deformed base
/// Q_j and its S^1 family.
Example build_example_19(std::optional<int> j = std::nullopt);

/// Example over C^3 with the p_j and q_j markers; no j means the product
/// A x B x A and the limit rotation family.
Example build_example_211(std::optional<int> j = std::nullopt, bool bounded = false);

}  // namespace autpert
