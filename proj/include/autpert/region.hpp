#pragma once

// Region trees with a membership oracle.
//
// Membership is driven by a continuous signed "level" function: negative
// inside, positive outside, zero on the boundary.  It is a Euclidean signed
// distance for discs and balls and is combined with min/max by the boolean
// nodes, so its zero set is the boundary of the composite open set.

#include "autpert/core.hpp"
#include "autpert/maps.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace autpert {

// ---------------------------------------------------------------------------
// Markers: holomorphic-ish sections b -> w excluded from a fiber.

namespace markers {
/// Returns the first base coordinate.
struct Diagonal {};
struct Const {
  Complex c;
};
/// (z1 / (|z1| + 1/(j+1))) / (e / |e|) with e = exp(i j z2).
struct Pj {
  int j;
};
}  // namespace markers

using Marker = std::variant<markers::Diagonal, markers::Const, markers::Pj>;

/// Smallest base dimension the marker can be evaluated on.
int marker_base_dim(const Marker& m);

template <class Scalar>
std::complex<Scalar> evaluate_marker(const Marker& m, const PointT<Scalar>& base);

inline Complex evaluate_marker(const Marker& m, const PointN& base) { return evaluate_marker<double>(m, base); }

std::string to_string(const Marker& m);

// ---------------------------------------------------------------------------

struct RegionNode;

class Region {
 public:
  explicit Region(std::shared_ptr<const RegionNode> node);

  const RegionNode& node() const { return *node_; }
  /// Complex dimension n of the ambient space.
  int dim() const;

  static Region disc(Complex center, double radius);
  static Region ball(const PointN& center, double radius);
  /// {z : Re(z conj(n)) > offset}, |n| = 1.
  static Region half_plane(Complex unit_normal, double offset);
  static Region complement(Region r);
  static Region union_of(std::vector<Region> parts);
  static Region intersection(std::vector<Region> parts);
  /// a minus the closure of b.
  static Region difference(Region a, Region b);
  /// f(r).
  static Region mapped(ConformalMap f, Region r);
  static Region punctured(Region r, std::vector<PointN> punctures);
  static Region product(std::vector<Region> factors);
  /// {(b, w) : b in base, w in fiber, w != m(b) for every marker m}.
  static Region fibered(Region base, Region fiber, std::vector<Marker> excluded);
  /// Same set; membership is evaluated in at least precision p.
  static Region with_precision(Precision p, Region r);

  bool same_node(const Region& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const RegionNode> node_;
};

namespace regions {
struct Disc {
  Complex center;
  double radius;
};
struct Ball {
  PointN center;
  double radius;
};
struct HalfPlane {
  Complex normal;
  double offset;
};
struct Complement {
  Region inner;
};
struct Union {
  std::vector<Region> parts;
};
struct Intersection {
  std::vector<Region> parts;
};
struct Difference {
  Region a;
  Region b;
};
struct Mapped {
  ConformalMap map;
  Region inner;
};
struct Punctured {
  Region inner;
  std::vector<PointN> punctures;
};
struct Product {
  std::vector<Region> factors;
};
struct Fibered {
  Region base;
  Region fiber;
  std::vector<Marker> excluded;
};
struct Precise {
  Precision precision;
  Region inner;
};
}  // namespace regions

struct RegionNode {
  using Variant = std::variant<regions::Disc, regions::Ball, regions::HalfPlane, regions::Complement, regions::Union,
                               regions::Intersection, regions::Difference, regions::Mapped, regions::Punctured,
                               regions::Product, regions::Fibered, regions::Precise>;
  Variant v;
  int dim;
};

inline Region::Region(std::shared_ptr<const RegionNode> node) : node_(std::move(node)) {}
inline int Region::dim() const { return node_->dim; }

// ---------------------------------------------------------------------------
// Membership.

/// Signed level: < 0 inside, > 0 outside.  Evaluation at a pole of a Mapped
/// node's inverse reports +infinity (the point is not in the image).
template <class Scalar>
Scalar level(const Region& r, const PointT<Scalar>& p);

inline double level(const Region& r, const PointN& p) { return level<double>(r, p); }

/// Interior if level < -tau, Exterior if level > tau, Boundary otherwise.
Classification contains(const Region& r, const PointN& p, double tau = kDefaultTau);
inline Classification contains(const Region& r, Complex z, double tau = kDefaultTau) {
  return contains(r, make_point({z}), tau);
}

/// Axis-aligned box in R^{2n} containing the region.  Unbounded directions
/// get infinite bounds.
Box bounding_box(const Region& r);
bool is_bounded(const Region& r);

/// Highest evaluation precision requested anywhere in the tree.
Precision required_precision(const Region& r);

/// DSL spelling.
std::string to_string(const Region& r);

}  // namespace autpert
