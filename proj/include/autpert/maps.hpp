#pragma once

// Closed catalog of invertible closed-form holomorphic maps.

#include "autpert/core.hpp"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace autpert {

struct MapNode;

/// Immutable handle to a catalog map.  Copies share the node.
class ConformalMap {
 public:
  ConformalMap();  // identity
  explicit ConformalMap(std::shared_ptr<const MapNode> node) : node_(std::move(node)) {}

  const MapNode& node() const { return *node_; }

  // Catalog constructors.  All validate their parameters.
  static ConformalMap identity();
  /// z -> (z + a) / (1 + z a), 0 < a < 1.
  static ConformalMap disc_mobius(double a);
  /// z -> e^{i theta} (z - alpha) / (1 - conj(alpha) z), |alpha| < 1.
  static ConformalMap disc_automorphism(double theta, Complex alpha);
  /// z_coord -> e^{i theta} z_coord, identity on the other coordinates.
  static ConformalMap rotation(double theta, int coord = 0);
  /// Ball automorphism moving 0 to (a, 0, ..., 0); -1 < a < 1.
  static ConformalMap ball_shift(double a, int n);
  /// Output coordinate k is input coordinate sigma[k].
  static ConformalMap permutation(std::vector<int> sigma);
  /// w -> -i (w + 1) / (w - 1), unit disc onto the upper half-plane.
  static ConformalMap cayley_phi();
  /// g_t(w) = phi^{-1}(phi(w) + t).
  static ConformalMap gt(double t);
  /// (z1, z2, z3) -> (e^{it} z1, z2 + t / j, z3).
  static ConformalMap gj(int j, double t);
  /// z -> tanh(pi z / 4), the strip |Im z| < 1 onto the unit disc.
  static ConformalMap strip_to_disc();
  static ConformalMap unitary(const ComplexMatrix& u);
  /// z -> scale * z + shift, scale > 0.
  static ConformalMap similarity(double scale, const PointN& shift);
  static ConformalMap product(std::vector<ConformalMap> parts);
  /// compose({f, g, h}) = f o g o h, i.e. h is applied first.
  static ConformalMap compose(std::vector<ConformalMap> chain);
  static ConformalMap inverse_of(const ConformalMap& f);
  /// Same map, evaluated internally in at least the given precision.
  static ConformalMap with_precision(Precision p, ConformalMap f);

  bool same_node(const ConformalMap& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const MapNode> node_;
};

namespace maps {
struct Identity {};
struct DiscMobius {
  double a;
};
struct DiscAutomorphism {
  double theta;
  Complex alpha;
};
struct Rotation {
  double theta;
  int coord;
};
struct BallShift {
  double a;
  int n;
};
struct Permutation {
  std::vector<int> sigma;
};
struct CayleyPhi {};
struct Gt {
  double t;
};
struct Gj {
  int j;
  double t;
};
struct StripToDisc {};
struct Unitary {
  ComplexMatrix u;
};
struct Similarity {
  double scale;
  PointN shift;
};
struct Product {
  std::vector<ConformalMap> parts;
};
struct Composition {
  std::vector<ConformalMap> chain;
};
struct Inverse {
  ConformalMap inner;
};
struct Precise {
  Precision precision;
  ConformalMap inner;
};
}  // namespace maps

struct MapNode {
  using Variant = std::variant<maps::Identity, maps::DiscMobius, maps::DiscAutomorphism, maps::Rotation, maps::BallShift,
                               maps::Permutation, maps::CayleyPhi, maps::Gt, maps::Gj, maps::StripToDisc, maps::Unitary,
                               maps::Similarity, maps::Product, maps::Composition, maps::Inverse, maps::Precise>;
  Variant v;
};

/// Number of complex coordinates the map acts on, or nullopt when it acts on
/// any dimension (identity, rotations act on every n > coord).
std::optional<int> arity(const ConformalMap& f);
/// Smallest dimension the map can act on.
int min_dim(const ConformalMap& f);
/// True when `f` can act on C^n.
bool accepts_dim(const ConformalMap& f, int n);

template <class Scalar>
PointT<Scalar> apply(const ConformalMap& f, const PointT<Scalar>& p);
template <class Scalar>
PointT<Scalar> apply_inverse(const ConformalMap& f, const PointT<Scalar>& p);

template <class Scalar>
using JacobianT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxComplexDim, kMaxComplexDim>;
/// Value and complex Jacobian of f (or of f^-1 when `inverse`) at p.
template <class Scalar>
PointT<Scalar> apply_with_jacobian(const ConformalMap& f, const PointT<Scalar>& p, JacobianT<Scalar>& j, bool inverse = false);
/// Operator norm of a Jacobian, computed in double.
template <class Scalar>
double largest_singular_value(const JacobianT<Scalar>& j);

inline PointN apply(const ConformalMap& f, const PointN& p) { return apply<double>(f, p); }
inline PointN apply_inverse(const ConformalMap& f, const PointN& p) { return apply_inverse<double>(f, p); }
inline Complex apply(const ConformalMap& f, Complex z) { return apply<double>(f, make_point({z}))[0]; }
inline Complex apply_inverse(const ConformalMap& f, Complex z) { return apply_inverse<double>(f, make_point({z}))[0]; }

/// Closed-form inverse, simplified where the catalog has a direct variant.
ConformalMap inverse(const ConformalMap& f);
inline ConformalMap compose(const ConformalMap& f, const ConformalMap& g) { return ConformalMap::compose({f, g}); }
/// f o f o ... o f (k times); k = 0 gives the identity.
ConformalMap power(const ConformalMap& f, int k);

/// 2x2 coefficient matrix [[a, b], [c, d]] of a planar Moebius-type map
/// z -> (a z + b) / (c z + d), or nullopt for non-Moebius variants.
std::optional<Eigen::Matrix2cd> mobius_matrix(const ConformalMap& f);

/// Finite fixed points (at most two) of a planar Moebius-type map, boundary
/// points included.  The point at infinity is never reported.
/// Throws IdentityMapError for the identity, DomainError for non-Moebius maps.
std::vector<Complex> fixed_points(const ConformalMap& f);

/// Scale factor if the map is a Euclidean similarity (isometries give 1).
std::optional<double> similarity_scale(const ConformalMap& f);

using MapFamily = std::function<ConformalMap(double)>;

inline constexpr double kDefaultGeneratorStep = 1e-5;

/// Central difference (f_dt(p) - f_{-dt}(p)) / (2 dt) in R^{2n}.
/// Throws DomainError when family(0) moves p by more than 1e-9.
RealPoint infinitesimal_generator(const MapFamily& family, const PointN& p, double dt = kDefaultGeneratorStep);

/// DSL spelling of the map; parse(to_string(f)) rebuilds an equal map.
/// Highest precision requested by any wrapper inside the map.
Precision required_precision(const ConformalMap& f);

std::string to_string(const ConformalMap& f);

}  // namespace autpert
