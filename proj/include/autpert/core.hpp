#pragma once

// Basic scalar, point and box types shared by every module.

#include <Eigen/Core>
#include <boost/multiprecision/float128.hpp>

#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace autpert {

inline constexpr int kMaxComplexDim = 3;
inline constexpr int kMaxRealDim = 2 * kMaxComplexDim;
inline constexpr double kDefaultTau = 1e-9;

using Quad = boost::multiprecision::float128;

/// Arithmetic used when evaluating maps and membership.  Double is the
/// default; the wider types exist for compositions whose conditioning
/// exhausts double precision (deep ball-automorphism conjugations).
enum class Precision { Double, Extended, Quad };

template <class Scalar>
constexpr Precision precision_of() {
  if constexpr (std::is_same_v<Scalar, double>)
    return Precision::Double;
  else if constexpr (std::is_same_v<Scalar, long double>)
    return Precision::Extended;
  else
    return Precision::Quad;
}

std::string to_string(Precision p);
inline Precision max_precision(Precision a, Precision b) { return a < b ? b : a; }

using Complex = std::complex<double>;

template <class Scalar>
using ComplexT = std::complex<Scalar>;

/// A point of C^n, n <= 3, stored inline.
template <class Scalar>
using PointT = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1, 0, kMaxComplexDim, 1>;

using PointN = PointT<double>;

/// Real embedding (Re z1, Im z1, Re z2, ...) of a point of C^n.
using RealPoint = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxRealDim, 1>;

using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxComplexDim, kMaxComplexDim>;

enum class Classification { Interior, Exterior, Boundary };

std::string to_string(Classification c);

// ---------------------------------------------------------------------------
// Errors.  Every failure the library reports is one of these.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
/// A map was evaluated at (or numerically at) one of its poles.
struct PoleError : Error {
  using Error::Error;
};
/// fixed_points() on a map that fixes every point.
struct IdentityMapError : Error {
  using Error::Error;
};
struct SamplingError : Error {
  using Error::Error;
};
struct EmptyRegionError : SamplingError {
  using SamplingError::SamplingError;
};
struct ConstructionError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------

inline PointN make_point(std::initializer_list<Complex> coords) {
  PointN p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index k = 0;
  for (const auto& c : coords) p[k++] = c;
  return p;
}

inline RealPoint to_real(const PointN& p) {
  RealPoint r(2 * p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    r[2 * k] = p[k].real();
    r[2 * k + 1] = p[k].imag();
  }
  return r;
}

inline PointN from_real(const RealPoint& r) {
  PointN p(r.size() / 2);
  for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = Complex(r[2 * k], r[2 * k + 1]);
  return p;
}

template <class To, class From>
PointT<To> point_cast(const PointT<From>& p) {
  PointT<To> q(p.size());
  for (Eigen::Index k = 0; k < p.size(); ++k)
    q[k] = std::complex<To>(static_cast<To>(p[k].real()), static_cast<To>(p[k].imag()));
  return q;
}

/// Euclidean norm in R^{2n}, written out so it works for every scalar type.
template <class Scalar>
Scalar norm(const PointT<Scalar>& p) {
  using std::sqrt;
  Scalar s(0);
  for (Eigen::Index k = 0; k < p.size(); ++k) s += p[k].real() * p[k].real() + p[k].imag() * p[k].imag();
  return sqrt(s);
}

template <class Scalar>
Scalar distance(const PointT<Scalar>& a, const PointT<Scalar>& b) {
  using std::sqrt;
  Scalar s(0);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const Scalar re = a[k].real() - b[k].real();
    const Scalar im = a[k].imag() - b[k].imag();
    s += re * re + im * im;
  }
  return sqrt(s);
}

/// Hermitian product <a, b> = sum a_k conj(b_k).
template <class Scalar>
std::complex<Scalar> hermitian(const PointT<Scalar>& a, const PointT<Scalar>& b) {
  std::complex<Scalar> s(0);
  for (Eigen::Index k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

bool all_finite(const PointN& p);

/// Axis-aligned box in R^{2n}.  Infinite bounds mark unbounded directions.
struct Box {
  RealPoint lo;
  RealPoint hi;

  int real_dim() const { return static_cast<int>(lo.size()); }
  bool bounded() const;
  bool empty() const;
  bool contains(const RealPoint& p) const;
  double diagonal() const;
  Box padded(double fraction) const;

  static Box everything(int real_dim);
  static Box hull(const Box& a, const Box& b);
  static Box intersect(const Box& a, const Box& b);
};

/// Shortest round-trip decimal spelling; -0 prints as 0.
std::string format_double(double v);
/// "re", "re+imi" or "re-imi".
std::string format_complex(Complex z);
/// A complex for n = 1, otherwise "(z1, z2, ...)".
std::string format_point(const PointN& p);

}  // namespace autpert
