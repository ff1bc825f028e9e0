#include "autpert/core.hpp"
#include "autpert/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace autpert {

std::string to_string(Classification c) {
  switch (c) {
    case Classification::Interior:
      return "interior";
    case Classification::Exterior:
      return "exterior";
    case Classification::Boundary:
      return "boundary";
  }
  return "?";
}

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Double:
      return "double";
    case Precision::Extended:
      return "extended";
    case Precision::Quad:
      return "quad";
  }
  return "?";
}

bool all_finite(const PointN& p) {
  for (Eigen::Index k = 0; k < p.size(); ++k)
    if (!std::isfinite(p[k].real()) || !std::isfinite(p[k].imag())) return false;
  return true;
}

bool Box::bounded() const { return lo.allFinite() && hi.allFinite(); }

bool Box::empty() const {
  for (Eigen::Index k = 0; k < lo.size(); ++k)
    if (!(lo[k] <= hi[k])) return true;
  return false;
}

bool Box::contains(const RealPoint& p) const {
  for (Eigen::Index k = 0; k < lo.size(); ++k)
    if (p[k] < lo[k] || p[k] > hi[k]) return false;
  return true;
}

double Box::diagonal() const {
  if (empty()) return 0.0;
  return (hi - lo).norm();
}

Box Box::padded(double fraction) const {
  Box b = *this;
  for (Eigen::Index k = 0; k < lo.size(); ++k) {
    const double pad = fraction * std::max(hi[k] - lo[k], 1e-12);
    b.lo[k] -= pad;
    b.hi[k] += pad;
  }
  return b;
}

Box Box::everything(int real_dim) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return Box{RealPoint::Constant(real_dim, -inf), RealPoint::Constant(real_dim, inf)};
}

Box Box::hull(const Box& a, const Box& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return Box{a.lo.cwiseMin(b.lo), a.hi.cwiseMax(b.hi)};
}

Box Box::intersect(const Box& a, const Box& b) { return Box{a.lo.cwiseMax(b.lo), a.hi.cwiseMin(b.hi)}; }

std::string format_double(double v) {
  if (v == 0.0) return "0";  // folds -0
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string format_complex(Complex z) {
  std::string s = format_double(z.real());
  if (z.imag() != 0.0) {
    if (std::signbit(z.imag()))
      s += "-" + format_double(-z.imag()) + "i";
    else
      s += "+" + format_double(z.imag()) + "i";
  }
  return s;
}

std::string format_point(const PointN& p) {
  if (p.size() == 1) return format_complex(p[0]);
  std::string s = "(";
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (k) s += ", ";
    s += format_complex(p[k]);
  }
  return s + ")";
}

double CounterRng::normal() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

}  // namespace autpert
