#include "autpert/maps.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace autpert {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ConformalMap make(MapNode::Variant v) { return ConformalMap(std::make_shared<const MapNode>(MapNode{std::move(v)})); }

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// Planar block size of a map used as a Product component.
int block_size(const ConformalMap& f) {
  if (auto n = arity(f)) return *n;
  return min_dim(f);
}

template <class Scalar>
std::complex<Scalar> cplx(Complex z) {
  return {static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag())};
}

template <class Scalar>
std::complex<Scalar> safe_div(const std::complex<Scalar>& num, const std::complex<Scalar>& den) {
  using std::abs;
  if (!(abs(den) >= Scalar(1e-300))) throw PoleError("map evaluated at a pole");
  return num / den;
}

template <class Scalar>
Scalar pi() {
  return boost::math::constants::pi<Scalar>();
}

template <class Scalar>
void require_size(const PointT<Scalar>& p, Eigen::Index n, const char* what) {
  if (p.size() != n) throw DimensionError(std::string(what) + " expects dimension " + std::to_string(n));
}

// Moebius coefficient helpers in the working precision.
template <class Scalar>
std::complex<Scalar> mobius_disc(const std::complex<Scalar>& z, Scalar a) {
  return safe_div<Scalar>(z + a, Scalar(1) + z * a);
}

template <class Scalar>
PointT<Scalar> ball_shift_apply(const PointT<Scalar>& p, Scalar a) {
  using std::sqrt;
  const std::complex<Scalar> den = Scalar(1) + p[0] * a;
  if (!(std::abs(den) >= Scalar(1e-300))) throw PoleError("ball shift evaluated at a pole");
  const Scalar s = sqrt((Scalar(1) - a) * (Scalar(1) + a));
  PointT<Scalar> q(p.size());
  q[0] = (p[0] + a) / den;
  for (Eigen::Index k = 1; k < p.size(); ++k) q[k] = s * p[k] / den;
  return q;
}

template <class Scalar>
PointT<Scalar> eval(const ConformalMap& f, const PointT<Scalar>& p, bool inverse);

template <class Scalar>
struct Evaluator {
  const PointT<Scalar>& p;
  bool inv;

  using C = std::complex<Scalar>;

  PointT<Scalar> operator()(const maps::Identity&) const { return p; }

  PointT<Scalar> operator()(const maps::DiscMobius& m) const {
    require_size(p, 1, "mobius");
    PointT<Scalar> q(1);
    q[0] = mobius_disc<Scalar>(p[0], inv ? -Scalar(m.a) : Scalar(m.a));
    return q;
  }

  PointT<Scalar> operator()(const maps::DiscAutomorphism& m) const {
    require_size(p, 1, "discauto");
    using std::cos;
    using std::sin;
    const Scalar th(m.theta);
    const C alpha = cplx<Scalar>(m.alpha);
    PointT<Scalar> q(1);
    if (!inv) {
      const C e(cos(th), sin(th));
      q[0] = e * safe_div<Scalar>(p[0] - alpha, Scalar(1) - std::conj(alpha) * p[0]);
    } else {
      const C e(cos(th), -sin(th));
      const C w = e * p[0];
      q[0] = safe_div<Scalar>(w + alpha, Scalar(1) + std::conj(alpha) * w);
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Rotation& r) const {
    if (p.size() <= r.coord) throw DimensionError("rotation coordinate out of range");
    using std::cos;
    using std::sin;
    const Scalar th = inv ? -Scalar(r.theta) : Scalar(r.theta);
    PointT<Scalar> q = p;
    q[r.coord] = C(cos(th), sin(th)) * p[r.coord];
    return q;
  }

  PointT<Scalar> operator()(const maps::BallShift& b) const {
    require_size(p, b.n, "ballshift");
    return ball_shift_apply<Scalar>(p, inv ? -Scalar(b.a) : Scalar(b.a));
  }

  PointT<Scalar> operator()(const maps::Permutation& s) const {
    require_size(p, static_cast<Eigen::Index>(s.sigma.size()), "perm");
    PointT<Scalar> q(p.size());
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
      if (!inv)
        q[static_cast<Eigen::Index>(k)] = p[s.sigma[k]];
      else
        q[s.sigma[k]] = p[static_cast<Eigen::Index>(k)];
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::CayleyPhi&) const {
    require_size(p, 1, "phi");
    const C i(Scalar(0), Scalar(1));
    PointT<Scalar> q(1);
    if (!inv)
      q[0] = -i * safe_div<Scalar>(p[0] + Scalar(1), p[0] - Scalar(1));
    else
      q[0] = safe_div<Scalar>(p[0] - i, p[0] + i);
    return q;
  }

  PointT<Scalar> operator()(const maps::Gt& g) const {
    require_size(p, 1, "gt");
    const Scalar t = inv ? -Scalar(g.t) : Scalar(g.t);
    const C it(Scalar(0), t);
    const C w = p[0];
    PointT<Scalar> q(1);
    q[0] = safe_div<Scalar>(Scalar(2) * w + it * (w - Scalar(1)), Scalar(2) + it * (w - Scalar(1)));
    return q;
  }

  PointT<Scalar> operator()(const maps::Gj& g) const {
    require_size(p, 3, "gj");
    using std::cos;
    using std::sin;
    const Scalar t = inv ? -Scalar(g.t) : Scalar(g.t);
    PointT<Scalar> q = p;
    q[0] = C(cos(t), sin(t)) * p[0];
    q[1] = p[1] + t / Scalar(g.j);
    return q;
  }

  PointT<Scalar> operator()(const maps::StripToDisc&) const {
    require_size(p, 1, "striptodisc");
    PointT<Scalar> q(1);
    const Scalar quarter_pi = pi<Scalar>() / Scalar(4);
    if (!inv) {
      const C w = quarter_pi * p[0];
      using std::abs;
      if (!(abs(std::cosh(w)) >= Scalar(1e-300))) throw PoleError("striptodisc evaluated at a pole");
      q[0] = std::tanh(w);
    } else {
      using std::abs;
      if (!(abs(Scalar(1) - p[0] * p[0]) >= Scalar(1e-300))) throw PoleError("inverse striptodisc at +-1");
      q[0] = std::atanh(p[0]) / quarter_pi;
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Unitary& u) const {
    require_size(p, u.u.rows(), "unitary");
    PointT<Scalar> q(p.size());
    for (Eigen::Index r = 0; r < p.size(); ++r) {
      C acc(0);
      for (Eigen::Index c = 0; c < p.size(); ++c) {
        const Complex e = inv ? std::conj(u.u(c, r)) : u.u(r, c);
        acc += cplx<Scalar>(e) * p[c];
      }
      q[r] = acc;
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Similarity& s) const {
    require_size(p, s.shift.size(), "similarity");
    PointT<Scalar> q(p.size());
    const Scalar k(s.scale);
    for (Eigen::Index c = 0; c < p.size(); ++c) {
      const C shift = cplx<Scalar>(s.shift[c]);
      q[c] = inv ? (p[c] - shift) / k : k * p[c] + shift;
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Product& prod) const {
    Eigen::Index total = 0;
    for (const auto& part : prod.parts) total += block_size(part);
    require_size(p, total, "prodmap");
    PointT<Scalar> q(p.size());
    Eigen::Index offset = 0;
    for (const auto& part : prod.parts) {
      const Eigen::Index n = block_size(part);
      PointT<Scalar> block = p.segment(offset, n);
      q.segment(offset, n) = eval<Scalar>(part, block, inv);
      offset += n;
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Composition& c) const {
    PointT<Scalar> q = p;
    if (!inv) {
      for (auto it = c.chain.rbegin(); it != c.chain.rend(); ++it) q = eval<Scalar>(*it, q, false);
    } else {
      for (const auto& f : c.chain) q = eval<Scalar>(f, q, true);
    }
    return q;
  }

  PointT<Scalar> operator()(const maps::Inverse& i) const { return eval<Scalar>(i.inner, p, !inv); }

  PointT<Scalar> operator()(const maps::Precise& pr) const {
    if (pr.precision <= precision_of<Scalar>()) return eval<Scalar>(pr.inner, p, inv);
    if (pr.precision == Precision::Extended)
      return point_cast<Scalar>(eval<long double>(pr.inner, point_cast<long double>(p), inv));
    return point_cast<Scalar>(eval<Quad>(pr.inner, point_cast<Quad>(p), inv));
  }
};

template <class Scalar>
PointT<Scalar> eval(const ConformalMap& f, const PointT<Scalar>& p, bool inverse) {
  return std::visit(Evaluator<Scalar>{p, inverse}, f.node().v);
}

template <class Scalar>
using Jac = JacobianT<Scalar>;

template <class Scalar>
PointT<Scalar> jet(const ConformalMap& f, const PointT<Scalar>& p, bool inverse, Jac<Scalar>& j);

// Value and complex Jacobian of the map (or of its inverse) at p.
template <class Scalar>
struct JetEvaluator {
  const PointT<Scalar>& p;
  bool inv;
  Jac<Scalar>& j;

  using C = std::complex<Scalar>;

  PointT<Scalar> value(const MapNode::Variant& v) const { return std::visit(Evaluator<Scalar>{p, inv}, v); }
  void scalar(const C& d) const {
    j.resize(1, 1);
    j(0, 0) = d;
  }
  void identity(Eigen::Index n) const { j = Jac<Scalar>::Identity(n, n); }

  PointT<Scalar> operator()(const maps::Identity&) const {
    identity(p.size());
    return p;
  }
  PointT<Scalar> operator()(const maps::DiscMobius& m) const {
    const PointT<Scalar> q = value(maps::DiscMobius{m.a});
    const Scalar a = inv ? -Scalar(m.a) : Scalar(m.a);
    const C den = Scalar(1) + a * p[0];
    scalar((Scalar(1) - a * a) / (den * den));
    return q;
  }
  PointT<Scalar> operator()(const maps::DiscAutomorphism& m) const {
    const PointT<Scalar> q = value(m);
    using std::cos;
    using std::sin;
    const Scalar th(m.theta);
    const C alpha = cplx<Scalar>(m.alpha);
    const Scalar k = Scalar(1) - std::norm(alpha);
    if (!inv) {
      const C den = Scalar(1) - std::conj(alpha) * p[0];
      scalar(C(cos(th), sin(th)) * k / (den * den));
    } else {
      const C e(cos(th), -sin(th));
      const C den = Scalar(1) + std::conj(alpha) * (e * p[0]);
      scalar(e * k / (den * den));
    }
    return q;
  }
  PointT<Scalar> operator()(const maps::Rotation& r) const {
    const PointT<Scalar> q = value(r);
    using std::cos;
    using std::sin;
    const Scalar th = inv ? -Scalar(r.theta) : Scalar(r.theta);
    identity(p.size());
    j(r.coord, r.coord) = C(cos(th), sin(th));
    return q;
  }
  PointT<Scalar> operator()(const maps::BallShift& b) const {
    const PointT<Scalar> q = value(b);
    using std::sqrt;
    const Scalar a = inv ? -Scalar(b.a) : Scalar(b.a);
    const Scalar s = sqrt((Scalar(1) - a) * (Scalar(1) + a));
    const C den = Scalar(1) + a * p[0];
    j = Jac<Scalar>::Zero(p.size(), p.size());
    j(0, 0) = (Scalar(1) - a * a) / (den * den);
    for (Eigen::Index k = 1; k < p.size(); ++k) {
      j(k, 0) = -a * s * p[k] / (den * den);
      j(k, k) = s / den;
    }
    return q;
  }
  PointT<Scalar> operator()(const maps::Permutation& s) const {
    const PointT<Scalar> q = value(s);
    j = Jac<Scalar>::Zero(p.size(), p.size());
    for (std::size_t k = 0; k < s.sigma.size(); ++k) {
      const Eigen::Index a = static_cast<Eigen::Index>(k), b = s.sigma[k];
      if (!inv)
        j(a, b) = C(1);
      else
        j(b, a) = C(1);
    }
    return q;
  }
  PointT<Scalar> operator()(const maps::CayleyPhi& m) const {
    const PointT<Scalar> q = value(m);
    const C i2(Scalar(0), Scalar(2));
    const C den = inv ? p[0] + C(Scalar(0), Scalar(1)) : p[0] - Scalar(1);
    scalar(i2 / (den * den));
    return q;
  }
  PointT<Scalar> operator()(const maps::Gt& g) const {
    const PointT<Scalar> q = value(g);
    const Scalar t = inv ? -Scalar(g.t) : Scalar(g.t);
    const C den = Scalar(2) + C(Scalar(0), t) * (p[0] - Scalar(1));
    scalar(Scalar(4) / (den * den));
    return q;
  }
  PointT<Scalar> operator()(const maps::Gj& g) const {
    const PointT<Scalar> q = value(g);
    using std::cos;
    using std::sin;
    const Scalar t = inv ? -Scalar(g.t) : Scalar(g.t);
    identity(3);
    j(0, 0) = C(cos(t), sin(t));
    return q;
  }
  PointT<Scalar> operator()(const maps::StripToDisc& m) const {
    const PointT<Scalar> q = value(m);
    const Scalar quarter_pi = pi<Scalar>() / Scalar(4);
    if (!inv)
      scalar(quarter_pi * (Scalar(1) - q[0] * q[0]));
    else
      scalar(Scalar(1) / (quarter_pi * (Scalar(1) - p[0] * p[0])));
    return q;
  }
  PointT<Scalar> operator()(const maps::Unitary& u) const {
    const PointT<Scalar> q = value(u);
    j.resize(p.size(), p.size());
    for (Eigen::Index r = 0; r < p.size(); ++r)
      for (Eigen::Index c = 0; c < p.size(); ++c) j(r, c) = cplx<Scalar>(inv ? std::conj(u.u(c, r)) : u.u(r, c));
    return q;
  }
  PointT<Scalar> operator()(const maps::Similarity& s) const {
    const PointT<Scalar> q = value(s);
    identity(p.size());
    j *= inv ? Scalar(1) / Scalar(s.scale) : Scalar(s.scale);
    return q;
  }
  PointT<Scalar> operator()(const maps::Product& prod) const {
    Eigen::Index total = 0;
    for (const auto& part : prod.parts) total += block_size(part);
    require_size(p, total, "prodmap");
    PointT<Scalar> q(p.size());
    j = Jac<Scalar>::Zero(p.size(), p.size());
    Eigen::Index offset = 0;
    for (const auto& part : prod.parts) {
      const Eigen::Index n = block_size(part);
      Jac<Scalar> jb;
      PointT<Scalar> block = p.segment(offset, n);
      q.segment(offset, n) = jet<Scalar>(part, block, inv, jb);
      j.block(offset, offset, n, n) = jb;
      offset += n;
    }
    return q;
  }
  PointT<Scalar> operator()(const maps::Composition& c) const {
    PointT<Scalar> q = p;
    identity(p.size());
    Jac<Scalar> step;
    auto advance = [&](const ConformalMap& f, bool dir) {
      q = jet<Scalar>(f, q, dir, step);
      const Jac<Scalar> acc = step * j;
      j = acc;
    };
    if (!inv) {
      for (auto it = c.chain.rbegin(); it != c.chain.rend(); ++it) advance(*it, false);
    } else {
      for (const auto& f : c.chain) advance(f, true);
    }
    return q;
  }
  PointT<Scalar> operator()(const maps::Inverse& i) const { return jet<Scalar>(i.inner, p, !inv, j); }
  PointT<Scalar> operator()(const maps::Precise& pr) const {
    if (pr.precision <= precision_of<Scalar>()) return jet<Scalar>(pr.inner, p, inv, j);
    auto widen = [&](auto tag) {
      using W = decltype(tag);
      Jac<W> jw;
      const PointT<W> q = jet<W>(pr.inner, point_cast<W>(p), inv, jw);
      j.resize(jw.rows(), jw.cols());
      for (Eigen::Index r = 0; r < jw.rows(); ++r)
        for (Eigen::Index c = 0; c < jw.cols(); ++c)
          j(r, c) = C(static_cast<Scalar>(jw(r, c).real()), static_cast<Scalar>(jw(r, c).imag()));
      return point_cast<Scalar>(q);
    };
    if (pr.precision == Precision::Extended) return widen((long double){});
    return widen(Quad{});
  }
};

template <class Scalar>
PointT<Scalar> jet(const ConformalMap& f, const PointT<Scalar>& p, bool inverse, Jac<Scalar>& j) {
  return std::visit(JetEvaluator<Scalar>{p, inverse, j}, f.node().v);
}

void format_complex(std::ostream& os, Complex z) { os << autpert::format_complex(z); }

void print(std::ostream& os, const ConformalMap& f);

void print_list(std::ostream& os, const std::vector<ConformalMap>& fs) {
  for (std::size_t k = 0; k < fs.size(); ++k) {
    if (k) os << ", ";
    print(os, fs[k]);
  }
}

void print(std::ostream& os, const ConformalMap& f) {
  std::visit(Overloaded{
                 [&](const maps::Identity&) { os << "id"; },
                 [&](const maps::DiscMobius& m) { os << "mobius(" << format_double(m.a) << ")"; },
                 [&](const maps::DiscAutomorphism& m) {
                   os << "discauto(" << format_double(m.theta) << ", ";
                   format_complex(os, m.alpha);
                   os << ")";
                 },
                 [&](const maps::Rotation& r) {
                   os << "rot(" << format_double(r.theta);
                   if (r.coord != 0) os << ", " << r.coord;
                   os << ")";
                 },
                 [&](const maps::BallShift& b) { os << "ballshift(" << format_double(b.a) << ", " << b.n << ")"; },
                 [&](const maps::Permutation& s) {
                   os << "perm(";
                   for (std::size_t k = 0; k < s.sigma.size(); ++k) os << (k ? ", " : "") << s.sigma[k];
                   os << ")";
                 },
                 [&](const maps::CayleyPhi&) { os << "phi"; },
                 [&](const maps::Gt& g) { os << "gt(" << format_double(g.t) << ")"; },
                 [&](const maps::Gj& g) { os << "gj(" << g.j << ", " << format_double(g.t) << ")"; },
                 [&](const maps::StripToDisc&) { os << "striptodisc"; },
                 [&](const maps::Unitary& u) {
                   os << "unitary(" << u.u.rows();
                   for (Eigen::Index r = 0; r < u.u.rows(); ++r)
                     for (Eigen::Index c = 0; c < u.u.cols(); ++c) {
                       os << ", ";
                       format_complex(os, u.u(r, c));
                     }
                   os << ")";
                 },
                 [&](const maps::Similarity& s) {
                   os << "similarity(" << format_double(s.scale) << ", " << format_point(s.shift) << ")";
                 },
                 [&](const maps::Product& p) {
                   os << "prodmap(";
                   print_list(os, p.parts);
                   os << ")";
                 },
                 [&](const maps::Composition& c) {
                   os << "compose(";
                   print_list(os, c.chain);
                   os << ")";
                 },
                 [&](const maps::Inverse& i) {
                   os << "inv(";
                   print(os, i.inner);
                   os << ")";
                 },
                 [&](const maps::Precise& pr) {
                   os << to_string(pr.precision) << "(";
                   print(os, pr.inner);
                   os << ")";
                 },
             },
             f.node().v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors

ConformalMap::ConformalMap() : node_(std::make_shared<const MapNode>(MapNode{maps::Identity{}})) {}

ConformalMap ConformalMap::identity() { return make(maps::Identity{}); }

ConformalMap ConformalMap::disc_mobius(double a) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("mobius parameter must lie in (0, 1)");
  return make(maps::DiscMobius{a});
}

ConformalMap ConformalMap::disc_automorphism(double theta, Complex alpha) {
  require_finite(theta, "discauto angle");
  if (!(std::abs(alpha) < 1.0)) throw DomainError("discauto centre must lie in the unit disc");
  return make(maps::DiscAutomorphism{theta, alpha});
}

ConformalMap ConformalMap::rotation(double theta, int coord) {
  require_finite(theta, "rotation angle");
  if (coord < 0 || coord >= kMaxComplexDim) throw DimensionError("rotation coordinate out of range");
  return make(maps::Rotation{theta, coord});
}

ConformalMap ConformalMap::ball_shift(double a, int n) {
  if (!(a > -1.0 && a < 1.0)) throw DomainError("ballshift parameter must lie in (-1, 1)");
  if (n < 1 || n > kMaxComplexDim) throw DimensionError("ballshift dimension must be 1..3");
  return make(maps::BallShift{a, n});
}

ConformalMap ConformalMap::permutation(std::vector<int> sigma) {
  if (sigma.empty() || sigma.size() > static_cast<std::size_t>(kMaxComplexDim))
    throw DimensionError("permutation size must be 1..3");
  std::vector<int> sorted = sigma;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k)
    if (sorted[k] != static_cast<int>(k)) throw DomainError("not a permutation of 0..n-1");
  return make(maps::Permutation{std::move(sigma)});
}

ConformalMap ConformalMap::cayley_phi() { return make(maps::CayleyPhi{}); }

ConformalMap ConformalMap::gt(double t) {
  require_finite(t, "gt parameter");
  return make(maps::Gt{t});
}

ConformalMap ConformalMap::gj(int j, double t) {
  if (j < 1) throw DomainError("gj index must be a positive integer");
  require_finite(t, "gj parameter");
  return make(maps::Gj{j, t});
}

ConformalMap ConformalMap::strip_to_disc() { return make(maps::StripToDisc{}); }

ConformalMap ConformalMap::unitary(const ComplexMatrix& u) {
  if (u.rows() != u.cols() || u.rows() < 1 || u.rows() > kMaxComplexDim) throw DimensionError("unitary must be n x n, n <= 3");
  const ComplexMatrix defect = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
  if (defect.cwiseAbs().maxCoeff() > 1e-10) throw DomainError("matrix is not unitary");
  return make(maps::Unitary{u});
}

ConformalMap ConformalMap::similarity(double scale, const PointN& shift) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("similarity scale must be positive");
  if (shift.size() < 1 || !all_finite(shift)) throw DomainError("similarity shift must be finite");
  return make(maps::Similarity{scale, shift});
}

ConformalMap ConformalMap::product(std::vector<ConformalMap> parts) {
  if (parts.empty()) throw DimensionError("prodmap needs at least one component");
  int total = 0;
  for (const auto& p : parts) total += block_size(p);
  if (total > kMaxComplexDim) throw DimensionError("prodmap acts on more than 3 coordinates");
  return make(maps::Product{std::move(parts)});
}

ConformalMap ConformalMap::compose(std::vector<ConformalMap> chain) {
  if (chain.empty()) return identity();
  std::optional<int> n;
  for (const auto& f : chain) {
    if (auto k = arity(f)) {
      if (n && *n != *k) throw DimensionError("compose: components act on different dimensions");
      n = k;
    }
  }
  if (n)
    for (const auto& f : chain)
      if (!accepts_dim(f, *n)) throw DimensionError("compose: component cannot act on the common dimension");
  return make(maps::Composition{std::move(chain)});
}

ConformalMap ConformalMap::inverse_of(const ConformalMap& f) { return make(maps::Inverse{f}); }

ConformalMap ConformalMap::with_precision(Precision p, ConformalMap f) {
  if (p == Precision::Double) return f;
  return make(maps::Precise{p, std::move(f)});
}

// ---------------------------------------------------------------------------

std::optional<int> arity(const ConformalMap& f) {
  return std::visit(Overloaded{
                        [](const maps::Identity&) -> std::optional<int> { return std::nullopt; },
                        [](const maps::Rotation&) -> std::optional<int> { return std::nullopt; },
                        [](const maps::DiscMobius&) -> std::optional<int> { return 1; },
                        [](const maps::DiscAutomorphism&) -> std::optional<int> { return 1; },
                        [](const maps::CayleyPhi&) -> std::optional<int> { return 1; },
                        [](const maps::Gt&) -> std::optional<int> { return 1; },
                        [](const maps::StripToDisc&) -> std::optional<int> { return 1; },
                        [](const maps::Gj&) -> std::optional<int> { return 3; },
                        [](const maps::BallShift& b) -> std::optional<int> { return b.n; },
                        [](const maps::Permutation& s) -> std::optional<int> { return static_cast<int>(s.sigma.size()); },
                        [](const maps::Unitary& u) -> std::optional<int> { return static_cast<int>(u.u.rows()); },
                        [](const maps::Similarity& s) -> std::optional<int> { return static_cast<int>(s.shift.size()); },
                        [](const maps::Product& p) -> std::optional<int> {
                          int total = 0;
                          for (const auto& part : p.parts) total += block_size(part);
                          return total;
                        },
                        [](const maps::Composition& c) -> std::optional<int> {
                          for (const auto& f : c.chain)
                            if (auto n = arity(f)) return n;
                          return std::nullopt;
                        },
                        [](const maps::Inverse& i) { return arity(i.inner); },
                        [](const maps::Precise& p) { return arity(p.inner); },
                    },
                    f.node().v);
}

int min_dim(const ConformalMap& f) {
  if (auto n = arity(f)) return *n;
  return std::visit(Overloaded{
                        [](const maps::Rotation& r) { return r.coord + 1; },
                        [](const maps::Composition& c) {
                          int k = 1;
                          for (const auto& g : c.chain) k = std::max(k, min_dim(g));
                          return k;
                        },
                        [](const maps::Inverse& i) { return min_dim(i.inner); },
                        [](const maps::Precise& p) { return min_dim(p.inner); },
                        [](const auto&) { return 1; },
                    },
                    f.node().v);
}

bool accepts_dim(const ConformalMap& f, int n) {
  if (auto k = arity(f)) return *k == n;
  return n >= min_dim(f);
}

template <class Scalar>
PointT<Scalar> apply(const ConformalMap& f, const PointT<Scalar>& p) {
  return eval<Scalar>(f, p, false);
}

template <class Scalar>
PointT<Scalar> apply_inverse(const ConformalMap& f, const PointT<Scalar>& p) {
  return eval<Scalar>(f, p, true);
}

template PointT<double> apply<double>(const ConformalMap&, const PointT<double>&);
template PointT<long double> apply<long double>(const ConformalMap&, const PointT<long double>&);
template PointT<Quad> apply<Quad>(const ConformalMap&, const PointT<Quad>&);
template PointT<double> apply_inverse<double>(const ConformalMap&, const PointT<double>&);
template PointT<long double> apply_inverse<long double>(const ConformalMap&, const PointT<long double>&);
template PointT<Quad> apply_inverse<Quad>(const ConformalMap&, const PointT<Quad>&);

template <class Scalar>
PointT<Scalar> apply_with_jacobian(const ConformalMap& f, const PointT<Scalar>& p, JacobianT<Scalar>& j, bool inverse) {
  return jet<Scalar>(f, p, inverse, j);
}

template PointT<double> apply_with_jacobian<double>(const ConformalMap&, const PointT<double>&, JacobianT<double>&, bool);
template PointT<long double> apply_with_jacobian<long double>(const ConformalMap&, const PointT<long double>&,
                                                              JacobianT<long double>&, bool);
template PointT<Quad> apply_with_jacobian<Quad>(const ConformalMap&, const PointT<Quad>&, JacobianT<Quad>&, bool);

template <class Scalar>
double largest_singular_value(const JacobianT<Scalar>& j) {
  if (j.rows() == 1) return static_cast<double>(std::abs(j(0, 0)));
  Eigen::MatrixXcd jd(j.rows(), j.cols());
  for (Eigen::Index r = 0; r < j.rows(); ++r)
    for (Eigen::Index c = 0; c < j.cols(); ++c)
      jd(r, c) = Complex(static_cast<double>(j(r, c).real()), static_cast<double>(j(r, c).imag()));
  const Eigen::MatrixXcd g = jd.adjoint() * jd;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

template double largest_singular_value<double>(const JacobianT<double>&);
template double largest_singular_value<long double>(const JacobianT<long double>&);
template double largest_singular_value<Quad>(const JacobianT<Quad>&);

ConformalMap inverse(const ConformalMap& f) {
  return std::visit(Overloaded{
                        [&](const maps::Identity&) { return f; },
                        [](const maps::DiscMobius& m) { return ConformalMap::disc_automorphism(0.0, Complex(m.a, 0.0)); },
                        [](const maps::DiscAutomorphism& m) {
                          return ConformalMap::disc_automorphism(-m.theta, -m.alpha * std::polar(1.0, m.theta));
                        },
                        [](const maps::Rotation& r) { return ConformalMap::rotation(-r.theta, r.coord); },
                        [](const maps::BallShift& b) { return ConformalMap::ball_shift(-b.a, b.n); },
                        [](const maps::Permutation& s) {
                          std::vector<int> inv(s.sigma.size());
                          for (std::size_t k = 0; k < s.sigma.size(); ++k) inv[s.sigma[k]] = static_cast<int>(k);
                          return ConformalMap::permutation(std::move(inv));
                        },
                        [](const maps::Gt& g) { return ConformalMap::gt(-g.t); },
                        [](const maps::Gj& g) { return ConformalMap::gj(g.j, -g.t); },
                        [](const maps::Unitary& u) { return ConformalMap::unitary(u.u.adjoint()); },
                        [](const maps::Similarity& s) {
                          return ConformalMap::similarity(1.0 / s.scale, PointN(-s.shift / s.scale));
                        },
                        [](const maps::Product& p) {
                          std::vector<ConformalMap> parts;
                          for (const auto& part : p.parts) parts.push_back(inverse(part));
                          return ConformalMap::product(std::move(parts));
                        },
                        [](const maps::Composition& c) {
                          std::vector<ConformalMap> chain;
                          for (auto it = c.chain.rbegin(); it != c.chain.rend(); ++it) chain.push_back(inverse(*it));
                          return ConformalMap::compose(std::move(chain));
                        },
                        [](const maps::Inverse& i) { return i.inner; },
                        [](const maps::Precise& p) { return ConformalMap::with_precision(p.precision, inverse(p.inner)); },
                        [&](const auto&) { return ConformalMap::inverse_of(f); },
                    },
                    f.node().v);
}

ConformalMap power(const ConformalMap& f, int k) {
  if (k < 0) return power(inverse(f), -k);
  if (k == 0) return ConformalMap::identity();
  if (k == 1) return f;
  return ConformalMap::compose(std::vector<ConformalMap>(static_cast<std::size_t>(k), f));
}

std::optional<Eigen::Matrix2cd> mobius_matrix(const ConformalMap& f) {
  using M = Eigen::Matrix2cd;
  const Complex i(0.0, 1.0);
  return std::visit(Overloaded{
                        [](const maps::Identity&) -> std::optional<M> { return M::Identity(); },
                        [](const maps::DiscMobius& m) -> std::optional<M> {
                          M r;
                          r << 1.0, m.a, m.a, 1.0;
                          return r;
                        },
                        [](const maps::DiscAutomorphism& m) -> std::optional<M> {
                          const Complex e = std::polar(1.0, m.theta);
                          M r;
                          r << e, -e * m.alpha, -std::conj(m.alpha), 1.0;
                          return r;
                        },
                        [](const maps::Rotation& rot) -> std::optional<M> {
                          if (rot.coord != 0) return std::nullopt;
                          M r;
                          r << std::polar(1.0, rot.theta), 0.0, 0.0, 1.0;
                          return r;
                        },
                        [&](const maps::CayleyPhi&) -> std::optional<M> {
                          M r;
                          r << -i, -i, 1.0, -1.0;
                          return r;
                        },
                        [&](const maps::Gt& g) -> std::optional<M> {
                          M r;
                          r << 2.0 + i * g.t, -i * g.t, i * g.t, 2.0 - i * g.t;
                          return r;
                        },
                        [](const maps::Product& p) -> std::optional<M> {
                          if (p.parts.size() != 1) return std::nullopt;
                          return mobius_matrix(p.parts.front());
                        },
                        [](const maps::Composition& c) -> std::optional<M> {
                          M acc = M::Identity();
                          for (const auto& g : c.chain) {
                            auto m = mobius_matrix(g);
                            if (!m) return std::nullopt;
                            acc = acc * *m;
                          }
                          return acc;
                        },
                        [](const maps::Inverse& inv) -> std::optional<M> {
                          auto m = mobius_matrix(inv.inner);
                          if (!m) return std::nullopt;
                          M adj;
                          adj << (*m)(1, 1), -(*m)(0, 1), -(*m)(1, 0), (*m)(0, 0);
                          return adj;
                        },
                        [](const maps::Precise& p) { return mobius_matrix(p.inner); },
                        [](const auto&) -> std::optional<M> { return std::nullopt; },
                    },
                    f.node().v);
}

std::vector<Complex> fixed_points(const ConformalMap& f) {
  const auto m = mobius_matrix(f);
  if (!m) throw DomainError("fixed_points needs a planar Moebius-type map");
  Eigen::Matrix2cd n = *m / m->cwiseAbs().maxCoeff();
  const Complex a = n(0, 0), b = n(0, 1), c = n(1, 0), d = n(1, 1);
  constexpr double eps = 1e-12;
  if (std::abs(b) < eps && std::abs(c) < eps && std::abs(a - d) < eps) throw IdentityMapError("identity map fixes every point");
  // c z^2 + (d - a) z - b = 0
  if (std::abs(c) < eps) {
    if (std::abs(d - a) < eps) return {};  // translation: only infinity
    return {b / (d - a)};
  }
  const Complex p = d - a;
  const Complex disc = p * p + 4.0 * b * c;
  const double scale = std::max({std::norm(p), std::abs(b * c), 1.0});
  if (std::abs(disc) < 1e-14 * scale) return {-p / (2.0 * c)};
  const Complex root = std::sqrt(disc);
  // Stable pair: q = -(p + sign * root) / 2.
  const Complex q = (std::real(std::conj(p) * root) >= 0.0) ? -(p + root) / 2.0 : -(p - root) / 2.0;
  std::vector<Complex> zs{q / c, -b / q};
  if (std::abs(q) < eps) zs = {(-p + root) / (2.0 * c), (-p - root) / (2.0 * c)};
  std::sort(zs.begin(), zs.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return zs;
}

std::optional<double> similarity_scale(const ConformalMap& f) {
  return std::visit(Overloaded{
                        [](const maps::Identity&) -> std::optional<double> { return 1.0; },
                        [](const maps::Rotation&) -> std::optional<double> { return 1.0; },
                        [](const maps::Permutation&) -> std::optional<double> { return 1.0; },
                        [](const maps::Unitary&) -> std::optional<double> { return 1.0; },
                        [](const maps::Gj&) -> std::optional<double> { return 1.0; },
                        [](const maps::Similarity& s) -> std::optional<double> { return s.scale; },
                        [](const maps::Product& p) -> std::optional<double> {
                          for (const auto& part : p.parts) {
                            auto s = similarity_scale(part);
                            if (!s || *s != 1.0) return std::nullopt;
                          }
                          return 1.0;
                        },
                        [](const maps::Composition& c) -> std::optional<double> {
                          double acc = 1.0;
                          for (const auto& g : c.chain) {
                            auto s = similarity_scale(g);
                            if (!s) return std::nullopt;
                            acc *= *s;
                          }
                          return acc;
                        },
                        [](const maps::Inverse& i) -> std::optional<double> {
                          auto s = similarity_scale(i.inner);
                          if (!s) return std::nullopt;
                          return 1.0 / *s;
                        },
                        [](const maps::Precise& p) { return similarity_scale(p.inner); },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    f.node().v);
}

RealPoint infinitesimal_generator(const MapFamily& family, const PointN& p, double dt) {
  if (!(dt > 0.0)) throw DomainError("generator step must be positive");
  const PointN at0 = autpert::apply(family(0.0), p);
  if (autpert::distance<double>(at0, p) > 1e-9) throw DomainError("family(0) is not the identity at the base point");
  const RealPoint plus = to_real(autpert::apply(family(dt), p));
  const RealPoint minus = to_real(autpert::apply(family(-dt), p));
  return (plus - minus) / (2.0 * dt);
}

std::string to_string(const ConformalMap& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

Precision required_precision(const ConformalMap& f) {
  return std::visit(Overloaded{
                        [](const maps::Precise& p) { return max_precision(p.precision, required_precision(p.inner)); },
                        [](const maps::Product& p) {
                          Precision best = Precision::Double;
                          for (const auto& h : p.parts) best = max_precision(best, required_precision(h));
                          return best;
                        },
                        [](const maps::Composition& c) {
                          Precision best = Precision::Double;
                          for (const auto& h : c.chain) best = max_precision(best, required_precision(h));
                          return best;
                        },
                        [](const maps::Inverse& i) { return required_precision(i.inner); },
                        [](const auto&) { return Precision::Double; },
                    },
                    f.node().v);
}

}  // namespace autpert
