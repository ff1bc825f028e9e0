#include "autpert/region.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace autpert {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Region make(RegionNode::Variant v, int dim) {
  return Region(std::make_shared<const RegionNode>(RegionNode{std::move(v), dim}));
}

void require_positive(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError(std::string(what) + " radius must be positive and finite");
}

void require_same_dim(const std::vector<Region>& parts, const char* what) {
  if (parts.empty()) throw DomainError(std::string(what) + " needs at least one region");
  for (const auto& r : parts)
    if (r.dim() != parts.front().dim()) throw DimensionError(std::string(what) + ": mixed dimensions");
}

template <class Scalar>
std::complex<Scalar> cplx(Complex z) {
  return {static_cast<Scalar>(z.real()), static_cast<Scalar>(z.imag())};
}

template <class Scalar>
Scalar cabs(const std::complex<Scalar>& z) {
  using std::sqrt;
  return sqrt(z.real() * z.real() + z.imag() * z.imag());
}

template <class Scalar>
Scalar eval_level(const Region& r, const PointT<Scalar>& p);

template <class Scalar>
struct LevelVisitor {
  const PointT<Scalar>& p;

  Scalar operator()(const regions::Disc& d) const { return cabs<Scalar>(p[0] - cplx<Scalar>(d.center)) - Scalar(d.radius); }

  Scalar operator()(const regions::Ball& b) const {
    return distance<Scalar>(p, point_cast<Scalar>(b.center)) - Scalar(b.radius);
  }

  Scalar operator()(const regions::HalfPlane& h) const {
    return Scalar(h.offset) - (p[0].real() * Scalar(h.normal.real()) + p[0].imag() * Scalar(h.normal.imag()));
  }

  Scalar operator()(const regions::Complement& c) const { return -eval_level<Scalar>(c.inner, p); }

  Scalar operator()(const regions::Union& u) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    for (const auto& r : u.parts) best = std::min(best, eval_level<Scalar>(r, p));
    return best;
  }

  Scalar operator()(const regions::Intersection& u) const {
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    for (const auto& r : u.parts) worst = std::max(worst, eval_level<Scalar>(r, p));
    return worst;
  }

  Scalar operator()(const regions::Difference& d) const {
    const Scalar la = eval_level<Scalar>(d.a, p);
    return std::max(la, -eval_level<Scalar>(d.b, p));
  }

  // The inner level is divided by the stretch of f^-1 at p, so levels stay
  // comparable to distances in this frame however strongly f distorts.
  Scalar operator()(const regions::Mapped& m) const {
    PointT<Scalar> q;
    JacobianT<Scalar> j;
    try {
      q = apply_with_jacobian<Scalar>(m.map, p, j, true);
    } catch (const PoleError&) {
      return std::numeric_limits<Scalar>::infinity();
    }
    using std::isfinite;
    for (Eigen::Index k = 0; k < q.size(); ++k)
      if (!isfinite(q[k].real()) || !isfinite(q[k].imag())) return std::numeric_limits<Scalar>::infinity();
    const Scalar l = eval_level<Scalar>(m.inner, q);
    const double stretch = largest_singular_value<Scalar>(j);
    if (!(stretch > 0.0) || !std::isfinite(stretch)) return l;
    return l / Scalar(stretch);
  }

  Scalar operator()(const regions::Punctured& pu) const {
    Scalar l = eval_level<Scalar>(pu.inner, p);
    for (const auto& x : pu.punctures) l = std::max(l, -distance<Scalar>(p, point_cast<Scalar>(x)));
    return l;
  }

  Scalar operator()(const regions::Product& pr) const {
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    Eigen::Index offset = 0;
    for (const auto& f : pr.factors) {
      const PointT<Scalar> block = p.segment(offset, f.dim());
      worst = std::max(worst, eval_level<Scalar>(f, block));
      offset += f.dim();
    }
    return worst;
  }

  Scalar operator()(const regions::Fibered& f) const {
    const Eigen::Index k = f.base.dim();
    const PointT<Scalar> base = p.head(k);
    const PointT<Scalar> fiber = p.segment(k, 1);
    Scalar l = std::max(eval_level<Scalar>(f.base, base), eval_level<Scalar>(f.fiber, fiber));
    for (const auto& m : f.excluded) l = std::max(l, -cabs<Scalar>(p[k] - evaluate_marker<Scalar>(m, base)));
    return l;
  }

  Scalar operator()(const regions::Precise& pr) const {
    if (pr.precision <= precision_of<Scalar>()) return eval_level<Scalar>(pr.inner, p);
    if (pr.precision == Precision::Extended)
      return static_cast<Scalar>(eval_level<long double>(pr.inner, point_cast<long double>(p)));
    return static_cast<Scalar>(eval_level<Quad>(pr.inner, point_cast<Quad>(p)));
  }
};

template <class Scalar>
Scalar eval_level(const Region& r, const PointT<Scalar>& p) {
  return std::visit(LevelVisitor<Scalar>{p}, r.node().v);
}

// ---------------------------------------------------------------------------
// Enclosures: products of Euclidean balls, pushed through maps.

struct Block {
  PointN center;
  double radius;
};

struct Polyball {
  std::vector<Block> blocks;
  bool unbounded = false;

  int dim() const {
    int n = 0;
    for (const auto& b : blocks) n += static_cast<int>(b.center.size());
    return n;
  }
};

Polyball unbounded_polyball() { return Polyball{{}, true}; }

Polyball from_box(const Box& box) {
  if (!box.bounded() || box.empty()) return unbounded_polyball();
  Polyball pb;
  for (Eigen::Index k = 0; k < box.lo.size() / 2; ++k) {
    const double cx = 0.5 * (box.lo[2 * k] + box.hi[2 * k]);
    const double cy = 0.5 * (box.lo[2 * k + 1] + box.hi[2 * k + 1]);
    const double r = 0.5 * std::hypot(box.hi[2 * k] - box.lo[2 * k], box.hi[2 * k + 1] - box.lo[2 * k + 1]);
    pb.blocks.push_back({make_point({Complex(cx, cy)}), r});
  }
  return pb;
}

Box to_box(const Polyball& pb, int dim) {
  if (pb.unbounded) return Box::everything(2 * dim);
  Box box{RealPoint(2 * dim), RealPoint(2 * dim)};
  Eigen::Index k = 0;
  for (const auto& b : pb.blocks)
    for (Eigen::Index c = 0; c < b.center.size(); ++c, ++k) {
      box.lo[2 * k] = b.center[c].real() - b.radius;
      box.hi[2 * k] = b.center[c].real() + b.radius;
      box.lo[2 * k + 1] = b.center[c].imag() - b.radius;
      box.hi[2 * k + 1] = b.center[c].imag() + b.radius;
    }
  return box;
}

Block merged(const Polyball& pb) {
  PointN c(pb.dim());
  double r2 = 0.0;
  Eigen::Index k = 0;
  for (const auto& b : pb.blocks) {
    c.segment(k, b.center.size()) = b.center;
    k += b.center.size();
    r2 += b.radius * b.radius;
  }
  return {c, std::sqrt(r2)};
}

// Projection of the polyball onto coordinates [offset, offset + n).
Polyball project(const Polyball& pb, int offset, int n) {
  Polyball out;
  int k = 0;
  for (const auto& b : pb.blocks) {
    const int m = static_cast<int>(b.center.size());
    const int lo = std::max(k, offset), hi = std::min(k + m, offset + n);
    if (lo < hi) out.blocks.push_back({b.center.segment(lo - k, hi - lo), b.radius});
    k += m;
  }
  return out;
}

Polyball single(Block b) { return Polyball{{std::move(b)}, false}; }

Polyball image_of(const ConformalMap& f, const Polyball& pb);

// Image of a disc under z -> (a z + b) / (c z + d), or nothing when the pole
// is not safely outside.
std::optional<Block> mobius_disc_image(const Eigen::Matrix2cd& m, const Block& disc) {
  const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  const Complex z0 = disc.center[0];
  const double r = disc.radius;
  const double scale = m.cwiseAbs().maxCoeff();
  auto f = [&](Complex z) { return (a * z + b) / (c * z + d); };
  if (std::abs(c) < 1e-15 * scale) {
    return Block{make_point({f(z0)}), std::abs(a / d) * r * (1 + 1e-12) + 1e-15};
  }
  const Complex pole = -d / c;
  const double dist = std::abs(pole - z0);
  if (dist <= r * (1 + 1e-9) + 1e-12) return std::nullopt;
  const Complex u = (pole - z0) / dist;
  // The line through the centre and the pole maps to a line orthogonal to
  // the image circle, so these two points map to a diameter.
  const Complex w1 = f(z0 + r * u), w2 = f(z0 - r * u);
  return Block{make_point({0.5 * (w1 + w2)}), 0.5 * std::abs(w1 - w2) * (1 + 1e-12) + 1e-15};
}

Polyball isometric_image(const ConformalMap& f, const Polyball& pb) {
  const Block b = merged(pb);
  return single(Block{autpert::apply(f, b.center), b.radius});
}

Polyball image_of(const ConformalMap& f, const Polyball& pb) {
  if (pb.unbounded) return pb;
  if (const auto m = mobius_matrix(f); m && pb.dim() == 1) {
    if (auto b = mobius_disc_image(*m, pb.blocks.front())) return single(*b);
    return unbounded_polyball();
  }
  return std::visit(
      Overloaded{
          [&](const maps::Identity&) { return pb; },
          [&](const maps::Rotation&) {
            // Acts on one coordinate, isometrically inside its block.
            Polyball out = pb;
            Eigen::Index k = 0;
            const PointN c = merged(pb).center;
            const PointN fc = autpert::apply(f, c);
            for (auto& b : out.blocks) {
              b.center = fc.segment(k, b.center.size());
              k += b.center.size();
            }
            return out;
          },
          [&](const maps::Gj& g) {
            Polyball out = project(pb, 0, 1);
            Polyball rest1 = project(pb, 1, 1), rest2 = project(pb, 2, 1);
            out.blocks.insert(out.blocks.end(), rest1.blocks.begin(), rest1.blocks.end());
            out.blocks.insert(out.blocks.end(), rest2.blocks.begin(), rest2.blocks.end());
            out.blocks[0].center[0] *= std::polar(1.0, g.t);
            out.blocks[1].center[0] += g.t / g.j;
            return out;
          },
          [&](const maps::Permutation&) { return isometric_image(f, pb); },
          [&](const maps::Unitary&) { return isometric_image(f, pb); },
          [&](const maps::Similarity& s) {
            Polyball out = pb;
            Eigen::Index k = 0;
            for (auto& b : out.blocks) {
              b.center = s.scale * b.center + s.shift.segment(k, b.center.size());
              k += b.center.size();
              b.radius *= s.scale;
            }
            return out;
          },
          [&](const maps::BallShift& bs) {
            const Block b = merged(pb);
            const double outer = b.center.norm() + b.radius;
            const int n = static_cast<int>(b.center.size());
            if (outer <= 1.0 + 1e-12) return single(Block{PointN::Zero(n), 1.0 + 1e-12});
            const double reach1 = std::abs(b.center[0]) + b.radius;
            const double den = 1.0 - std::abs(bs.a) * reach1;
            if (den <= 1e-12) return unbounded_polyball();
            const double rest = n > 1 ? b.center.tail(n - 1).norm() + b.radius : 0.0;
            const double s = std::sqrt((1 - bs.a) * (1 + bs.a));
            return single(Block{PointN::Zero(n), std::hypot(reach1 + std::abs(bs.a), s * rest) / den});
          },
          [&](const maps::StripToDisc&) {
            const Block& b = pb.blocks.front();
            if (std::abs(b.center[0].imag()) + b.radius < 1.0) return single(Block{make_point({0.0}), 1.0});
            return unbounded_polyball();
          },
          [&](const maps::Product& prod) {
            Polyball out;
            int offset = 0;
            for (const auto& part : prod.parts) {
              const int n = arity(part) ? *arity(part) : min_dim(part);
              Polyball sub = image_of(part, project(pb, offset, n));
              if (sub.unbounded) return unbounded_polyball();
              out.blocks.insert(out.blocks.end(), sub.blocks.begin(), sub.blocks.end());
              offset += n;
            }
            return out;
          },
          [&](const maps::Composition& c) {
            Polyball cur = pb;
            for (auto it = c.chain.rbegin(); it != c.chain.rend() && !cur.unbounded; ++it) cur = image_of(*it, cur);
            return cur;
          },
          [&](const maps::Inverse& inv) {
            if (std::holds_alternative<maps::StripToDisc>(inv.inner.node().v)) {
              // |atanh w| <= atanh |w| from the power series.
              const Block& b = pb.blocks.front();
              const double reach = std::abs(b.center[0]) + b.radius;
              if (reach >= 1.0) return unbounded_polyball();
              return single(Block{make_point({0.0}), 4.0 / M_PI * std::atanh(reach) * (1 + 1e-12)});
            }
            const ConformalMap g = inverse(inv.inner);
            if (std::holds_alternative<maps::Inverse>(g.node().v)) return unbounded_polyball();
            return image_of(g, pb);
          },
          [&](const maps::Precise& p) { return image_of(p.inner, pb); },
          [&](const auto&) { return unbounded_polyball(); },
      },
      f.node().v);
}

double spread(const Polyball& pb) {
  if (pb.unbounded) return std::numeric_limits<double>::infinity();
  double s = 0.0;
  for (const auto& b : pb.blocks) s += b.radius * b.radius * static_cast<double>(b.center.size());
  return s;
}

Polyball enclosure(const Region& r);

// Box around f(B). Product maps act factor by factor, which keeps bounded
// factors bounded next to unbounded ones; the strip map sends anything in the
// closed strip |Im z| <= 1 into the closed unit disc.
Box mapped_box(const ConformalMap& f, const Box& b) {
  const int n = static_cast<int>(b.lo.size() / 2);
  if (const auto* prod = std::get_if<maps::Product>(&f.node().v)) {
    Box out = b;
    Eigen::Index k = 0;
    for (const auto& part : prod->parts) {
      const Eigen::Index m = 2 * (arity(part) ? *arity(part) : min_dim(part));
      const Box img = mapped_box(part, Box{b.lo.segment(k, m), b.hi.segment(k, m)});
      out.lo.segment(k, m) = img.lo;
      out.hi.segment(k, m) = img.hi;
      k += m;
    }
    return out;
  }
  if (std::holds_alternative<maps::Identity>(f.node().v)) return b;
  if (std::holds_alternative<maps::StripToDisc>(f.node().v) && b.lo[1] >= -1.0 && b.hi[1] <= 1.0)
    return Box{RealPoint{{-1.0, -1.0}}, RealPoint{{1.0, 1.0}}};
  return to_box(image_of(f, from_box(b)), n);
}

Box box_of(const Region& r) {
  const int n = r.dim();
  return std::visit(
      Overloaded{
          [&](const regions::Disc& d) {
            return Box{RealPoint{{d.center.real() - d.radius, d.center.imag() - d.radius}},
                       RealPoint{{d.center.real() + d.radius, d.center.imag() + d.radius}}};
          },
          [&](const regions::Ball& b) { return to_box(single(Block{b.center, b.radius}), n); },
          [&](const regions::HalfPlane& h) {
            Box box = Box::everything(2);
            constexpr double eps = 1e-15;
            if (std::abs(h.normal - Complex(1, 0)) < eps) box.lo[0] = h.offset;
            if (std::abs(h.normal - Complex(-1, 0)) < eps) box.hi[0] = -h.offset;
            if (std::abs(h.normal - Complex(0, 1)) < eps) box.lo[1] = h.offset;
            if (std::abs(h.normal - Complex(0, -1)) < eps) box.hi[1] = -h.offset;
            return box;
          },
          [&](const regions::Complement&) { return Box::everything(2 * n); },
          [&](const regions::Union& u) {
            Box box = box_of(u.parts.front());
            for (std::size_t k = 1; k < u.parts.size(); ++k) box = Box::hull(box, box_of(u.parts[k]));
            return box;
          },
          [&](const regions::Intersection& u) {
            Box box = box_of(u.parts.front());
            for (std::size_t k = 1; k < u.parts.size(); ++k) box = Box::intersect(box, box_of(u.parts[k]));
            return box;
          },
          [&](const regions::Difference& d) { return box_of(d.a); },
          [&](const regions::Mapped& m) { return Box::intersect(to_box(enclosure(r), n), mapped_box(m.map, box_of(m.inner))); },
          [&](const regions::Punctured& p) { return box_of(p.inner); },
          [&](const regions::Product& p) {
            Box box{RealPoint(2 * n), RealPoint(2 * n)};
            Eigen::Index k = 0;
            for (const auto& f : p.factors) {
              const Box b = box_of(f);
              box.lo.segment(k, b.lo.size()) = b.lo;
              box.hi.segment(k, b.hi.size()) = b.hi;
              k += b.lo.size();
            }
            return box;
          },
          [&](const regions::Fibered& f) {
            const Box b = box_of(f.base), w = box_of(f.fiber);
            Box box{RealPoint(2 * n), RealPoint(2 * n)};
            box.lo << b.lo, w.lo;
            box.hi << b.hi, w.hi;
            return box;
          },
          [&](const regions::Precise& p) { return box_of(p.inner); },
      },
      r.node().v);
}

Polyball enclosure(const Region& r) {
  return std::visit(Overloaded{
                        [&](const regions::Disc& d) { return single(Block{make_point({d.center}), d.radius}); },
                        [&](const regions::Ball& b) { return single(Block{b.center, b.radius}); },
                        [&](const regions::Mapped& m) {
                          Polyball img = image_of(m.map, enclosure(m.inner));
                          return img;
                        },
                        [&](const regions::Punctured& p) { return enclosure(p.inner); },
                        [&](const regions::Difference& d) { return enclosure(d.a); },
                        [&](const regions::Precise& p) { return enclosure(p.inner); },
                        [&](const regions::Product& p) {
                          Polyball out;
                          for (const auto& f : p.factors) {
                            Polyball sub = enclosure(f);
                            if (sub.unbounded) return unbounded_polyball();
                            out.blocks.insert(out.blocks.end(), sub.blocks.begin(), sub.blocks.end());
                          }
                          return out;
                        },
                        [&](const regions::Intersection& u) {
                          Polyball best = from_box(box_of(r));
                          for (const auto& part : u.parts) {
                            Polyball cand = enclosure(part);
                            if (spread(cand) < spread(best)) best = cand;
                          }
                          return best;
                        },
                        [&](const auto&) { return from_box(box_of(r)); },
                    },
                    r.node().v);
}


void print(std::ostream& os, const Region& r);

void print_list(std::ostream& os, const std::vector<Region>& rs) {
  for (std::size_t k = 0; k < rs.size(); ++k) {
    if (k) os << ", ";
    print(os, rs[k]);
  }
}

void print(std::ostream& os, const Region& r) {
  std::visit(Overloaded{
                 [&](const regions::Disc& d) {
                   os << "disc(" << format_complex(d.center) << ", " << format_double(d.radius) << ")";
                 },
                 [&](const regions::Ball& b) {
                   os << "ball(" << format_point(b.center) << ", " << format_double(b.radius) << ")";
                 },
                 [&](const regions::HalfPlane& h) {
                   os << "halfplane(" << format_complex(h.normal) << ", " << format_double(h.offset) << ")";
                 },
                 [&](const regions::Complement& c) {
                   os << "compl(";
                   print(os, c.inner);
                   os << ")";
                 },
                 [&](const regions::Union& u) {
                   os << "union(";
                   print_list(os, u.parts);
                   os << ")";
                 },
                 [&](const regions::Intersection& u) {
                   os << "inter(";
                   print_list(os, u.parts);
                   os << ")";
                 },
                 [&](const regions::Difference& d) {
                   os << "diff(";
                   print(os, d.a);
                   os << ", ";
                   print(os, d.b);
                   os << ")";
                 },
                 [&](const regions::Mapped& m) {
                   os << "mapped(" << to_string(m.map) << ", ";
                   print(os, m.inner);
                   os << ")";
                 },
                 [&](const regions::Punctured& p) {
                   os << "puncture(";
                   print(os, p.inner);
                   os << ", [";
                   for (std::size_t k = 0; k < p.punctures.size(); ++k) os << (k ? ", " : "") << format_point(p.punctures[k]);
                   os << "])";
                 },
                 [&](const regions::Product& p) {
                   os << "product(";
                   print_list(os, p.factors);
                   os << ")";
                 },
                 [&](const regions::Fibered& f) {
                   os << "fibered(";
                   print(os, f.base);
                   os << ", ";
                   print(os, f.fiber);
                   for (const auto& m : f.excluded) os << ", " << to_string(m);
                   os << ")";
                 },
                 [&](const regions::Precise& p) {
                   os << to_string(p.precision) << "(";
                   print(os, p.inner);
                   os << ")";
                 },
             },
             r.node().v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Markers

int marker_base_dim(const Marker& m) {
  return std::visit(Overloaded{
                        [](const markers::Diagonal&) { return 1; },
                        [](const markers::Const&) { return 0; },
                        [](const markers::Pj&) { return 2; },
                    },
                    m);
}

template <class Scalar>
std::complex<Scalar> evaluate_marker(const Marker& m, const PointT<Scalar>& base) {
  return std::visit(Overloaded{
                        [&](const markers::Diagonal&) { return base[0]; },
                        [&](const markers::Const& c) { return cplx<Scalar>(c.c); },
                        [&](const markers::Pj& pj) {
                          const std::complex<Scalar> z1 = base[0], z2 = base[1];
                          const Scalar j(pj.j);
                          const std::complex<Scalar> num = z1 / (cabs<Scalar>(z1) + Scalar(1) / (j + Scalar(1)));
                          const std::complex<Scalar> e = std::exp(std::complex<Scalar>(Scalar(0), j) * z2);
                          return num / (e / cabs<Scalar>(e));
                        },
                    },
                    m);
}

template Complex evaluate_marker<double>(const Marker&, const PointT<double>&);
template std::complex<long double> evaluate_marker<long double>(const Marker&, const PointT<long double>&);
template std::complex<Quad> evaluate_marker<Quad>(const Marker&, const PointT<Quad>&);

std::string to_string(const Marker& m) {
  return std::visit(Overloaded{
                        [](const markers::Diagonal&) { return std::string("diag"); },
                        [](const markers::Const& c) { return "const(" + format_complex(c.c) + ")"; },
                        [](const markers::Pj& p) { return "pj(" + std::to_string(p.j) + ")"; },
                    },
                    m);
}

// ---------------------------------------------------------------------------
// Constructors

Region Region::disc(Complex center, double radius) {
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) throw DomainError("disc centre must be finite");
  require_positive(radius, "disc");
  return make(regions::Disc{center, radius}, 1);
}

Region Region::ball(const PointN& center, double radius) {
  if (center.size() < 1 || center.size() > kMaxComplexDim) throw DimensionError("ball dimension must be 1..3");
  if (!all_finite(center)) throw DomainError("ball centre must be finite");
  require_positive(radius, "ball");
  return make(regions::Ball{center, radius}, static_cast<int>(center.size()));
}

Region Region::half_plane(Complex unit_normal, double offset) {
  if (std::abs(std::abs(unit_normal) - 1.0) > 1e-12) throw DomainError("halfplane normal must be a unit complex number");
  if (!std::isfinite(offset)) throw DomainError("halfplane offset must be finite");
  return make(regions::HalfPlane{unit_normal, offset}, 1);
}

Region Region::complement(Region r) {
  const int n = r.dim();
  return make(regions::Complement{std::move(r)}, n);
}

Region Region::union_of(std::vector<Region> parts) {
  require_same_dim(parts, "union");
  const int n = parts.front().dim();
  return make(regions::Union{std::move(parts)}, n);
}

Region Region::intersection(std::vector<Region> parts) {
  require_same_dim(parts, "inter");
  const int n = parts.front().dim();
  return make(regions::Intersection{std::move(parts)}, n);
}

Region Region::difference(Region a, Region b) {
  if (a.dim() != b.dim()) throw DimensionError("diff: mixed dimensions");
  const int n = a.dim();
  return make(regions::Difference{std::move(a), std::move(b)}, n);
}

Region Region::mapped(ConformalMap f, Region r) {
  if (!accepts_dim(f, r.dim())) throw DimensionError("mapped: map cannot act on the region's dimension");
  const int n = r.dim();
  return make(regions::Mapped{std::move(f), std::move(r)}, n);
}

Region Region::punctured(Region r, std::vector<PointN> punctures) {
  for (const auto& p : punctures) {
    if (p.size() != r.dim()) throw DimensionError("puncture: point dimension differs from the region's");
    if (!all_finite(p)) throw DomainError("puncture: points must be finite");
  }
  const int n = r.dim();
  return make(regions::Punctured{std::move(r), std::move(punctures)}, n);
}

Region Region::product(std::vector<Region> factors) {
  if (factors.empty()) throw DomainError("product needs at least one factor");
  int n = 0;
  for (const auto& f : factors) n += f.dim();
  if (n > kMaxComplexDim) throw DimensionError("product dimension exceeds 3");
  return make(regions::Product{std::move(factors)}, n);
}

Region Region::fibered(Region base, Region fiber, std::vector<Marker> excluded) {
  if (fiber.dim() != 1) throw DimensionError("fibered: fiber must be planar");
  const int n = base.dim() + 1;
  if (n > kMaxComplexDim) throw DimensionError("fibered dimension exceeds 3");
  for (const auto& m : excluded)
    if (marker_base_dim(m) > base.dim()) throw DimensionError("fibered: marker needs a larger base");
  for (const auto& m : excluded)
    if (const auto* pj = std::get_if<markers::Pj>(&m); pj && pj->j < 1) throw DomainError("pj index must be positive");
  return make(regions::Fibered{std::move(base), std::move(fiber), std::move(excluded)}, n);
}

Region Region::with_precision(Precision p, Region r) {
  if (p == Precision::Double) return r;
  const int n = r.dim();
  return make(regions::Precise{p, std::move(r)}, n);
}

// ---------------------------------------------------------------------------

template <class Scalar>
Scalar level(const Region& r, const PointT<Scalar>& p) {
  if (p.size() != r.dim()) throw DimensionError("point dimension differs from the region's");
  return eval_level<Scalar>(r, p);
}

template double level<double>(const Region&, const PointT<double>&);
template long double level<long double>(const Region&, const PointT<long double>&);
template Quad level<Quad>(const Region&, const PointT<Quad>&);

Classification contains(const Region& r, const PointN& p, double tau) {
  const double l = level(r, p);
  if (std::isnan(l)) throw DomainError("membership evaluated to NaN");
  if (l < -tau) return Classification::Interior;
  if (l > tau) return Classification::Exterior;
  return Classification::Boundary;
}

Box bounding_box(const Region& r) {
  Box b = box_of(r);
  // Mapped nodes already use the enclosure; elsewhere the enclosure can still
  // be tighter (intersections of mapped balls, for instance).
  const Box e = to_box(enclosure(r), r.dim());
  return Box::intersect(b, e);
}

bool is_bounded(const Region& r) { return bounding_box(r).bounded(); }

Precision required_precision(const Region& r) {
  return std::visit(Overloaded{
                        [&](const regions::Complement& c) { return required_precision(c.inner); },
                        [&](const regions::Union& u) {
                          Precision p = Precision::Double;
                          for (const auto& x : u.parts) p = max_precision(p, required_precision(x));
                          return p;
                        },
                        [&](const regions::Intersection& u) {
                          Precision p = Precision::Double;
                          for (const auto& x : u.parts) p = max_precision(p, required_precision(x));
                          return p;
                        },
                        [&](const regions::Difference& d) {
                          return max_precision(required_precision(d.a), required_precision(d.b));
                        },
                        [&](const regions::Mapped& m) {
                          return max_precision(required_precision(m.map), required_precision(m.inner));
                        },
                        [&](const regions::Punctured& p) { return required_precision(p.inner); },
                        [&](const regions::Product& p) {
                          Precision q = Precision::Double;
                          for (const auto& x : p.factors) q = max_precision(q, required_precision(x));
                          return q;
                        },
                        [&](const regions::Fibered& f) {
                          return max_precision(required_precision(f.base), required_precision(f.fiber));
                        },
                        [&](const regions::Precise& p) { return max_precision(p.precision, required_precision(p.inner)); },
                        [&](const auto&) { return Precision::Double; },
                    },
                    r.node().v);
}

std::string to_string(const Region& r) {
  std::ostringstream os;
  print(os, r);
  return os.str();
}

}  // namespace autpert
