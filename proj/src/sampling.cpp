#include "autpert/sampling.hpp"
#include "autpert/rng.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace autpert {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// One step of the path from the root to a leaf: the node and which child was
// taken.
struct Frame {
  const RegionNode* node;
  int child;
};

using Path = std::vector<Frame>;

enum class LeafKind { Circle, Line, Sphere, Puncture, Feature };

struct Leaf {
  LeafKind kind;
  Path path;
  PointN center;  // circle / sphere centre, or the puncture
  double radius = 0.0;
  Complex normal{};  // lines
  double offset = 0.0;
  const regions::Fibered* fibered = nullptr;
};

struct Collected {
  std::vector<Leaf> leaves;
  bool needs_ambient = false;
};

void collect(const Region& r, Path& path, Collected& out) {
  auto down = [&](const Region& child, int idx) {
    path.push_back({&r.node(), idx});
    collect(child, path, out);
    path.pop_back();
  };
  std::visit(Overloaded{
                 [&](const regions::Disc& d) { out.leaves.push_back({LeafKind::Circle, path, make_point({d.center}), d.radius}); },
                 [&](const regions::Ball& b) {
                   out.leaves.push_back({b.center.size() == 1 ? LeafKind::Circle : LeafKind::Sphere, path, b.center, b.radius});
                 },
                 [&](const regions::HalfPlane& h) {
                   Leaf l{LeafKind::Line, path, make_point({0.0}), 0.0};
                   l.normal = h.normal;
                   l.offset = h.offset;
                   out.leaves.push_back(l);
                 },
                 [&](const regions::Complement& c) { down(c.inner, 0); },
                 [&](const regions::Union& u) {
                   for (std::size_t k = 0; k < u.parts.size(); ++k) down(u.parts[k], static_cast<int>(k));
                 },
                 [&](const regions::Intersection& u) {
                   for (std::size_t k = 0; k < u.parts.size(); ++k) down(u.parts[k], static_cast<int>(k));
                 },
                 [&](const regions::Difference& d) {
                   down(d.a, 0);
                   down(d.b, 1);
                 },
                 [&](const regions::Mapped& m) { down(m.inner, 0); },
                 [&](const regions::Precise& p) { down(p.inner, 0); },
                 [&](const regions::Punctured& p) {
                   for (const auto& x : p.punctures) {
                     // The frame for the Punctured node itself marks child -1:
                     // the inner region is checked, not skipped.
                     Path pp = path;
                     pp.push_back({&r.node(), -1});
                     out.leaves.push_back({LeafKind::Puncture, pp, x, 0.0});
                   }
                   down(p.inner, 0);
                 },
                 [&](const regions::Product&) { out.needs_ambient = true; },
                 [&](const regions::Fibered& f) {
                   out.needs_ambient = true;
                   Leaf l{LeafKind::Feature, path, PointN(), 0.0};
                   l.fibered = &f;
                   out.leaves.push_back(l);
                 },
             },
             r.node().v);
}

/// Pushes a point given in the coordinates of the node at path depth
/// `from` (exclusive) up to the root.  `accepted` is cleared as soon as one
/// structural condition fails; mapping continues so callers still get an
/// image for refinement decisions.
template <class Scalar>
bool lift(const Path& path, std::size_t from, PointT<Scalar>& cur, double tau, bool want_image) {
  bool accepted = true;
  for (std::size_t i = from; i-- > 0;) {
    const Frame& fr = path[i];
    bool failed = false;
    std::visit(Overloaded{
                   [&](const regions::Union& u) {
                     if (!accepted) return;
                     for (std::size_t k = 0; k < u.parts.size(); ++k)
                       if (static_cast<int>(k) != fr.child && level<Scalar>(u.parts[k], cur) < -Scalar(tau)) {
                         accepted = false;
                         return;
                       }
                   },
                   [&](const regions::Intersection& u) {
                     if (!accepted) return;
                     for (std::size_t k = 0; k < u.parts.size(); ++k)
                       if (static_cast<int>(k) != fr.child && level<Scalar>(u.parts[k], cur) > Scalar(tau)) {
                         accepted = false;
                         return;
                       }
                   },
                   [&](const regions::Difference& d) {
                     if (!accepted) return;
                     if (fr.child == 0 && level<Scalar>(d.b, cur) < -Scalar(tau)) accepted = false;
                     if (fr.child == 1 && level<Scalar>(d.a, cur) > Scalar(tau)) accepted = false;
                   },
                   [&](const regions::Punctured& p) {
                     if (fr.child == -1 && accepted && level<Scalar>(p.inner, cur) > Scalar(tau)) accepted = false;
                   },
                   [&](const regions::Mapped& m) {
                     try {
                       cur = apply<Scalar>(m.map, cur);
                     } catch (const PoleError&) {
                       failed = true;
                       return;
                     }
                     using std::isfinite;
                     for (Eigen::Index k = 0; k < cur.size(); ++k)
                       if (!isfinite(cur[k].real()) || !isfinite(cur[k].imag())) failed = true;
                   },
                   [&](const auto&) {},
               },
               fr.node->v);
    if (failed) return false;
    if (!accepted && !want_image) return false;
  }
  return accepted;
}

struct Sink {
  int dim;
  Precision precision;
  Box window;
  std::size_t max_points;
  std::vector<double> coords;
  std::vector<Quad> exact;

  std::size_t size() const { return coords.size() / (2 * dim); }

  template <class Scalar>
  void push(const PointT<Scalar>& p) {
    RealPoint rp(2 * dim);
    for (int c = 0; c < dim; ++c) {
      rp[2 * c] = static_cast<double>(p[c].real());
      rp[2 * c + 1] = static_cast<double>(p[c].imag());
    }
    if (!window.contains(rp)) return;
    if (size() >= max_points) throw SamplingError("boundary sample exceeds the point budget");
    for (int k = 0; k < 2 * dim; ++k) coords.push_back(rp[k]);
    if (precision != Precision::Double)
      for (int c = 0; c < dim; ++c) {
        exact.push_back(static_cast<Quad>(p[c].real()));
        exact.push_back(static_cast<Quad>(p[c].imag()));
      }
  }
};

template <class Scalar>
bool in_box(const Box& box, const PointT<Scalar>& p, double pad) {
  for (Eigen::Index c = 0; c < p.size(); ++c) {
    const double x = static_cast<double>(p[c].real()), y = static_cast<double>(p[c].imag());
    if (x < box.lo[2 * c] - pad || x > box.hi[2 * c] + pad || y < box.lo[2 * c + 1] - pad || y > box.hi[2 * c + 1] + pad)
      return false;
  }
  return true;
}

// Adaptive sampling of a planar curve: bisect the parameter until the image
// chord is below the resolution.
template <class Scalar>
void sample_curve(const Leaf& leaf, double h, double tau, Sink& sink) {
  using C = std::complex<Scalar>;
  std::function<C(Scalar)> param;
  Scalar t0, t1;
  const Scalar pi = boost::math::constants::pi<Scalar>();
  int n0 = 64;
  if (leaf.kind == LeafKind::Circle) {
    const C c(static_cast<Scalar>(leaf.center[0].real()), static_cast<Scalar>(leaf.center[0].imag()));
    const Scalar r(leaf.radius);
    param = [c, r](Scalar t) {
      using std::cos;
      using std::sin;
      return c + r * C(cos(t), sin(t));
    };
    t0 = 0;
    t1 = 2 * pi;
    n0 = std::max(64, static_cast<int>(std::ceil(2 * M_PI * leaf.radius / h)));
  } else {
    const C n(static_cast<Scalar>(leaf.normal.real()), static_cast<Scalar>(leaf.normal.imag()));
    const Scalar off(leaf.offset);
    param = [n, off](Scalar u) {
      using std::tan;
      return n * C(off, tan(u));
    };
    t0 = -pi / 2;
    t1 = pi / 2;
    n0 = 256;
  }
  struct Sample {
    Scalar t;
    bool ok;        // image exists
    bool accepted;  // passes the structural filter
    PointT<Scalar> w;
  };
  auto eval = [&](Scalar t) {
    Sample s{t, false, false, PointT<Scalar>(1)};
    s.w[0] = param(t);
    PointT<Scalar> cur = s.w;
    s.accepted = lift<Scalar>(leaf.path, leaf.path.size(), cur, tau, true);
    s.ok = true;
    for (Eigen::Index k = 0; k < cur.size(); ++k) {
      using std::isfinite;
      if (!isfinite(cur[k].real()) || !isfinite(cur[k].imag())) s.ok = false;
    }
    // lift returns false both for rejection and for a pole; in the latter
    // case the image is unusable.
    s.w = cur;
    if (!s.ok) s.accepted = false;
    return s;
  };
  const bool closed = leaf.kind == LeafKind::Circle;
  const Scalar step = (t1 - t0) / Scalar(n0);
  std::vector<Sample> base;
  for (int k = 0; k < n0 + (closed ? 0 : -1); ++k) base.push_back(eval(t0 + step * Scalar(closed ? k : k + 1)));
  if (closed) base.push_back(base.front()), base.back().t = t1;

  const double pad = std::max(h, 1e-3 * sink.window.diagonal());
  auto emit = [&](const Sample& s) {
    if (s.accepted) sink.push(s.w);
  };
  auto chord = [](const Sample& a, const Sample& b) {
    using std::sqrt;
    Scalar s(0);
    for (Eigen::Index k = 0; k < a.w.size(); ++k) {
      const C d = a.w[k] - b.w[k];
      s += d.real() * d.real() + d.imag() * d.imag();
    }
    return static_cast<double>(sqrt(s));
  };
  // Depth-first refinement between consecutive base samples.
  for (std::size_t k = 0; k + 1 < base.size(); ++k) {
    emit(base[k]);
    struct Seg {
      Sample a, b;
      int depth;
    };
    std::vector<Seg> stack{{base[k], base[k + 1], 0}};
    while (!stack.empty()) {
      Seg s = stack.back();
      stack.pop_back();
      const bool inside = (s.a.ok && in_box(sink.window, s.a.w, pad)) || (s.b.ok && in_box(sink.window, s.b.w, pad));
      const int limit = inside ? 48 : 8;
      const bool split = (!s.a.ok || !s.b.ok || chord(s.a, s.b) > h) && s.depth < limit;
      if (!split) {
        // Emit the right endpoint unless it is the next base sample.
        if (s.b.t != base[k + 1].t) emit(s.b);
        continue;
      }
      const Sample m = eval((s.a.t + s.b.t) / Scalar(2));
      // Right half first so the left half is processed next (ordered output).
      stack.push_back({m, s.b, s.depth + 1});
      stack.push_back({s.a, m, s.depth + 1});
    }
  }
  if (!closed) emit(base.back());
}

template <class Scalar>
void sample_sphere_leaf(const Leaf& leaf, double h, double tau, Sink& sink) {
  const int n = static_cast<int>(leaf.center.size());
  // Estimate how much the path stretches the sphere, so the leaf step gives
  // roughly h on the root side.  A high quantile ignores small singular spots;
  // their images are covered by the other branches of the tree.
  const std::vector<PointN> coarse = sphere_grid(leaf.center, leaf.radius, 0.35 * leaf.radius);
  std::vector<double> ratios;
  const double eps = 1e-7 * leaf.radius;
  CounterRng rng(17);
  for (const auto& z : coarse) {
    PointT<Scalar> a = point_cast<Scalar>(z);
    lift<Scalar>(leaf.path, leaf.path.size(), a, tau, true);
    // Random tangent direction.
    PointN v(n);
    for (int c = 0; c < n; ++c) v[c] = Complex(rng.normal(), rng.normal());
    const PointN radial = (z - leaf.center) / leaf.radius;
    v -= radial * (radial.adjoint() * v)(0).real();
    v -= Complex(0, 1) * radial * (radial.adjoint() * (Complex(0, -1) * v))(0).real();
    v /= v.norm();
    PointN zb = leaf.center + (z - leaf.center + eps * v).normalized() * leaf.radius;
    PointT<Scalar> b = point_cast<Scalar>(zb);
    lift<Scalar>(leaf.path, leaf.path.size(), b, tau, true);
    double d = 0;
    for (int c = 0; c < n; ++c) {
      const auto diff = a[c] - b[c];
      d += static_cast<double>(diff.real() * diff.real() + diff.imag() * diff.imag());
    }
    const double ratio = std::sqrt(d) / (zb - z).norm();
    if (std::isfinite(ratio)) ratios.push_back(ratio);
  }
  double rho = 1.0;
  if (!ratios.empty()) {
    std::sort(ratios.begin(), ratios.end());
    rho = ratios[static_cast<std::size_t>(0.9 * static_cast<double>(ratios.size() - 1))];
  }
  double step = std::min(0.85 * h / std::max(rho, 1e-300), 0.5 * leaf.radius);
  // Keep the leaf within an even share of the point budget.
  const double area = 2.0 * std::pow(M_PI, n) / std::tgamma(n) * std::pow(leaf.radius, 2 * n - 1);
  const double share = static_cast<double>(sink.max_points) / 4.0;
  step = std::max(step, std::pow(area / share, 1.0 / (2 * n - 1)));
  for (const auto& z : sphere_grid(leaf.center, leaf.radius, step)) {
    PointT<Scalar> p = point_cast<Scalar>(z);
    if (lift<Scalar>(leaf.path, leaf.path.size(), p, tau, false)) sink.push(p);
  }
}

template <class Scalar>
void sample_puncture(const Leaf& leaf, double tau, Sink& sink) {
  PointT<Scalar> p = point_cast<Scalar>(leaf.center);
  if (lift<Scalar>(leaf.path, leaf.path.size(), p, tau, false)) sink.push(p);
}

// Grid of points strictly inside a box: m cells per axis, cell centres.
struct Grid {
  Box box;
  int m;
  int d;
  RealPoint point(std::size_t idx) const {
    RealPoint p(d);
    for (int k = 0; k < d; ++k) {
      const int i = static_cast<int>(idx % m);
      idx /= m;
      p[k] = box.lo[k] + (box.hi[k] - box.lo[k]) * (i + 0.5) / m;
    }
    return p;
  }
  std::size_t count() const {
    std::size_t c = 1;
    for (int k = 0; k < d; ++k) c *= static_cast<std::size_t>(m);
    return c;
  }
  double cell_diagonal() const {
    double s = 0;
    for (int k = 0; k < d; ++k) s += std::pow((box.hi[k] - box.lo[k]) / m, 2);
    return std::sqrt(s);
  }
};

int cells_per_axis(std::size_t budget, int d) {
  return std::max(3, static_cast<int>(std::floor(std::pow(static_cast<double>(budget), 1.0 / d) + 1e-9)));
}

template <class Scalar>
PointT<Scalar> to_point(const RealPoint& r) {
  PointT<Scalar> p(r.size() / 2);
  for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = std::complex<Scalar>(static_cast<Scalar>(r[2 * k]), static_cast<Scalar>(r[2 * k + 1]));
  return p;
}

template <class Scalar>
void sample_ambient(const Region& r, const Box& box, const SampleOptions& opt, Sink& sink, double& resolution) {
  const int d = 2 * r.dim();
  const Grid grid{box, cells_per_axis(opt.ambient_budget, d), d};
  resolution = grid.cell_diagonal();
  const std::size_t count = grid.count();
  std::vector<double> lv(count);
  for (std::size_t i = 0; i < count; ++i) lv[i] = static_cast<double>(level<Scalar>(r, to_point<Scalar>(grid.point(i))));
  const double tau = opt.tau;
  std::size_t stride = 1;
  for (int axis = 0; axis < d; ++axis, stride *= static_cast<std::size_t>(grid.m)) {
    for (std::size_t i = 0; i < count; ++i) {
      const int coord = static_cast<int>((i / stride) % static_cast<std::size_t>(grid.m));
      if (coord + 1 >= grid.m) continue;
      const std::size_t j = i + stride;
      const double a = lv[i], b = lv[j];
      if (!((a < -tau && b > tau) || (a > tau && b < -tau))) continue;
      RealPoint lo = grid.point(i), hi = grid.point(j);
      if (a > 0) std::swap(lo, hi);  // lo interior, hi exterior
      PointT<Scalar> plo = to_point<Scalar>(lo), phi = to_point<Scalar>(hi);
      for (int it = 0; it < opt.bisection_iterations; ++it) {
        const PointT<Scalar> mid = (plo + phi) / Scalar(2);
        const Scalar l = level<Scalar>(r, mid);
        if (l < Scalar(0))
          plo = mid;
        else
          phi = mid;
      }
      sink.push<Scalar>((plo + phi) / Scalar(2));
    }
  }
}

template <class Scalar>
void sample_features(const Leaf& leaf, const Region& root, const SampleOptions& opt, Sink& sink) {
  const regions::Fibered& f = *leaf.fibered;
  const int k = f.base.dim();
  Box base_box = sampling_box(f.base, opt);
  const int m = std::max(4, cells_per_axis(opt.ambient_budget, 2 * root.dim()));
  const Grid grid{base_box, m + 1, 2 * k};
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const PointT<Scalar> b = to_point<Scalar>(grid.point(i));
    if (level<Scalar>(f.base, b) >= -Scalar(opt.tau)) continue;
    for (const auto& mk : f.excluded) {
      PointT<Scalar> p(k + 1);
      p.head(k) = b;
      p[k] = evaluate_marker<Scalar>(mk, b);
      if (level<Scalar>(f.fiber, p.segment(k, 1)) >= -Scalar(opt.tau)) continue;
      // Distinct from the other markers.
      bool clash = false;
      for (const auto& other : f.excluded) {
        if (&other == &mk) continue;
        const auto diff = evaluate_marker<Scalar>(other, b) - p[k];
        if (static_cast<double>(diff.real() * diff.real() + diff.imag() * diff.imag()) < 1e-24) clash = true;
      }
      if (clash) continue;
      if (lift<Scalar>(leaf.path, leaf.path.size(), p, opt.tau, false)) sink.push(p);
    }
  }
}

template <class Scalar>
PointCloud sample_with(const Region& r, double h, const SampleOptions& opt) {
  const Box box = sampling_box(r, opt);
  if (box.empty()) throw EmptyRegionError("region is empty");
  Sink sink{r.dim(), precision_of<Scalar>(), box, opt.max_points, {}, {}};
  Collected col;
  Path path;
  collect(r, path, col);
  double resolution = h;
  if (col.needs_ambient) {
    sample_ambient<Scalar>(r, box, opt, sink, resolution);
    for (const auto& leaf : col.leaves) {
      if (leaf.kind == LeafKind::Puncture) sample_puncture<Scalar>(leaf, opt.tau, sink);
      if (leaf.kind == LeafKind::Feature) sample_features<Scalar>(leaf, r, opt, sink);
    }
  } else {
    for (const auto& leaf : col.leaves) {
      switch (leaf.kind) {
        case LeafKind::Circle:
        case LeafKind::Line:
          sample_curve<Scalar>(leaf, h, opt.tau, sink);
          break;
        case LeafKind::Sphere:
          sample_sphere_leaf<Scalar>(leaf, h, opt.tau, sink);
          break;
        case LeafKind::Puncture:
          sample_puncture<Scalar>(leaf, opt.tau, sink);
          break;
        case LeafKind::Feature:
          break;
      }
    }
  }
  if (sink.size() == 0) throw EmptyRegionError("no boundary found at resolution " + format_double(h));
  PointCloud cloud;
  cloud.dim = r.dim();
  cloud.resolution = resolution;
  cloud.precision = precision_of<Scalar>();
  cloud.points = Eigen::Map<const Eigen::MatrixXd>(sink.coords.data(), 2 * r.dim(), static_cast<Eigen::Index>(sink.size()));
  if (!sink.exact.empty())
    cloud.exact = Eigen::Map<const Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic>>(sink.exact.data(), 2 * r.dim(),
                                                                                          static_cast<Eigen::Index>(sink.size()));
  return cloud;
}

template <class Scalar>
std::vector<PointN> interior_with(const Region& r, std::size_t count, std::uint64_t seed, const SampleOptions& opt) {
  const Box box = sampling_box(r, opt);
  if (box.empty()) throw EmptyRegionError("region is empty");
  CounterRng rng(seed, 0x1A7E);
  std::vector<PointN> out;
  out.reserve(count);
  const std::size_t max_attempts = std::max<std::size_t>(200000, 2000 * count);
  const int d = 2 * r.dim();
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > max_attempts) {
      if (out.empty()) throw EmptyRegionError("no interior point found; region empty or too thin");
      throw SamplingError("interior rejection sampling exhausted its attempts");
    }
    RealPoint x(d);
    for (int k = 0; k < d; ++k) x[k] = rng.uniform(box.lo[k], box.hi[k]);
    const PointN p = from_real(x);
    if (level<Scalar>(r, point_cast<Scalar>(p)) < -Scalar(opt.tau)) out.push_back(p);
  }
  return out;
}

}  // namespace

PointCloud PointCloud::from_points(const std::vector<PointN>& pts, double resolution) {
  if (pts.empty()) throw SamplingError("empty point cloud");
  PointCloud c;
  c.dim = static_cast<int>(pts.front().size());
  c.resolution = resolution;
  c.points.resize(2 * c.dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (pts[k].size() != c.dim) throw DimensionError("point cloud with mixed dimensions");
    c.points.col(static_cast<Eigen::Index>(k)) = to_real(pts[k]);
  }
  return c;
}

Box sampling_box(const Region& r, const SampleOptions& opt) {
  Box box = bounding_box(r);
  if (opt.window) box = Box::intersect(box, *opt.window);
  for (Eigen::Index k = 0; k < box.lo.size(); ++k) {
    if (!std::isfinite(box.lo[k])) box.lo[k] = -opt.unbounded_half_width;
    if (!std::isfinite(box.hi[k])) box.hi[k] = opt.unbounded_half_width;
  }
  return box;
}

PointCloud boundary_sample(const Region& r, double h, const SampleOptions& opt) {
  if (!(h > 0.0)) throw DomainError("resolution must be positive");
  switch (required_precision(r)) {
    case Precision::Double:
      return sample_with<double>(r, h, opt);
    case Precision::Extended:
      return sample_with<long double>(r, h, opt);
    case Precision::Quad:
      return sample_with<Quad>(r, h, opt);
  }
  return {};
}

std::vector<PointN> interior_sample(const Region& r, std::size_t count, std::uint64_t seed, const SampleOptions& opt) {
  if (count < 1) throw DomainError("interior_sample needs count >= 1");
  switch (required_precision(r)) {
    case Precision::Double:
      return interior_with<double>(r, count, seed, opt);
    case Precision::Extended:
      return interior_with<long double>(r, count, seed, opt);
    case Precision::Quad:
      return interior_with<Quad>(r, count, seed, opt);
  }
  return {};
}

std::vector<PointN> sphere_grid(const PointN& center, double radius, double step) {
  if (!(step > 0.0) || !(radius > 0.0)) throw DomainError("sphere_grid needs positive radius and step");
  const int n = static_cast<int>(center.size());
  auto circle = [&](double r) {
    std::vector<Complex> zs;
    const int k = std::max(1, static_cast<int>(std::ceil(2 * M_PI * r / step)));
    if (r <= 0.0) return std::vector<Complex>{Complex(0)};
    for (int i = 0; i < k; ++i) zs.push_back(std::polar(r, 2 * M_PI * i / k));
    return zs;
  };
  // S^{2n-1}(r) = { (r cos e  u, r sin e  v) : u in S^1, v in S^{2n-3} }.
  std::function<std::vector<PointN>(int, double)> rec = [&](int m, double r) -> std::vector<PointN> {
    std::vector<PointN> out;
    if (m == 1) {
      for (Complex z : circle(r)) out.push_back(make_point({z}));
      return out;
    }
    const int rows = std::max(2, static_cast<int>(std::ceil(0.5 * M_PI * r / step)) + 1);
    for (int i = 0; i < rows; ++i) {
      const double e = 0.5 * M_PI * i / (rows - 1);
      const double rc = r * std::cos(e), rs = r * std::sin(e);
      const auto head = circle(i == rows - 1 ? 0.0 : rc);
      const auto tail = i == 0 ? std::vector<PointN>{PointN::Zero(m - 1)} : rec(m - 1, rs);
      for (Complex z : head)
        for (const auto& t : tail) {
          PointN p(m);
          p[0] = z;
          p.tail(m - 1) = t;
          out.push_back(p);
        }
    }
    return out;
  };
  std::vector<PointN> pts = rec(n, radius);
  for (auto& p : pts) p += center;
  return pts;
}

}  // namespace autpert
