#include "autpert/constructions.hpp"
#include "autpert/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace autpert {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double unit_roundoff(Precision p) {
  switch (p) {
    case Precision::Double:
      return 0x1.0p-53;
    case Precision::Extended:
      return 0x1.0p-64;
    case Precision::Quad:
      return 0x1.0p-113;
  }
  return 0x1.0p-53;
}

// Lowest precision whose rounding, amplified by `gain`, stays well below the
// classification tolerance.
Precision precision_for_gain(double gain, double tau = kDefaultTau) {
  for (Precision p : {Precision::Double, Precision::Extended, Precision::Quad})
    if (gain * unit_roundoff(p) <= 1e-2 * tau) return p;
  return Precision::Quad;
}

/// Unitary whose first column is the unit vector v.
ComplexMatrix unitary_with_first_column(const PointN& v) {
  const Eigen::Index n = v.size();
  ComplexMatrix a = ComplexMatrix::Identity(n, n);
  a.col(0) = v;
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ();
  // Fix the phase of the first column.
  const Complex ph = (q.col(0).adjoint() * v)(0);
  q.col(0) *= ph / std::abs(ph);
  return q;
}

VerificationReport simple_report(std::string name, double dev, double tol, std::size_t samples) {
  VerificationReport r;
  r.check = std::move(name);
  r.max_deviation = dev;
  r.tolerance = tol;
  r.samples = samples;
  r.pass = dev <= tol;
  return r;
}

}  // namespace

double ConstructionResult::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p.value;
  throw DomainError("no parameter named " + name);
}

bool ConstructionResult::audits_pass() const {
  return std::all_of(audits.begin(), audits.end(), [](const VerificationReport& r) { return r.pass; });
}

// ---------------------------------------------------------------------------
// Smallest enclosing ball of balls.

EnclosingBall smallest_enclosing_ball(const std::vector<BallSpec>& balls) {
  if (balls.empty()) throw DomainError("smallest_enclosing_ball of nothing");
  const int n = static_cast<int>(balls.front().center.size());
  const int d = 2 * n;
  const int k = static_cast<int>(balls.size());
  if (k > 16) throw DomainError("smallest_enclosing_ball supports at most 16 balls");
  std::vector<Eigen::VectorXd> c;
  for (const auto& b : balls) {
    if (b.center.size() != n) throw DimensionError("balls of different dimensions");
    if (!(b.radius > 0)) throw DomainError("ball radius must be positive");
    c.push_back(to_real(b.center));
  }
  auto encloses = [&](const Eigen::VectorXd& z, double r) {
    for (int i = 0; i < k; ++i)
      if ((c[i] - z).norm() + balls[i].radius > r * (1 + 1e-12) + 1e-12) return false;
    return true;
  };
  double best_r = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_c;
  std::vector<int> best_s;
  const int max_size = std::min(k, d + 1);
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) s.push_back(i);
    if (static_cast<int>(s.size()) > max_size) continue;
    const int i0 = s.front();
    const double r0 = balls[i0].radius;
    std::vector<std::pair<Eigen::VectorXd, double>> cand;
    if (s.size() == 1) {
      cand.emplace_back(c[i0], r0);
    } else {
      const int m = static_cast<int>(s.size()) - 1;
      Eigen::MatrixXd v(d, m);
      for (int l = 0; l < m; ++l) v.col(l) = c[s[l + 1]] - c[i0];
      const Eigen::MatrixXd g = v.transpose() * v;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
      if (lu.rank() < m) continue;
      Eigen::VectorXd e(m), f(m);
      for (int l = 0; l < m; ++l) {
        const double rl = balls[s[l + 1]].radius;
        e[l] = 0.5 * (v.col(l).squaredNorm() - rl * rl + r0 * r0);
        f[l] = rl - r0;
      }
      const Eigen::VectorXd u = v * lu.solve(e), w = v * lu.solve(f);
      // |u + R w|^2 = (R - r0)^2
      const double qa = w.squaredNorm() - 1.0, qb = 2.0 * (u.dot(w) + r0), qc = u.squaredNorm() - r0 * r0;
      std::vector<double> roots;
      if (std::abs(qa) < 1e-14) {
        if (std::abs(qb) > 0) roots.push_back(-qc / qb);
      } else {
        const double disc = qb * qb - 4 * qa * qc;
        if (disc >= 0) {
          const double sq = std::sqrt(disc);
          const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
          if (q != 0) roots.push_back(q / qa), roots.push_back(qc / q);
        }
      }
      for (double r : roots) {
        bool ok = true;
        for (int i : s) ok = ok && r >= balls[i].radius - 1e-12;
        if (ok) cand.emplace_back(c[i0] + u + r * w, r);
      }
    }
    for (const auto& [z, r] : cand)
      if (r < best_r && encloses(z, r)) {
        best_r = r;
        best_c = z;
        best_s = s;
      }
  }
  if (!std::isfinite(best_r)) throw ConstructionError("no enclosing ball found");
  EnclosingBall out;
  out.center = from_real(best_c);
  out.radius = best_r;
  for (int i = 0; i < k; ++i)
    if (std::abs((c[i] - best_c).norm() + balls[i].radius - best_r) <= 1e-9 * std::max(1.0, best_r)) out.support.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Z_j perturbation.

std::vector<BallSpec> deleted_discs(const Region& d) {
  std::vector<BallSpec> holes;
  auto add_discs = [&](const Region& r, auto&& self) -> void {
    std::visit(Overloaded{
                   [&](const regions::Disc& x) { holes.push_back({make_point({x.center}), x.radius}); },
                   [&](const regions::Union& u) {
                     for (const auto& p : u.parts) self(p, self);
                   },
                   [&](const auto&) { throw DomainError("deleted sets must be discs"); },
               },
               r.node().v);
  };
  auto outer = [&](const Region& r, auto&& self) -> void {
    std::visit(Overloaded{
                   [&](const regions::Disc& x) {
                     if (std::abs(x.center) != 0.0 || x.radius != 1.0) throw DomainError("outer domain must be the unit disc");
                   },
                   [&](const regions::Difference& x) {
                     self(x.a, self);
                     add_discs(x.b, add_discs);
                   },
                   [&](const auto&) { throw DomainError("expected the unit disc minus closed discs"); },
               },
               r.node().v);
  };
  outer(d, outer);
  return holes;
}

double l_bound_audit(double a, double eps1, int samples) {
  // Boundary of S: the arc |z| = 1, Re z >= -1 + eps1, and the chord
  // Re z = -1 + eps1 inside the disc.
  const double x0 = -1 + eps1;
  const double half = std::acos(x0);  // arc is |arg z| <= half
  const double chord = 2 * std::sqrt(std::max(0.0, 1 - x0 * x0));
  const double arc = 2 * half;
  const double total = arc + chord;
  double worst = 0;
  for (int k = 0; k < samples; ++k) {
    const double s = total * k / (samples - 1);
    Complex z;
    if (s <= arc)
      z = std::polar(1.0, -half + s);
    else
      z = Complex(x0, std::sin(half) - (s - arc));
    worst = std::max(worst, std::abs((z + a) / (1.0 + a * z) - 1.0));
  }
  return worst;
}

ConstructionResult zj_perturb(const Region& d, double eps, int j) {
  if (!(eps > 0 && eps < 1)) throw DomainError("eps must lie in (0, 1)");
  if (j < 1) throw DomainError("j must be a positive integer");
  if (j > 40) throw DomainError("j too large for double-precision parameters");
  const auto holes = deleted_discs(d);
  double min_left = 1.0;  // min over holes of Re c - r
  for (std::size_t s = 0; s < holes.size(); ++s) {
    const Complex c = holes[s].center[0];
    const double r = holes[s].radius;
    if (std::abs(c) + r >= 1.0) throw DomainError("deleted disc must lie inside the unit disc");
    if (c.real() - r <= -1.0) throw DomainError("deleted disc must satisfy Re(center) - radius > -1");
    for (std::size_t t = 0; t < s; ++t)
      if (std::abs(c - holes[t].center[0]) <= r + holes[t].radius) throw DomainError("deleted discs must be disjoint");
    min_left = std::min(min_left, c.real() - r);
  }
  const double eps1 = std::min(eps, (1 + min_left) / 2);
  const double two_j = std::ldexp(1.0, -j);
  const double a = 1.0 / (1.0 + two_j * eps1 / (2.0 - two_j));
  const ConformalMap l = ConformalMap::disc_mobius(a);

  // Rounding near -1 is amplified by roughly |L'|^2 there.
  const double gain = std::pow(2.0 / (1.0 - a), 2);
  const Precision prec = precision_for_gain(gain);

  const Region ld = Region::mapped(l, d);
  std::vector<Region> parts{ld};
  for (int k = 1; k < j; ++k) parts.push_back(Region::mapped(ConformalMap::rotation(2 * M_PI * k / j), ld));
  const Region m = parts.size() == 1 ? parts.front() : Region::intersection(parts);
  Region out = Region::mapped(ConformalMap::inverse_of(l), m);
  if (prec != Precision::Double) out = Region::with_precision(prec, out);

  ConstructionResult res("zj_perturb", d, out);
  ConformalMap gen = ConformalMap::compose({ConformalMap::inverse_of(l), ConformalMap::rotation(2 * M_PI / j), l});
  if (prec != Precision::Double) gen = ConformalMap::with_precision(prec, gen);
  res.generators = {gen};
  res.params = {{"eps", eps}, {"eps1", eps1}, {"a", a}, {"j", double(j)}, {"gain", gain}};
  const double sup = l_bound_audit(a, eps1, 10000);
  res.audits.push_back(simple_report("a_bound", sup, two_j, 10000));
  res.notes.push_back("membership precision " + to_string(prec));
  return res;
}

// ---------------------------------------------------------------------------
// Finite group perturbation.

std::vector<BallSpec> union_balls(const Region& d) {
  std::vector<BallSpec> out;
  auto walk = [&](const Region& r, auto&& self) -> void {
    std::visit(Overloaded{
                   [&](const regions::Ball& b) { out.push_back({b.center, b.radius}); },
                   [&](const regions::Disc& b) { out.push_back({make_point({b.center}), b.radius}); },
                   [&](const regions::Union& u) {
                     for (const auto& p : u.parts) self(p, self);
                   },
                   [&](const auto&) { throw DomainError("expected a finite union of balls"); },
               },
               r.node().v);
  };
  walk(d, walk);
  return out;
}

namespace {

// Sup over S = {z in B : |z - q| >= e/2} of |T(z) - p| is at most
// sqrt(g(e^2/8)) with g(v) = 4 alpha (alpha + v) / ((1 - alpha) v - alpha)^2,
// since |T(z) - p|^2 = (alpha^2 |z1 - 1|^2 + alpha (2 - alpha) |z'|^2) / |1 + a z1|^2,
// |z'|^2 <= 2 |1 + z1| and |1 + z1| >= e^2/8 on S; g decreases in v.
double t_bound(double alpha, double e) {
  const double v = e * e / 8;
  const double den = (1 - alpha) * v - alpha;
  if (den <= 0) return std::numeric_limits<double>::infinity();
  return std::sqrt(4 * alpha * (alpha + v)) / den;
}

// Ball automorphism M with M(x) = p and M(y) = -p for distinct unit vectors.
ConformalMap two_point_automorphism(const PointN& x, const PointN& y) {
  const int n = static_cast<int>(x.size());
  std::vector<ConformalMap> chain;  // applied last to first
  // Move the centre of the complex line through x and y to the origin.
  const PointN dxy = y - x;
  const Complex lam = -(dxy.adjoint() * x)(0) / dxy.squaredNorm();
  const PointN c0 = x + lam * dxy;
  PointN x1 = x, y1 = y;
  if (c0.norm() > 1e-14) {
    const double s = c0.norm();
    const ComplexMatrix u1 = unitary_with_first_column(c0 / s);
    const ConformalMap a = ConformalMap::compose({ConformalMap::ball_shift(-s, n), ConformalMap::unitary(u1.adjoint())});
    chain.push_back(a);
    x1 = autpert::apply(a, x);
    y1 = autpert::apply(a, y);
  }
  // Now x1, y1 lie on a complex line through 0: rotate it onto the z1 axis.
  const ComplexMatrix u2 = unitary_with_first_column(x1 / x1.norm());
  chain.push_back(ConformalMap::unitary(u2.adjoint()));
  const Complex ly = (u2.adjoint() * y1)(0);
  double beta = std::arg(ly);
  if (beta <= 0) beta += 2 * M_PI;
  // 1 and e^{i beta} become e^{i g}, e^{i (pi - g)}; a disc automorphism
  // along the imaginary axis then sends them to 1 and -1.
  const double g = (M_PI - beta) / 2;
  const double b = std::tan(g / 2);
  chain.push_back(ConformalMap::rotation(g, 0));
  if (b != 0.0) {
    chain.push_back(ConformalMap::rotation(-M_PI / 2, 0));
    chain.push_back(ConformalMap::ball_shift(-b, n));
    chain.push_back(ConformalMap::rotation(M_PI / 2, 0));
  }
  std::reverse(chain.begin(), chain.end());
  return ConformalMap::compose(chain);
}

}  // namespace

ConstructionResult finite_group_perturb(const Region& d, int m, double eps) {
  const auto balls = union_balls(d);
  const int n = d.dim();
  if (!(m >= 2 && m <= n && n <= kMaxComplexDim)) throw DomainError("need 2 <= m <= n <= 3");
  if (!(eps > 0)) throw DomainError("eps must be positive");
  // Connectivity of the union: the overlap graph must be connected.
  {
    std::vector<int> comp(balls.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int i) { return comp[i] == i ? i : comp[i] = find(comp[i]); };
    for (std::size_t i = 0; i < balls.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if ((balls[i].center - balls[k].center).norm() < balls[i].radius + balls[k].radius) comp[find(int(i))] = find(int(k));
    for (std::size_t i = 0; i < balls.size(); ++i)
      if (find(int(i)) != find(0)) throw DomainError("union of balls is not connected");
  }
  const EnclosingBall b1 = smallest_enclosing_ball(balls);
  const double r1 = b1.radius;
  // L: B1 onto the unit ball.
  const ConformalMap l = ConformalMap::similarity(1.0 / r1, -b1.center / r1);
  PointN p = PointN::Zero(n), q = PointN::Zero(n);
  p[0] = 1;
  q[0] = -1;

  ConformalMap mm = ConformalMap::identity();
  bool whole_ball = false;
  std::vector<PointN> contacts;
  for (int i : b1.support) {
    const PointN off = balls[i].center - b1.center;
    if (off.norm() < 1e-12 * r1) {
      whole_ball = true;  // this ball is B1 itself: every sphere point is a contact
      continue;
    }
    contacts.push_back(off / off.norm());
  }
  if (!whole_ball) {
    double far = -1;
    PointN x, y;
    for (std::size_t i = 0; i < contacts.size(); ++i)
      for (std::size_t k = 0; k < i; ++k)
        if ((contacts[i] - contacts[k]).norm() > far) {
          far = (contacts[i] - contacts[k]).norm();
          x = contacts[i];
          y = contacts[k];
        }
    if (far < 1e-9) throw ConstructionError("enclosing ball touches the union in a single point cluster");
    if ((y - p).norm() < 1e-12 && (x - q).norm() < 1e-12) std::swap(x, y);
    if (!((x - p).norm() < 1e-12 && (y - q).norm() < 1e-12)) mm = two_point_automorphism(x, y);
    const double miss = std::max((autpert::apply(mm, x) - p).norm(), (autpert::apply(mm, y) - q).norm());
    if (miss > 1e-9) throw ConstructionError("failed to move contact points to +-p");
  }
  const ConformalMap ml = ConformalMap::compose({mm, l});

  // Lipschitz constant of F = (M L)^-1 on the closed unit ball.
  const double m0 = autpert::apply_inverse(mm, PointN(PointN::Zero(n))).norm();
  const double lip = r1 * (1 + m0) / (1 - m0);
  // Budget: caps move the boundary by at most 2 delta, the symmetrisation by
  // less than eps~ < delta; both scaled by lip.
  const double eps_n = eps / lip;
  const double delta = std::min(eps_n / 4, 0.45);
  const double eps_t = 0.9 * std::min(delta, 0.125);

  const Region unit = Region::ball(PointN::Zero(n), 1.0);
  const Region mld = Region::mapped(ml, d);
  const Region d1 = Region::union_of({mld, Region::intersection({unit, Region::ball(p, delta)}),
                                      Region::intersection({unit, Region::ball(q, delta)})});

  // Largest alpha (bisection) meeting the certified bound t_bound < eps~.
  double lo = 0, hi = 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (t_bound(mid, eps_t) < 0.99 * eps_t ? lo : hi) = mid;
  }
  const double alpha = lo;
  if (!(alpha > 0)) throw ConstructionError("no admissible alpha");
  const ConformalMap t = ConformalMap::ball_shift(1 - alpha, n);

  const Region td1 = Region::mapped(t, d1);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Region> images;
  std::vector<ConformalMap> sigmas;
  do {
    if (std::is_sorted(perm.begin(), perm.end()))
      images.push_back(td1);
    else
      images.push_back(Region::mapped(ConformalMap::permutation(perm), td1));
  } while (std::next_permutation(perm.begin(), perm.begin() + m));
  const Region d2 = Region::intersection(images);
  const ConformalMap nmap = ConformalMap::compose({t, ml});  // original -> symmetric frame
  const Region out = Region::with_precision(Precision::Quad, Region::mapped(ConformalMap::inverse_of(nmap), d2));

  ConstructionResult res("finite_group_perturb", d, out);
  for (int k = 0; k + 1 < m; ++k) {
    std::vector<int> s(n);
    std::iota(s.begin(), s.end(), 0);
    std::swap(s[k], s[k + 1]);
    res.generators.push_back(ConformalMap::with_precision(
        Precision::Quad, ConformalMap::compose({ConformalMap::inverse_of(nmap), ConformalMap::permutation(s), nmap})));
  }
  for (int c = 0; c < n; ++c) {
    res.params.push_back({"b1_center_re" + std::to_string(c + 1), b1.center[c].real()});
    res.params.push_back({"b1_center_im" + std::to_string(c + 1), b1.center[c].imag()});
  }
  res.params.insert(res.params.end(), {{"b1_radius", r1},
                                       {"lipschitz", lip},
                                       {"eps", eps},
                                       {"eps_normalized", eps_n},
                                       {"delta", delta},
                                       {"eps_tilde", eps_t},
                                       {"alpha", alpha},
                                       {"a", 1 - alpha}});

  // Caps attach to M L (D): a point just inside each cap lies in M L (D).
  double attach = 0;
  for (const PointN& c : {p, q}) attach = std::max(attach, std::max(0.0, level(mld, PointN(c * (1 - delta / 4)))));
  res.audits.push_back(simple_report("cap_connectivity", attach, 0.0, 2));

  // Sampled audit of T(S) inside B(p, eps~) on the sphere and the inner
  // boundary |z - q| = eps~/2, evaluated in quad.
  double worst = 0;
  std::size_t count = 0;
  auto probe = [&](const PointN& z) {
    if ((z - q).norm() < eps_t / 2 * (1 - 1e-12) || z.norm() > 1 + 1e-12) return;
    const auto w = autpert::apply<Quad>(t, point_cast<Quad>(z));
    double dd = 0;
    for (int c = 0; c < n; ++c) dd += static_cast<double>(std::norm(w[c] - std::complex<Quad>(p[c].real(), p[c].imag())));
    worst = std::max(worst, std::sqrt(dd));
    ++count;
  };
  for (const auto& z : sphere_grid(PointN::Zero(n), 1.0, 0.05)) probe(z);
  for (const auto& z : sphere_grid(q, eps_t / 2, eps_t / 40)) probe(z);
  res.audits.push_back(simple_report("t_image", worst, eps_t, count));
  res.notes.push_back(whole_ball ? "input is a single ball; M = id" : "contact points moved to +-p");
  return res;
}

// ---------------------------------------------------------------------------
// Puncture rigidification.

namespace {

struct RoundBall {
  PointN center;
  double radius;
};

RoundBall round_ball(const Region& d) {
  return std::visit(Overloaded{
                        [](const regions::Disc& x) { return RoundBall{make_point({x.center}), x.radius}; },
                        [](const regions::Ball& x) { return RoundBall{x.center, x.radius}; },
                        [](const auto&) -> RoundBall { throw DomainError("expected a disc or a ball"); },
                    },
                    d.node().v);
}

// |phi_z(w)| for the unit ball.
double pseudo_distance(const PointN& z, const PointN& w) {
  const double zz = z.squaredNorm(), ww = w.squaredNorm();
  const Complex zw = (z.adjoint() * w)(0);
  // 1 - |phi_z(w)|^2 = (1-|z|^2)(1-|w|^2)/|1 - <w,z>|^2; the difference form
  // keeps accuracy for nearby points.
  const double num = (w - z).squaredNorm() + std::norm(zw) - zz * ww;
  const double den = std::norm(1.0 - zw);
  return std::sqrt(std::max(0.0, num / den));
}

// Point at hyperbolic offset r tanh-radius along unit direction u from x in
// the unit ball: phi_x^{-1}(r u).
PointN hyperbolic_offset(const PointN& x, const PointN& u) {
  // phi_x^{-1}(v) = phi_x(v) for the involutive automorphism
  // phi_x(v) = (x - P v - s Q v) / (1 - <v, x>), s = sqrt(1 - |x|^2).
  const double xx = x.squaredNorm();
  if (xx == 0.0) return u;
  const Complex vx = (x.adjoint() * u)(0);
  const PointN pv = x * (vx / xx);
  const PointN qv = u - pv;
  const double s = std::sqrt(1 - xx);
  return (x - pv - s * qv) / (1.0 - Complex((u.adjoint() * x)(0)));
}

}  // namespace

double hyperbolic_distance(const Region& d, const PointN& z, const PointN& w) {
  const RoundBall b = round_ball(d);
  if (z.size() != b.center.size() || w.size() != b.center.size()) throw DimensionError("point dimension");
  const PointN zn = (z - b.center) / b.radius, wn = (w - b.center) / b.radius;
  if (zn.norm() >= 1 || wn.norm() >= 1) throw DomainError("hyperbolic distance needs interior points");
  return std::atanh(std::min(pseudo_distance(zn, wn), 1.0 - 1e-16));
}

std::vector<ConformalMap> generate_group(const std::vector<ConformalMap>& gens, const Region& domain, std::size_t max_order) {
  const std::vector<PointN> probes = interior_sample(domain, 6, 0x5EED);
  auto action = [&](const ConformalMap& g) {
    std::vector<PointN> a;
    for (const auto& x : probes) a.push_back(autpert::apply(g, x));
    return a;
  };
  auto same = [](const std::vector<PointN>& a, const std::vector<PointN>& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if ((a[k] - b[k]).norm() > 1e-9) return false;
    return true;
  };
  std::vector<ConformalMap> elems{ConformalMap::identity()};
  std::vector<std::vector<PointN>> acts{action(elems[0])};
  for (std::size_t k = 0; k < elems.size(); ++k)
    for (const auto& g : gens) {
      const ConformalMap h = compose(g, elems[k]);
      const auto ah = action(h);
      bool known = false;
      for (const auto& a : acts) known = known || same(a, ah);
      if (known) continue;
      if (elems.size() >= max_order) throw ConstructionError("group generated by the maps is not finite (order cap reached)");
      elems.push_back(h);
      acts.push_back(ah);
    }
  // Powers of a map of infinite order can collapse onto each other at the
  // probes; such a set is never closed under inverses.
  for (const auto& e : elems) {
    std::vector<PointN> ai;
    for (const auto& x : probes) ai.push_back(autpert::apply_inverse(e, x));
    bool known = false;
    for (const auto& a : acts) known = known || same(a, ai);
    if (!known) throw ConstructionError("maps do not generate a finite group (closure under inverses fails)");
  }
  return elems;
}

ConstructionResult puncture_rigidify(const Region& d, const std::vector<ConformalMap>& group, double eps, std::uint64_t seed) {
  const RoundBall rb = round_ball(d);
  if (!(eps > 0)) throw DomainError("eps must be positive");
  const int n = d.dim();
  const std::vector<ConformalMap> g = generate_group(group, d);
  ConstructionResult res("puncture_rigidify", d, d);
  // Each element must preserve D.
  InvarianceOptions io;
  io.resolution = 0.01;
  double inv_dev = 0;
  for (std::size_t k = 1; k < g.size(); ++k) inv_dev = std::max(inv_dev, check_invariance(d, g[k], 500, 1e-6, seed + k, io).max_deviation);
  res.audits.push_back(simple_report("group_preserves_domain", inv_dev, 1e-6, g.size()));
  if (inv_dev > 1e-6) throw ConstructionError("group does not preserve the domain");

  auto to_unit = [&](const PointN& z) { return PointN((z - rb.center) / rb.radius); };
  auto from_unit = [&](const PointN& z) { return PointN(rb.center + rb.radius * z); };
  auto rho = [&](const PointN& a, const PointN& b) { return std::atanh(std::min(pseudo_distance(to_unit(a), to_unit(b)), 1.0 - 1e-16)); };

  CounterRng rng(seed, 0x9A1C);
  for (int attempt = 0; attempt < 64; ++attempt) {
    CounterRng r = rng.split(static_cast<std::uint64_t>(attempt));
    auto direction = [&]() {
      PointN u(n);
      for (int c = 0; c < n; ++c) u[c] = Complex(r.normal(), r.normal());
      return PointN(u / u.norm());
    };
    // x at Euclidean distance eps/4 from the boundary.
    const double depth = std::min(eps / 4, rb.radius / 2);
    const PointN x = rb.center + (rb.radius - depth) * direction();
    // Free orbit: away from every fixed set.
    double free_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < g.size(); ++k) free_margin = std::min(free_margin, (autpert::apply(g[k], x) - x).norm());
    if (free_margin < 1e-3 * rb.radius) continue;
    std::vector<PointN> orbit_x;
    for (const auto& h : g) orbit_x.push_back(autpert::apply(h, x));
    double rho_min = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < orbit_x.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) rho_min = std::min(rho_min, rho(orbit_x[a], orbit_x[b]));
    // (1) pairwise distance of the image balls rho_min - 2 delta > delta.
    double delta = std::min(0.9 * rho_min / 3, 0.5);
    if (g.size() == 1) delta = 0.5;
    // (2) the orbit of the closed ball stays within eps of the boundary.
    auto tube = [&](double dl) {
      double worst = 0;
      const double tr = std::tanh(dl);
      for (int k = 0; k < 64; ++k) {
        CounterRng rr = r.split(1000 + static_cast<std::uint64_t>(k));
        PointN u(n);
        for (int c = 0; c < n; ++c) u[c] = Complex(rr.normal(), rr.normal());
        const PointN z = from_unit(hyperbolic_offset(to_unit(x), tr * u / u.norm()));
        worst = std::max(worst, rb.radius - (z - rb.center).norm());
      }
      // Directions toward the centre bound the tube from above.
      const PointN inward = -to_unit(x) / to_unit(x).norm();
      worst = std::max(worst, rb.radius - (from_unit(hyperbolic_offset(to_unit(x), tr * inward)) - rb.center).norm());
      return worst;
    };
    while (tube(delta) >= eps / 2 && delta > 1e-12) delta /= 2;
    // n+1 points in the hyperbolic ball, all n+2 pairwise distances distinct.
    std::vector<PointN> pts{x};
    for (int k = 0; k <= n; ++k) {
      const double rr = std::tanh(delta * (0.2 + 0.7 * r.uniform()));
      pts.push_back(from_unit(hyperbolic_offset(to_unit(x), rr * direction())));
    }
    std::vector<double> dists;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) dists.push_back(rho(pts[a], pts[b]));
    std::sort(dists.begin(), dists.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < dists.size(); ++k) gap = std::min(gap, dists[k] - dists[k - 1]);
    if (gap < 1e-6) continue;
    // Orbit of all points; the images of distinct points must be distinct.
    std::vector<PointN> orbit;
    for (const auto& h : g)
      for (const auto& y : pts) orbit.push_back(autpert::apply(h, y));
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < orbit.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) sep = std::min(sep, (orbit[a] - orbit[b]).norm());
    if (sep < 1e-9) continue;
    double max_depth = 0;
    for (const auto& y : orbit) max_depth = std::max(max_depth, rb.radius - (y - rb.center).norm());

    res.output = Region::punctured(d, orbit);
    res.punctures = orbit;
    res.generators = group;
    res.params = {{"eps", eps},         {"delta", delta},     {"rho_min", rho_min},
                  {"distance_gap", gap}, {"group_order", double(g.size())}, {"attempts", double(attempt + 1)},
                  {"max_puncture_depth", max_depth}};
    res.audits.push_back(simple_report("separation", std::max(0.0, 3 * delta - rho_min), 0.0, g.size()));
    res.audits.push_back(simple_report("tube", tube(delta), eps / 2, 65));
    res.audits.push_back(simple_report("distinct_distances", std::max(0.0, 1e-6 - gap), 0.0, dists.size()));
    return res;
  }
  throw ConstructionError("point selection failed after 64 attempts; try another seed");
}

// ---------------------------------------------------------------------------
// Fibered examples.

Example build_example_19(std::optional<int> j) {
  const Region delta = Region::disc(0.0, 1.0);
  if (!j) {
    const Region q = Region::difference(delta, Region::disc(0.5, 0.5));
    return {"e19", Region::fibered(q, delta, {markers::Diagonal{}}),
            [](double t) { return ConformalMap::product({ConformalMap::gt(t), ConformalMap::gt(t)}); }};
  }
  if (*j < 1) throw DomainError("j must be positive");
  const double c = 0.5 - std::ldexp(1.0, -*j);
  const Region qj = Region::difference(delta, Region::disc(c, 0.5));
  // The disc automorphism z -> (z - b)/(1 - b z) making the two circles
  // concentric; rotations conjugated by it preserve Q_j.
  const double x1 = c - 0.5, x2 = c + 0.5;
  const double s = x1 + x2, pr = x1 * x2;
  const double b = s == 0 ? 0.0 : ((1 + pr) - std::sqrt((1 + pr) * (1 + pr) - s * s)) / s;
  const ConformalMap cen = ConformalMap::disc_automorphism(0.0, Complex(b, 0));
  return {"e19_j" + std::to_string(*j), Region::fibered(qj, delta, {markers::Diagonal{}}), [cen](double t) {
            const ConformalMap h = ConformalMap::compose({ConformalMap::inverse_of(cen), ConformalMap::rotation(t), cen});
            return ConformalMap::product({h, h});
          }};
}

Example build_example_211(std::optional<int> j, bool bounded) {
  const Region annulus = Region::difference(Region::disc(0.0, 1.0), Region::disc(0.0, 0.5));
  const Region strip = Region::intersection({Region::half_plane(Complex(0, 1), -1.0), Region::half_plane(Complex(0, -1), -1.0)});
  Example ex{"e211", Region::product({annulus, strip, annulus}), [](double t) { return ConformalMap::rotation(t, 0); }};
  if (j) {
    if (*j < 1) throw DomainError("j must be positive");
    const int jj = *j;
    const double qj = 1.0 - 1.0 / ((jj + 1.0) * (jj + 1.0));
    ex = {"e211_j" + std::to_string(jj),
          Region::fibered(Region::product({annulus, strip}), annulus, {markers::Pj{jj}, markers::Const{Complex(qj, 0)}}),
          [jj](double t) { return ConformalMap::gj(jj, t); }};
  }
  const MapFamily fam = ex.family;
  if (!bounded) return ex;
  ex.name += "_bounded";
  const ConformalMap s = ConformalMap::product({ConformalMap::identity(), ConformalMap::strip_to_disc(), ConformalMap::identity()});
  ex.region = Region::mapped(s, ex.region);
  ex.family = [s, fam](double t) { return ConformalMap::compose({s, fam(t), ConformalMap::inverse_of(s)}); };
  return ex;
}

}  // namespace autpert
