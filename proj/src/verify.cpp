#include "autpert/verify.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace autpert {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) { return std::chrono::duration<double, std::milli>(Clock::now() - t0).count(); }

template <class Scalar>
double invariance_deviation_interior(const Region& r, const ConformalMap& f, const PointN& x, bool forward) {
  PointT<Scalar> y;
  try {
    y = forward ? autpert::apply<Scalar>(f, point_cast<Scalar>(x)) : autpert::apply_inverse<Scalar>(f, point_cast<Scalar>(x));
  } catch (const PoleError&) {
    return std::numeric_limits<double>::infinity();
  }
  const double l = static_cast<double>(level<Scalar>(r, y));
  if (std::isnan(l)) return std::numeric_limits<double>::infinity();
  return std::max(0.0, l);
}

template <class Scalar>
double invariance_deviation_boundary(const Region& r, const ConformalMap& f, const PointCloud& c, Eigen::Index k, bool forward,
                                     const Box& window) {
  PointT<Scalar> y;
  try {
    y = forward ? autpert::apply<Scalar>(f, c.point_as<Scalar>(k)) : autpert::apply_inverse<Scalar>(f, c.point_as<Scalar>(k));
  } catch (const PoleError&) {
    return std::numeric_limits<double>::infinity();
  }
  // Images leaving the window of an unbounded region are not testable.
  RealPoint yr(2 * y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    yr[2 * i] = static_cast<double>(y[i].real());
    yr[2 * i + 1] = static_cast<double>(y[i].imag());
  }
  if (!window.contains(yr)) return -1.0;
  const double l = static_cast<double>(level<Scalar>(r, y));
  return std::isnan(l) ? std::numeric_limits<double>::infinity() : std::abs(l);
}

template <class Scalar>
VerificationReport invariance_with(const Region& r, const ConformalMap& f, std::size_t n, double tol, std::uint64_t seed,
                                   const InvarianceOptions& opt) {
  const auto t0 = Clock::now();
  std::vector<std::pair<PointN, double>> dev;
  SampleOptions so = opt.sampling;
  so.tau = opt.tau;
  for (const PointN& x : interior_sample(r, n, seed, so)) {
    dev.emplace_back(x, invariance_deviation_interior<Scalar>(r, f, x, true));
    dev.emplace_back(x, invariance_deviation_interior<Scalar>(r, f, x, false));
  }
  if (opt.resolution > 0.0 || opt.cloud) {
    PointCloud local;
    const PointCloud* cloud = opt.cloud;
    if (!cloud) {
      local = boundary_sample(r, opt.resolution, so);
      cloud = &local;
    }
    const Box window = sampling_box(r, so);
    const Eigen::Index total = cloud->size();
    const Eigen::Index stride =
        std::max<Eigen::Index>(1, (total + static_cast<Eigen::Index>(opt.max_boundary) - 1) / static_cast<Eigen::Index>(opt.max_boundary));
    for (Eigen::Index k = 0; k < total; k += stride)
      for (bool fw : {true, false}) {
        const double d = invariance_deviation_boundary<Scalar>(r, f, *cloud, k, fw, window);
        if (d >= 0.0) dev.emplace_back(cloud->point(k), d);
      }
  }
  VerificationReport rep = make_report("invariance", dev, tol);
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

template <class Op>
VerificationReport pointwise(std::string name, const Region& domain, std::size_t n, double tol, std::uint64_t seed, Op op) {
  const auto t0 = Clock::now();
  std::vector<std::pair<PointN, double>> dev;
  for (const PointN& x : interior_sample(domain, n, seed)) {
    double d;
    try {
      d = op(x);
    } catch (const PoleError&) {
      d = std::numeric_limits<double>::infinity();
    }
    if (std::isnan(d)) d = std::numeric_limits<double>::infinity();
    dev.emplace_back(x, d);
  }
  VerificationReport rep = make_report(std::move(name), dev, tol);
  rep.elapsed_ms = ms_since(t0);
  return rep;
}

}  // namespace

VerificationReport make_report(std::string name, const std::vector<std::pair<PointN, double>>& deviations, double tol,
                               std::size_t keep) {
  VerificationReport rep;
  rep.check = std::move(name);
  rep.tolerance = tol;
  rep.samples = deviations.size();
  std::vector<std::size_t> order(deviations.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  // Stable order keeps the offender list reproducible.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return deviations[a].second > deviations[b].second; });
  for (std::size_t k = 0; k < order.size() && k < keep; ++k) {
    const auto& [p, d] = deviations[order[k]];
    if (d <= 0.0) break;
    rep.details.push_back({p, d, {}});
  }
  rep.max_deviation = order.empty() ? 0.0 : deviations[order.front()].second;
  rep.pass = rep.max_deviation <= tol;
  return rep;
}

VerificationReport check_invariance(const Region& r, const ConformalMap& f, std::size_t n, double tol, std::uint64_t seed,
                                    const InvarianceOptions& opt) {
  if (!accepts_dim(f, r.dim())) throw DimensionError("map and region dimensions differ");
  switch (max_precision(required_precision(r), required_precision(f))) {
    case Precision::Double:
      return invariance_with<double>(r, f, n, tol, seed, opt);
    case Precision::Extended:
      return invariance_with<long double>(r, f, n, tol, seed, opt);
    case Precision::Quad:
      return invariance_with<Quad>(r, f, n, tol, seed, opt);
  }
  return {};
}

namespace {

template <class Fn>
double dispatch(Precision p, Fn&& fn) {
  switch (p) {
    case Precision::Double:
      return fn(double{});
    case Precision::Extended:
      return fn((long double){});
    case Precision::Quad:
      return fn(Quad{});
  }
  return 0.0;
}

template <class Scalar>
double gap(const PointT<Scalar>& a, const PointT<Scalar>& b) {
  using std::sqrt;
  Scalar s(0);
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const auto d = a[k] - b[k];
    s += d.real() * d.real() + d.imag() * d.imag();
  }
  return static_cast<double>(sqrt(s));
}

}  // namespace

// Compositions are evaluated without rounding to double in between, in the
// highest precision any of the maps asks for.
VerificationReport check_group_law(const MapFamily& family, double s, double t, const Region& domain, std::size_t n, double tol,
                                   std::uint64_t seed) {
  const ConformalMap fs = family(s), ft = family(t), fst = family(s + t);
  const Precision p = max_precision(required_precision(fs), max_precision(required_precision(ft), required_precision(fst)));
  return pointwise("group_law", domain, n, tol, seed, [&](const PointN& x) {
    return dispatch(p, [&](auto z) {
      using S = decltype(z);
      const PointT<S> y = point_cast<S>(x);
      return gap<S>(autpert::apply<S>(fs, autpert::apply<S>(ft, y)), autpert::apply<S>(fst, y));
    });
  });
}

VerificationReport check_order(const ConformalMap& f, int j, const Region& domain, std::size_t n, double tol, std::uint64_t seed) {
  if (j < 1) throw DomainError("order must be at least 1");
  return pointwise("order", domain, n, tol, seed, [&](const PointN& x) {
    return dispatch(required_precision(f), [&](auto z) {
      using S = decltype(z);
      const PointT<S> y0 = point_cast<S>(x);
      PointT<S> y = y0;
      for (int k = 0; k < j; ++k) y = autpert::apply<S>(f, y);
      return gap<S>(y, y0);
    });
  });
}

VerificationReport check_commuting(const ConformalMap& f, const ConformalMap& g, const Region& domain, std::size_t n, double tol,
                                   std::uint64_t seed) {
  return pointwise("commuting", domain, n, tol, seed, [&](const PointN& x) {
    return dispatch(max_precision(required_precision(f), required_precision(g)), [&](auto z) {
      using S = decltype(z);
      const PointT<S> y = point_cast<S>(x);
      return gap<S>(autpert::apply<S>(f, autpert::apply<S>(g, y)), autpert::apply<S>(g, autpert::apply<S>(f, y)));
    });
  });
}

RankWitness torus_rank_witness(const Region& r, const std::vector<MapFamily>& families, const PointN& p, std::size_t n,
                               std::uint64_t seed, double threshold) {
  if (families.empty()) throw DomainError("torus_rank_witness needs at least one family");
  if (p.size() != r.dim()) throw DimensionError("base point dimension");
  RankWitness w;
  w.n = r.dim();
  const double t = 0.7;
  InvarianceOptions io;
  io.resolution = 0.0;  // interior two-sided test; boundaries of polydiscs are corners
  for (std::size_t a = 0; a < families.size(); ++a) {
    w.reports.push_back(check_invariance(r, families[a](t), n, 1e-6, seed + a, io));
    for (std::size_t b = a + 1; b < families.size(); ++b)
      w.reports.push_back(check_commuting(families[a](t), families[b](-1.3 * t), r, n, 1e-12, seed + 97 * b + a));
  }
  for (const auto& rep : w.reports) w.verified = w.verified && rep.pass;
  Eigen::MatrixXd g(2 * w.n, static_cast<Eigen::Index>(families.size()));
  for (std::size_t a = 0; a < families.size(); ++a) g.col(static_cast<Eigen::Index>(a)) = infinitesimal_generator(families[a], p);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(g);
  const Eigen::VectorXd sv = svd.singularValues();
  w.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double top = sv.size() ? sv[0] : 0.0;
  w.degenerate = !(top > 1e-12);
  if (!w.degenerate)
    for (Eigen::Index k = 0; k < sv.size(); ++k) w.k += sv[k] > threshold * top;
  if (w.k > w.n) throw Error("torus rank witness exceeds the complex dimension");
  return w;
}

std::vector<ConvergenceRow> check_convergence(const IndexedFamily& seq, const MapFamily& limit, const std::vector<int>& js,
                                              const std::vector<double>& ts, const std::vector<PointN>& samples) {
  std::vector<ConvergenceRow> rows;
  for (int j : js)
    for (double t : ts) {
      const ConformalMap f = seq(j, t), g = limit(t);
      double worst = 0.0;
      for (const auto& x : samples) worst = std::max(worst, (autpert::apply(f, x) - autpert::apply(g, x)).norm());
      rows.push_back({j, t, worst});
    }
  return rows;
}

}  // namespace autpert
