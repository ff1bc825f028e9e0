#include "autpert/svg.hpp"

#include "autpert/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace autpert {

namespace {

constexpr int kBisection = 48;

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

struct Picture {
  double x0, y0, x1, y1;  // region box in the complex plane
  std::vector<std::vector<Complex>> lines;
  std::vector<Complex> dots;
  std::vector<Complex> crosses;
};

void split_polylines(const PointCloud& cloud, double h, Picture& pic) {
  const double join = 3.0 * h;
  std::vector<Complex> cur;
  auto flush = [&] {
    if (cur.size() == 1)
      pic.crosses.push_back(cur[0]);
    else if (cur.size() > 1)
      pic.lines.push_back(cur);
    cur.clear();
  };
  for (Eigen::Index k = 0; k < cloud.size(); ++k) {
    const Complex z(cloud.points(0, k), cloud.points(1, k));
    if (!cur.empty() && std::abs(z - cur.back()) > join) flush();
    cur.push_back(z);
  }
  flush();
  // Close loops whose ends meet.
  for (auto& line : pic.lines)
    if (line.size() > 2 && std::abs(line.front() - line.back()) <= join) line.push_back(line.front());
}

const Region& unwrap(const Region& r) {
  if (const auto* p = std::get_if<regions::Precise>(&r.node().v)) return unwrap(p->inner);
  return r;
}

void slice_picture(const Region& r, const PointN& fixed, double h, const SampleOptions& opt, Picture& pic) {
  const int n = r.dim();
  if (fixed.size() != n - 1) throw DimensionError("slice needs " + std::to_string(n - 1) + " fixed coordinates");
  const Box box = sampling_box(r, opt);
  const int xr = 2 * (n - 1), yr = xr + 1;
  pic.x0 = box.lo[xr];
  pic.x1 = box.hi[xr];
  pic.y0 = box.lo[yr];
  pic.y1 = box.hi[yr];
  PointN p(n);
  for (int k = 0; k + 1 < n; ++k) p[k] = fixed[k];
  auto lev = [&](Complex w) {
    p[n - 1] = w;
    const double v = level(r, p);
    return std::isnan(v) ? 1.0 : v;
  };
  const double wx = pic.x1 - pic.x0, wy = pic.y1 - pic.y0;
  const int nx = std::clamp(static_cast<int>(std::ceil(wx / h)), 32, 800);
  const int ny = std::clamp(static_cast<int>(std::ceil(wy / h)), 32, 800);
  std::vector<double> grid(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  auto node = [&](int i, int j) { return Complex(pic.x0 + wx * i / nx, pic.y0 + wy * j / ny); };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) grid[static_cast<std::size_t>(j * (nx + 1) + i)] = lev(node(i, j));
  auto g = [&](int i, int j) { return grid[static_cast<std::size_t>(j * (nx + 1) + i)]; };
  auto refine = [&](Complex a, double la, Complex b) {
    for (int it = 0; it < kBisection; ++it) {
      const Complex m = 0.5 * (a + b);
      const double lm = lev(m);
      if ((lm < 0) == (la < 0))
        a = m;
      else
        b = m;
    }
    pic.dots.push_back(0.5 * (a + b));
  };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      if (i < nx && (g(i, j) < 0) != (g(i + 1, j) < 0)) refine(node(i, j), g(i, j), node(i + 1, j));
      if (j < ny && (g(i, j) < 0) != (g(i, j + 1) < 0)) refine(node(i, j), g(i, j), node(i, j + 1));
    }

  // Point exclusions that a grid cannot see.
  const Region& root = unwrap(r);
  if (const auto* f = std::get_if<regions::Fibered>(&root.node().v)) {
    if (level(f->base, fixed) < 0)
      for (const auto& m : f->excluded) {
        const Complex w = evaluate_marker(m, fixed);
        if (level(f->fiber, make_point({w})) < 0) pic.crosses.push_back(w);
      }
  } else if (const auto* pu = std::get_if<regions::Punctured>(&root.node().v)) {
    for (const auto& q : pu->punctures)
      if ((q.head(n - 1) - fixed).norm() < 1e-12 && level(pu->inner, q) < 0) pic.crosses.push_back(q[n - 1]);
  }
}

}  // namespace

std::string render_svg(const Region& r, const std::optional<PointN>& fixed, double h, SvgSummary* summary,
                       const SampleOptions& opt) {
  if (!(h > 0.0)) throw DomainError("render resolution must be positive");
  Picture pic{};
  if (fixed) {
    slice_picture(r, *fixed, h, opt, pic);
  } else {
    if (r.dim() != 1) throw DimensionError("rendering a region in C^" + std::to_string(r.dim()) + " needs a slice");
    const Box box = sampling_box(r, opt);
    pic.x0 = box.lo[0];
    pic.x1 = box.hi[0];
    pic.y0 = box.lo[1];
    pic.y1 = box.hi[1];
    split_polylines(boundary_sample(r, h, opt), h, pic);
  }
  const double px = 0.05 * std::max(pic.x1 - pic.x0, 1e-12), py = 0.05 * std::max(pic.y1 - pic.y0, 1e-12);
  const double vx = pic.x0 - px, vw = pic.x1 - pic.x0 + 2 * px;
  // SVG's y axis points down: plot (Re z, -Im z).
  const double vy = -(pic.y1 + py), vh = pic.y1 - pic.y0 + 2 * py;
  const double stroke = 0.002 * std::max(vw, vh);
  const double arm = 4 * stroke;

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << num(vx) << ' ' << num(vy) << ' ' << num(vw)
     << ' ' << num(vh) << "\" width=\"800\" height=\"" << num(800.0 * vh / vw) << "\">\n";
  os << "<g fill=\"none\" stroke=\"black\" stroke-width=\"" << num(stroke) << "\">\n";
  for (const auto& line : pic.lines) {
    os << "<polyline points=\"";
    for (std::size_t k = 0; k < line.size(); ++k) os << (k ? " " : "") << num(line[k].real()) << ',' << num(-line[k].imag());
    os << "\"/>\n";
  }
  os << "</g>\n";
  if (!pic.dots.empty()) {
    os << "<g fill=\"black\" stroke=\"none\">\n";
    for (Complex z : pic.dots)
      os << "<circle cx=\"" << num(z.real()) << "\" cy=\"" << num(-z.imag()) << "\" r=\"" << num(stroke) << "\"/>\n";
    os << "</g>\n";
  }
  if (!pic.crosses.empty()) {
    os << "<g stroke=\"red\" stroke-width=\"" << num(stroke) << "\">\n";
    for (Complex z : pic.crosses) {
      const double x = z.real(), y = -z.imag();
      os << "<path d=\"M" << num(x - arm) << ',' << num(y - arm) << " L" << num(x + arm) << ',' << num(y + arm) << " M"
         << num(x - arm) << ',' << num(y + arm) << " L" << num(x + arm) << ',' << num(y - arm) << "\"/>\n";
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  if (summary) {
    summary->polylines = pic.lines.size();
    summary->crosses = pic.crosses.size();
    summary->points = pic.dots.size();
    for (const auto& l : pic.lines) summary->points += l.size();
  }
  return os.str();
}

SvgSummary write_svg(const Region& r, const std::optional<PointN>& fixed, double h, const std::string& path,
                     const SampleOptions& opt) {
  SvgSummary s;
  const std::string doc = render_svg(r, fixed, h, &s, opt);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << doc;
  out.close();
  if (!out) throw Error("failed writing " + path);
  return s;
}

}  // namespace autpert
