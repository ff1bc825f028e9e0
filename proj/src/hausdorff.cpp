#include "autpert/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace autpert {

KdTree::KdTree(const Eigen::MatrixXd& points, int leaf_size) {
  if (points.cols() == 0) throw SamplingError("k-d tree over an empty set");
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(points.cols()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  nodes_.reserve(static_cast<std::size_t>(2 * points.cols() / leaf_size + 2));
  build(idx, 0, static_cast<int>(points.cols()), points, std::max(1, leaf_size));
  pts_.resize(points.rows(), points.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) pts_.col(static_cast<Eigen::Index>(k)) = points.col(idx[k]);
}

int KdTree::build(std::vector<Eigen::Index>& idx, int begin, int end, const Eigen::MatrixXd& src, int leaf_size) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0, {}, {}});
  Eigen::VectorXd lo = Eigen::VectorXd::Constant(src.rows(), std::numeric_limits<double>::infinity());
  Eigen::VectorXd hi = -lo;
  for (int k = begin; k < end; ++k) {
    lo = lo.cwiseMin(src.col(idx[k]));
    hi = hi.cwiseMax(src.col(idx[k]));
  }
  nodes_[id].lo = lo;
  nodes_[id].hi = hi;
  if (end - begin <= leaf_size) return id;
  Eigen::Index axis;
  (hi - lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(idx.begin() + begin, idx.begin() + mid, idx.begin() + end,
                   [&](Eigen::Index a, Eigen::Index b) { return src(axis, a) < src(axis, b); });
  nodes_[id].axis = static_cast<int>(axis);
  nodes_[id].split = src(axis, idx[mid]);
  const int l = build(idx, begin, mid, src, leaf_size);
  const int r = build(idx, mid, end, src, leaf_size);
  nodes_[id].left = l;
  nodes_[id].right = r;
  return id;
}

double KdTree::nearest_squared(const double* q, double stop_below) const {
  const int d = dim();
  double best = std::numeric_limits<double>::infinity();
  auto box_dist = [&](const Node& n) {
    double s = 0;
    for (int k = 0; k < d; ++k) {
      const double t = q[k] < n.lo[k] ? n.lo[k] - q[k] : (q[k] > n.hi[k] ? q[k] - n.hi[k] : 0.0);
      s += t * t;
    }
    return s;
  };
  // Explicit stack; near child first.
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    if (box_dist(n) >= best) continue;
    if (n.left < 0) {
      for (int k = n.begin; k < n.end; ++k) {
        best = std::min(best, squared_distance(q, pts_.col(k).data(), d));
        if (best < stop_below) return best;
      }
      continue;
    }
    const bool go_left = q[n.axis] < n.split;
    stack[top++] = go_left ? n.right : n.left;
    stack[top++] = go_left ? n.left : n.right;
  }
  return best;
}

double directed_hausdorff(const Eigen::MatrixXd& a, const KdTree& b) {
  if (a.cols() == 0) throw SamplingError("directed Hausdorff from an empty set");
  if (a.rows() != b.dim()) throw DimensionError("point sets of different dimension");
  // Visiting A in a scrambled order makes the early exit effective: a large
  // running maximum is found quickly and most queries stop at once.
  const Eigen::Index n = a.cols();
  const Eigen::Index stride = n > 1 ? 7919 % n : 1;
  Eigen::Index step = stride;
  while (std::gcd(step, n) != 1) ++step;
  double cmax = 0.0;
  Eigen::Index k = 0;
  for (Eigen::Index it = 0; it < n; ++it, k = (k + step) % n) {
    const double d = b.nearest_squared(a.col(k).data(), cmax);
    if (d > cmax) cmax = d;
  }
  return std::sqrt(cmax);
}

double directed_hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return directed_hausdorff(a, KdTree(b)); }

double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

HausdorffEstimate cloud_hausdorff(const PointCloud& a, const PointCloud& b) {
  if (a.dim != b.dim) throw DimensionError("boundaries in different dimensions");
  HausdorffEstimate e;
  e.value = hausdorff(a.points, b.points);
  e.error_bound = a.resolution + b.resolution;
  e.points_a = a.size();
  e.points_b = b.size();
  return e;
}

HausdorffEstimate boundary_hausdorff(const Region& a, const Region& b, double ha, double hb, const SampleOptions& opt) {
  if (a.dim() != b.dim()) throw DimensionError("boundaries in different dimensions");
  // Unbounded regions are compared on a shared window.
  SampleOptions o = opt;
  if (!o.window && (!is_bounded(a) || !is_bounded(b))) o.window = Box::hull(sampling_box(a, opt), sampling_box(b, opt));
  return cloud_hausdorff(boundary_sample(a, ha, o), boundary_sample(b, hb, o));
}

HausdorffEstimate boundary_hausdorff(const Region& a, const Region& b, double h, const SampleOptions& opt) {
  return boundary_hausdorff(a, b, h, h, opt);
}

}  // namespace autpert
