#pragma once

// Hausdorff distances between finite point sets and between boundaries.

#include "autpert/region.hpp"
#include "autpert/sampling.hpp"

#include <Eigen/Core>

#include <vector>

namespace autpert {

inline double squared_distance(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

/// Static k-d tree over the columns of a d x N matrix.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& points, int leaf_size = 8);

  Eigen::Index size() const { return pts_.cols(); }
  int dim() const { return static_cast<int>(pts_.rows()); }

  /// Squared distance to the nearest point.  With `stop_below` > 0 the
  /// search returns as soon as any point within sqrt(stop_below) is found
  /// (the value is then only an upper bound below stop_below).
  double nearest_squared(const double* q, double stop_below = 0.0) const;

 private:
  struct Node {
    int begin, end;  // column range in pts_
    int left = -1, right = -1;
    int axis = 0;
    double split = 0.0;
    Eigen::VectorXd lo, hi;  // bounding box of the range
  };
  int build(std::vector<Eigen::Index>& idx, int begin, int end, const Eigen::MatrixXd& src, int leaf_size);

  Eigen::MatrixXd pts_;
  std::vector<Node> nodes_;
};

/// max over a in A of the distance from a to B.
double directed_hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double directed_hausdorff(const Eigen::MatrixXd& a, const KdTree& b);
double hausdorff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct HausdorffEstimate {
  double value = 0.0;
  /// Sampling error: |value - d_H(boundaries)| <= error_bound.
  double error_bound = 0.0;
  Eigen::Index points_a = 0, points_b = 0;
};

HausdorffEstimate boundary_hausdorff(const Region& a, const Region& b, double h, const SampleOptions& opt = {});
HausdorffEstimate boundary_hausdorff(const Region& a, const Region& b, double ha, double hb, const SampleOptions& opt = {});
HausdorffEstimate cloud_hausdorff(const PointCloud& a, const PointCloud& b);

}  // namespace autpert
