#pragma once

// Boundary point clouds and interior samples.

#include "autpert/core.hpp"
#include "autpert/region.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <vector>

namespace autpert {

/// Finite sample of a boundary.  Points are the columns of a 2n x N matrix of
/// real coordinates.  When the region needed more than double precision the
/// cloud also keeps the points at that precision in `exact`.
struct PointCloud {
  int dim = 1;
  Eigen::MatrixXd points;
  /// Every sampled boundary piece has consecutive samples at most this far
  /// apart.
  double resolution = 0.0;
  Precision precision = Precision::Double;
  Eigen::Matrix<Quad, Eigen::Dynamic, Eigen::Dynamic> exact;

  Eigen::Index size() const { return points.cols(); }
  PointN point(Eigen::Index k) const { return from_real(points.col(k)); }

  template <class Scalar>
  PointT<Scalar> point_as(Eigen::Index k) const {
    PointT<Scalar> p(dim);
    const bool wide = exact.cols() == points.cols() && precision_of<Scalar>() != Precision::Double;
    for (int c = 0; c < dim; ++c) {
      if (wide)
        p[c] = std::complex<Scalar>(static_cast<Scalar>(exact(2 * c, k)), static_cast<Scalar>(exact(2 * c + 1, k)));
      else
        p[c] = std::complex<Scalar>(static_cast<Scalar>(points(2 * c, k)), static_cast<Scalar>(points(2 * c + 1, k)));
    }
    return p;
  }

  static PointCloud from_points(const std::vector<PointN>& pts, double resolution);
};

struct SampleOptions {
  double tau = kDefaultTau;
  /// Clip box in R^{2n}.  Needed for unbounded regions; when unset such
  /// regions are clipped to |x_k| <= unbounded_half_width.
  std::optional<Box> window;
  double unbounded_half_width = 3.0;
  /// Hard cap on emitted points.
  std::size_t max_points = std::size_t{1} << 23;
  /// Grid cells for the ambient sampler (products, fibered regions).
  std::size_t ambient_budget = std::size_t{1} << 18;
  int bisection_iterations = 48;
};

/// Box used for sampling: the bounding box, clipped to the window.
Box sampling_box(const Region& r, const SampleOptions& opt = {});

/// Boundary point cloud with consecutive samples at most h apart on each
/// boundary piece.  Throws EmptyRegionError when no boundary is found.
PointCloud boundary_sample(const Region& r, double h, const SampleOptions& opt = {});

/// `count` points classified Interior, deterministic in `seed`.
/// Throws EmptyRegionError for an empty or too thin region.
std::vector<PointN> interior_sample(const Region& r, std::size_t count, std::uint64_t seed, const SampleOptions& opt = {});

/// Points of the sphere |z - c| = radius in C^n, consecutive grid points at
/// most `step` apart.
std::vector<PointN> sphere_grid(const PointN& center, double radius, double step);

}  // namespace autpert
