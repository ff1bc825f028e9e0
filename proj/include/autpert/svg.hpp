#pragma once

// SVG pictures of planar regions and of one-dimensional slices.

#include "autpert/core.hpp"
#include "autpert/region.hpp"
#include "autpert/sampling.hpp"

#include <optional>
#include <string>

namespace autpert {

struct SvgSummary {
  std::size_t points = 0;
  std::size_t polylines = 0;
  std::size_t crosses = 0;
};

/// SVG document for a planar region, or for the slice {w : (fixed, w) in r}
/// when `fixed` holds the first n - 1 coordinates.  Boundary pieces become
/// polylines, isolated boundary points (punctures, excluded markers) become
/// crosses.  The viewBox is the bounding box padded by 5%.  The output only
/// depends on the arguments.
std::string render_svg(const Region& r, const std::optional<PointN>& fixed, double h, SvgSummary* summary = nullptr,
                       const SampleOptions& opt = {});

/// Writes render_svg to `path`.  Throws Error on I/O failure.
SvgSummary write_svg(const Region& r, const std::optional<PointN>& fixed, double h, const std::string& path,
                     const SampleOptions& opt = {});

}  // namespace autpert
