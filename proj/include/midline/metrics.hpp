#pragma once

#include <vector>

#include "midline/alignment.hpp"
#include "midline/pathfinding.hpp"

namespace midline {

using Polyline = std::vector<Point>;

// Physical pixel size in millimetres.
struct Spacing {
  double row_mm = 1.0;
  double col_mm = 1.0;

  void validate() const;
};

// Point-set distances between two curves, Euclidean after per-axis scaling.
// Both are symmetric in their arguments bit for bit.
double hausdorff(const Polyline& a, const Polyline& b, const Spacing& s);
double assd(const Polyline& a, const Polyline& b, const Spacing& s);

struct DistanceReport {
  double hd_mm = 0.0;
  double assd_mm = 0.0;
};

// Both metrics from one pass over the distance matrix.
DistanceReport compare_polylines(const Polyline& a, const Polyline& b,
                                 const Spacing& s);

Polyline path_to_polyline(const MidlinePath& path);

}  // namespace midline
