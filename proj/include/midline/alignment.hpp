#pragma once

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "midline/grid.hpp"
#include "midline/pathfinding.hpp"

namespace midline {

struct Point {
  double row = 0.0;
  double col = 0.0;

  bool operator==(const Point&) const = default;
};

// S and E are the upper and lower ends of the initial midline, B their
// midpoint.
struct Endpoints {
  Point start;
  Point end;
  Point center;
};

// Largest accepted tilt of the S->E segment from vertical. Anything steeper
// is treated as a degenerate (near-horizontal) midline.
inline constexpr double kMaxPoseAngleRad = 75.0 * std::numbers::pi / 180.0;

// Rigid pose taking original-image coordinates to standard space:
//   standard = center + R(theta) * (original - center) + translation
// where R(theta) maps the direction (cos theta, sin theta) onto the +row
// axis. theta = atan2(dcol, drow) of S->E.
struct AlignmentPose {
  double theta = 0.0;
  Point center;
  Point translation;
  std::size_t height = 0;
  std::size_t width = 0;

  Point forward(Point original) const;
  Point inverse(Point standard) const;

  bool operator==(const AlignmentPose&) const = default;
};

AlignmentPose identity_pose(std::size_t height, std::size_t width);

// Row-extremal foreground centroids. Throws GeometryError on an empty mask
// or a mask confined to a single row.
Endpoints extract_endpoints(const Grid& mask);

// Throws GeometryError when S == E or the segment is too close to horizontal.
AlignmentPose compute_pose(const Endpoints& ep, std::size_t grid_height,
                           std::size_t grid_width);

// Bilinear sample with zero padding outside the grid.
double sample_bilinear(const Grid& img, Point p);

// Resamples `img` into standard space through the inverse pose, same size.
// Probability and mask grids stay within their kind's range (masks are
// re-thresholded at 0.5).
Grid align_image(const Grid& img, const AlignmentPose& pose);

// Maps a standard-space path back to original-image coordinates.
std::vector<Point> unalign_path(const MidlinePath& path,
                                const AlignmentPose& pose);

std::string pose_to_json(const AlignmentPose& pose);
AlignmentPose pose_from_json(const std::string& text);

}  // namespace midline
