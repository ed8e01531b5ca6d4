#include "midline/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "midline/error.hpp"

namespace midline {

namespace {

// Affine map p -> A p + b, with A a rotation. Kept in this form so that a
// zero-angle, zero-translation pose reproduces coordinates exactly.
struct Affine {
  double a00, a01, a10, a11;
  double b0, b1;

  Point apply(Point p) const {
    return {a00 * p.row + a01 * p.col + b0, a10 * p.row + a11 * p.col + b1};
  }
};

Affine forward_affine(const AlignmentPose& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const Point& k = pose.center;
  Affine f{c, s, -s, c, 0.0, 0.0};
  f.b0 = (k.row + pose.translation.row) - (c * k.row + s * k.col);
  f.b1 = (k.col + pose.translation.col) - (-s * k.row + c * k.col);
  return f;
}

Affine inverse_affine(const AlignmentPose& pose) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const Point& k = pose.center;
  const Point moved{k.row + pose.translation.row, k.col + pose.translation.col};
  Affine f{c, -s, s, c, 0.0, 0.0};
  f.b0 = k.row - (c * moved.row - s * moved.col);
  f.b1 = k.col - (s * moved.row + c * moved.col);
  return f;
}

}  // namespace

Point AlignmentPose::forward(Point original) const {
  return forward_affine(*this).apply(original);
}

Point AlignmentPose::inverse(Point standard) const {
  return inverse_affine(*this).apply(standard);
}

AlignmentPose identity_pose(std::size_t height, std::size_t width) {
  AlignmentPose pose;
  pose.center = {(static_cast<double>(height) - 1.0) / 2.0,
                 (static_cast<double>(width) - 1.0) / 2.0};
  pose.height = height;
  pose.width = width;
  return pose;
}

Endpoints extract_endpoints(const Grid& mask) {
  if (mask.kind() != GridKind::mask) {
    throw InvalidArgument("extract_endpoints expects a mask grid");
  }
  auto row_centroid = [&](std::size_t r, double& centroid) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t c = 0; c < mask.width(); ++c) {
      if (mask(r, c) != 0.0) {
        sum += static_cast<double>(c);
        ++count;
      }
    }
    if (count == 0) return false;
    centroid = sum / static_cast<double>(count);
    return true;
  };

  Endpoints ep;
  bool have_top = false;
  std::size_t top = 0;
  for (std::size_t r = 0; r < mask.height() && !have_top; ++r) {
    double c = 0.0;
    if (row_centroid(r, c)) {
      ep.start = {static_cast<double>(r), c};
      top = r;
      have_top = true;
    }
  }
  if (!have_top) throw GeometryError("mask has no foreground pixels");

  for (std::size_t r = mask.height(); r-- > top;) {
    double c = 0.0;
    if (row_centroid(r, c)) {
      ep.end = {static_cast<double>(r), c};
      break;
    }
  }
  if (ep.end.row == ep.start.row) {
    throw GeometryError("mask foreground occupies a single row");
  }
  ep.center = {(ep.start.row + ep.end.row) / 2.0,
               (ep.start.col + ep.end.col) / 2.0};
  return ep;
}

AlignmentPose compute_pose(const Endpoints& ep, std::size_t grid_height,
                           std::size_t grid_width) {
  if (grid_height == 0 || grid_width == 0) {
    throw InvalidArgument("grid dimensions must be positive");
  }
  const double drow = ep.end.row - ep.start.row;
  const double dcol = ep.end.col - ep.start.col;
  if (drow == 0.0 && dcol == 0.0) {
    throw GeometryError("start and end points coincide");
  }
  const double theta = std::atan2(dcol, drow);
  if (!(std::abs(theta) <= kMaxPoseAngleRad)) {
    throw GeometryError("midline direction too close to horizontal (theta=" +
                        std::to_string(theta) + " rad)");
  }
  AlignmentPose pose;
  pose.theta = theta;
  pose.center = ep.center;
  pose.translation = {
      (static_cast<double>(grid_height) - 1.0) / 2.0 - ep.center.row,
      (static_cast<double>(grid_width) - 1.0) / 2.0 - ep.center.col};
  pose.height = grid_height;
  pose.width = grid_width;
  return pose;
}

double sample_bilinear(const Grid& img, Point p) {
  const double h = static_cast<double>(img.height());
  const double w = static_cast<double>(img.width());
  if (!(p.row > -1.0 && p.row < h && p.col > -1.0 && p.col < w)) return 0.0;

  const double r0 = std::floor(p.row);
  const double c0 = std::floor(p.col);
  const double fr = p.row - r0;
  const double fc = p.col - c0;
  auto value = [&](double r, double c) {
    if (r < 0.0 || c < 0.0 || r >= h || c >= w) return 0.0;
    return img(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  };
  const double top = (1.0 - fc) * value(r0, c0) + fc * value(r0, c0 + 1.0);
  const double bottom =
      (1.0 - fc) * value(r0 + 1.0, c0) + fc * value(r0 + 1.0, c0 + 1.0);
  return (1.0 - fr) * top + fr * bottom;
}

Grid align_image(const Grid& img, const AlignmentPose& pose) {
  if (!std::isfinite(pose.theta) || !(std::abs(pose.theta) < std::numbers::pi / 2)) {
    throw InvalidArgument("invalid pose angle");
  }
  const Affine inv = inverse_affine(pose);
  std::vector<double> out(img.size());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) {
      const Point src =
          inv.apply({static_cast<double>(r), static_cast<double>(c)});
      double v = sample_bilinear(img, src);
      switch (img.kind()) {
        case GridKind::intensity: break;
        case GridKind::probability: v = std::clamp(v, 0.0, 1.0); break;
        case GridKind::mask: v = v >= 0.5 ? 1.0 : 0.0; break;
      }
      out[r * img.width() + c] = v;
    }
  }
  return Grid(img.height(), img.width(), std::move(out), img.kind());
}

std::vector<Point> unalign_path(const MidlinePath& path,
                                const AlignmentPose& pose) {
  const Affine inv = inverse_affine(pose);
  std::vector<Point> out;
  out.reserve(path.cols.size());
  for (std::size_t k = 0; k < path.cols.size(); ++k) {
    out.push_back(inv.apply({static_cast<double>(path.row_start + k),
                             static_cast<double>(path.cols[k])}));
  }
  return out;
}

std::string pose_to_json(const AlignmentPose& pose) {
  nlohmann::ordered_json j;
  j["theta_rad"] = pose.theta;
  j["center"] = {pose.center.row, pose.center.col};
  j["translation"] = {pose.translation.row, pose.translation.col};
  j["height"] = pose.height;
  j["width"] = pose.width;
  return j.dump(2) + "\n";
}

AlignmentPose pose_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    AlignmentPose pose;
    pose.theta = j.at("theta_rad").get<double>();
    const auto& center = j.at("center");
    const auto& translation = j.at("translation");
    if (center.size() != 2 || translation.size() != 2) {
      throw FormatError("pose center/translation must have two entries");
    }
    pose.center = {center[0].get<double>(), center[1].get<double>()};
    pose.translation = {translation[0].get<double>(),
                        translation[1].get<double>()};
    pose.height = j.at("height").get<std::size_t>();
    pose.width = j.at("width").get<std::size_t>();
    return pose;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed pose JSON: ") + e.what());
  }
}

}  // namespace midline
