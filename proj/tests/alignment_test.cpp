#include "midline/alignment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "midline/error.hpp"

namespace midline {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Grid vertical_line_mask(std::size_t h, std::size_t w, std::size_t col,
                        std::size_t r0, std::size_t r1) {
  Grid m(h, w, 0.0, GridKind::mask);
  for (std::size_t r = r0; r <= r1; ++r) m.set(r, col, 1.0);
  return m;
}

// One pixel per row along the line through (center_row, center_col) tilted
// theta from vertical, over rows [center_row - half, center_row + half].
Grid tilted_line_mask(std::size_t h, std::size_t w, double theta,
                      double center_row, double center_col, double half) {
  Grid m(h, w, 0.0, GridKind::mask);
  for (double r = std::ceil(center_row - half); r <= center_row + half; r += 1.0) {
    const double c = center_col + (r - center_row) * std::tan(theta);
    m.set(static_cast<std::size_t>(r), static_cast<std::size_t>(std::lround(c)), 1.0);
  }
  return m;
}

TEST(ExtractEndpointsTest, VerticalLine) {
  const Endpoints ep = extract_endpoints(vertical_line_mask(12, 20, 10, 2, 8));
  EXPECT_EQ(ep.start, (Point{2, 10}));
  EXPECT_EQ(ep.end, (Point{8, 10}));
  EXPECT_EQ(ep.center, (Point{5, 10}));
}

TEST(ExtractEndpointsTest, RowCentroids) {
  Grid m(10, 10, 0.0, GridKind::mask);
  m.set(1, 4, 1.0);
  m.set(1, 6, 1.0);
  m.set(3, 0, 1.0);  // interior rows do not matter
  m.set(7, 5, 1.0);
  const Endpoints ep = extract_endpoints(m);
  EXPECT_EQ(ep.start, (Point{1, 5.0}));
  EXPECT_EQ(ep.end, (Point{7, 5.0}));
  EXPECT_EQ(ep.center, (Point{4, 5.0}));
}

TEST(ExtractEndpointsTest, Errors) {
  EXPECT_THROW(extract_endpoints(Grid(5, 5, 0.0, GridKind::mask)), GeometryError);
  Grid one_row(5, 5, 0.0, GridKind::mask);
  one_row.set(2, 1, 1.0);
  one_row.set(2, 3, 1.0);
  EXPECT_THROW(extract_endpoints(one_row), GeometryError);
  EXPECT_THROW(extract_endpoints(Grid(5, 5, 0.0, GridKind::probability)),
               InvalidArgument);
}

TEST(ComputePoseTest, AlreadyVertical) {
  const Endpoints ep{{10, 20}, {110, 20}, {60, 20}};
  const AlignmentPose pose = compute_pose(ep, 200, 200);
  EXPECT_EQ(pose.theta, 0.0);
  EXPECT_EQ(pose.center, (Point{60, 20}));
  // Midpoint (60, 20) moves to the grid center (99.5, 99.5).
  EXPECT_EQ(pose.translation, (Point{39.5, 79.5}));
  EXPECT_EQ(pose.height, 200u);
  EXPECT_EQ(pose.width, 200u);
}

TEST(ComputePoseTest, Diagonal) {
  const Endpoints ep{{10, 20}, {110, 120}, {60, 70}};
  EXPECT_NEAR(compute_pose(ep, 200, 200).theta, std::numbers::pi / 4, 1e-15);
  const Endpoints mirrored{{10, 120}, {110, 20}, {60, 70}};
  EXPECT_NEAR(compute_pose(mirrored, 200, 200).theta, -std::numbers::pi / 4, 1e-15);
}

TEST(ComputePoseTest, Degenerate) {
  EXPECT_THROW(compute_pose({{5, 5}, {5, 50}, {5, 27.5}}, 64, 64), GeometryError);
  EXPECT_THROW(compute_pose({{5, 5}, {5, 5}, {5, 5}}, 64, 64), GeometryError);
  // 80 degrees from vertical is past the accepted cone.
  const double t = 80.0 * kDeg;
  EXPECT_THROW(compute_pose({{0, 0}, {std::cos(t), std::sin(t)}, {0, 0}}, 64, 64),
               GeometryError);
}

TEST(PoseTest, SandEMapOntoCenterColumn) {
  const Endpoints ep{{12.0, 30.0}, {90.0, 52.0}, {51.0, 41.0}};
  const AlignmentPose pose = compute_pose(ep, 101, 81);
  const Point s = pose.forward(ep.start);
  const Point e = pose.forward(ep.end);
  EXPECT_NEAR(s.col, 40.0, 1e-12);
  EXPECT_NEAR(e.col, 40.0, 1e-12);
  EXPECT_NEAR((s.row + e.row) / 2.0, 50.0, 1e-12);
  EXPECT_LT(s.row, e.row);
}

TEST(PoseTest, ForwardInverseIsIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> angle(-1.3, 1.3);
  std::uniform_real_distribution<double> coord(-300.0, 800.0);
  for (int i = 0; i < 1000; ++i) {
    AlignmentPose pose;
    pose.theta = angle(rng);
    pose.center = {coord(rng), coord(rng)};
    pose.translation = {coord(rng) / 4, coord(rng) / 4};
    const Point p{coord(rng), coord(rng)};
    const Point back = pose.inverse(pose.forward(p));
    ASSERT_NEAR(back.row, p.row, 1e-9);
    ASSERT_NEAR(back.col, p.col, 1e-9);
    const Point fwd = pose.forward(pose.inverse(p));
    ASSERT_NEAR(fwd.row, p.row, 1e-9);
    ASSERT_NEAR(fwd.col, p.col, 1e-9);
  }
}

TEST(AlignImageTest, IdentityIsBitExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(37 * 23);
  for (double& x : v) x = u(rng);
  const Grid img(37, 23, v, GridKind::intensity);
  AlignmentPose pose;
  pose.center = {7.3, 11.9};
  EXPECT_EQ(align_image(img, pose), img);
  EXPECT_EQ(align_image(img, identity_pose(37, 23)), img);
}

TEST(AlignImageTest, PureTranslation) {
  Grid img(30, 30, 0.0, GridKind::probability);
  for (std::size_t r = 0; r < 30; ++r) img.set(r, 10, 0.9);
  AlignmentPose pose;
  pose.translation = {0.0, 5.0};
  const Grid out = align_image(img, pose);
  for (std::size_t r = 0; r < 30; ++r) {
    for (std::size_t c = 0; c < 30; ++c) {
      ASSERT_EQ(out(r, c), c == 15 ? 0.9 : 0.0) << r << "," << c;
    }
  }
}

TEST(AlignImageTest, OutsideSamplesAreZero) {
  const Grid img(10, 10, 1.0, GridKind::probability);
  AlignmentPose pose;
  pose.translation = {0.0, 4.0};
  const Grid out = align_image(img, pose);
  for (std::size_t r = 0; r < 10; ++r) {
    for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(out(r, c), 0.0);
    for (std::size_t c = 4; c < 10; ++c) EXPECT_EQ(out(r, c), 1.0);
  }
}

TEST(AlignImageTest, MaskStaysBinary) {
  const Grid m = tilted_line_mask(64, 64, 20 * kDeg, 31.5, 31.5, 25);
  const Grid out = align_image(m, compute_pose(extract_endpoints(m), 64, 64));
  EXPECT_EQ(out.kind(), GridKind::mask);
  for (double v : out.values()) EXPECT_TRUE(v == 0.0 || v == 1.0);
}

TEST(AlignImageTest, RejectsInvalidPose) {
  AlignmentPose pose;
  pose.theta = 2.0;
  EXPECT_THROW(align_image(Grid(4, 4, 0.0, GridKind::intensity), pose),
               InvalidArgument);
}

// Recovering a known tilt from a straight-line mask, then aligning, puts the
// line on the center column.
TEST(AlignImageTest, RotatedLineIsStraightened) {
  for (double deg : {-30.0, -12.0, 7.0, 25.0}) {
    const Grid m = tilted_line_mask(257, 257, deg * kDeg, 128, 128, 100);
    const AlignmentPose pose = compute_pose(extract_endpoints(m), 257, 257);
    EXPECT_NEAR(pose.theta / kDeg, deg, 0.5);

    Grid img(257, 257, 0.0, GridKind::intensity);
    for (std::size_t r = 0; r < 257; ++r) {
      for (std::size_t c = 0; c < 257; ++c) img.set(r, c, m(r, c));
    }
    const Grid out = align_image(img, pose);
    const Endpoints aligned =
        extract_endpoints(align_image(m, pose));
    EXPECT_NEAR(aligned.start.col, aligned.end.col, 1.0) << deg;
    // Brightest column of the aligned line in its middle row.
    std::size_t best = 0;
    for (std::size_t c = 1; c < 257; ++c) {
      if (out(128, c) > out(128, best)) best = c;
    }
    EXPECT_NEAR(static_cast<double>(best), 128.0, 1.0) << deg;
  }
}

TEST(AlignImageTest, ThetaRecoveryAcrossCone) {
  for (double deg = -30.0; deg <= 30.0; deg += 2.5) {
    const Grid m = tilted_line_mask(256, 256, deg * kDeg, 127.5, 127.5, 100);
    const AlignmentPose pose = compute_pose(extract_endpoints(m), 256, 256);
    EXPECT_NEAR(pose.theta / kDeg, deg, 0.5) << deg;
  }
}

TEST(AlignImageTest, BlobEnergyPreserved) {
  const std::size_t n = 128;
  Grid img(n, n, 0.0, GridKind::intensity);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double dr = static_cast<double>(r) - 70.0;
      const double dc = static_cast<double>(c) - 55.0;
      img.set(r, c, std::exp(-(dr * dr + dc * dc) / (2.0 * 6.0 * 6.0)));
    }
  }
  double before = 0.0;
  for (double v : img.values()) before += v;
  for (double deg : {-30.0, -20.0, -5.0, 5.0, 17.0, 30.0}) {
    AlignmentPose pose;
    pose.theta = deg * kDeg;
    pose.center = {63.5, 63.5};
    const Grid out = align_image(img, pose);
    double after = 0.0;
    for (double v : out.values()) after += v;
    EXPECT_LT(std::abs(after - before) / before, 0.01) << deg;
  }
}

TEST(UnalignPathTest, IdentityAndTranslation) {
  const MidlinePath path{3, {5, 6, 6, 7}};
  const auto same = unalign_path(path, identity_pose(20, 20));
  ASSERT_EQ(same.size(), 4u);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(same[k], (Point{3.0 + k, static_cast<double>(path.cols[k])}));
  }

  AlignmentPose shift;
  shift.translation = {2.5, -4.0};
  const auto moved = unalign_path(path, shift);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(moved[k].row, 3.0 + k - 2.5);
    EXPECT_DOUBLE_EQ(moved[k].col, path.cols[k] + 4.0);
  }
}

TEST(UnalignPathTest, InvertsForwardMapping) {
  AlignmentPose pose;
  pose.theta = 10 * kDeg;
  pose.center = {40.0, 33.0};
  pose.translation = {-3.0, 7.0};
  const MidlinePath path{10, {30, 31, 31, 32, 31}};
  const auto pts = unalign_path(path, pose);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point back = pose.forward(pts[k]);
    EXPECT_NEAR(back.row, 10.0 + k, 1e-9);
    EXPECT_NEAR(back.col, path.cols[k], 1e-9);
  }
}

TEST(PoseJsonTest, RoundTrip) {
  AlignmentPose pose;
  pose.theta = -0.1234567890123;
  pose.center = {12.25, 99.125};
  pose.translation = {-1.5, 3.0e-7};
  pose.height = 256;
  pose.width = 192;
  const std::string text = pose_to_json(pose);
  EXPECT_NE(text.find("\"theta_rad\""), std::string::npos);
  EXPECT_EQ(pose_from_json(text), pose);
  EXPECT_THROW(pose_from_json("{\"theta_rad\": 0}"), FormatError);
  EXPECT_THROW(pose_from_json("not json"), FormatError);
}

}  // namespace
}  // namespace midline
