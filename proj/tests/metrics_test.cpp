#include "midline/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "midline/error.hpp"

namespace midline {
namespace {

Polyline vertical(double col, int n) {
  Polyline p;
  for (int r = 0; r < n; ++r) p.push_back({static_cast<double>(r), col});
  return p;
}

// Plain max-min / mean-min over the full distance matrix.
double oracle_directed(const Polyline& a, const Polyline& b, bool want_max,
                       const Spacing& s) {
  double agg = 0.0;
  for (const Point& p : a) {
    double m = INFINITY;
    for (const Point& q : b) {
      m = std::min(m, std::hypot((p.row - q.row) * s.row_mm,
                                 (p.col - q.col) * s.col_mm));
    }
    agg = want_max ? std::max(agg, m) : agg + m;
  }
  return agg;
}

Polyline random_polyline(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 30);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  Polyline p(static_cast<std::size_t>(len(rng)));
  for (Point& q : p) q = {coord(rng), coord(rng)};
  return p;
}

TEST(HausdorffTest, Examples) {
  const Spacing mm;
  EXPECT_EQ(hausdorff(vertical(3, 10), vertical(3, 10), mm), 0.0);
  EXPECT_EQ(hausdorff(vertical(3, 10), vertical(7, 10), mm), 4.0);

  Polyline with_outlier = vertical(3, 10);
  with_outlier.push_back({0.0, 13.0});
  const double expected = std::max(oracle_directed(vertical(3, 10), with_outlier, true, mm),
                                   oracle_directed(with_outlier, vertical(3, 10), true, mm));
  EXPECT_EQ(expected, 10.0);
  EXPECT_EQ(hausdorff(vertical(3, 10), with_outlier, mm), 10.0);
}

TEST(AssdTest, Examples) {
  const Spacing mm;
  EXPECT_EQ(assd(vertical(3, 10), vertical(3, 10), mm), 0.0);
  EXPECT_EQ(assd(vertical(3, 10), vertical(7, 10), mm), 4.0);

  // One point moved 3 px sideways: its nearest original point is 3 away,
  // but the original point it left has a neighbour 1 row away.
  for (int k : {0, 5, 9}) {
    Polyline moved = vertical(3, 10);
    moved[static_cast<std::size_t>(k)].col += 3.0;
    const double oracle = (oracle_directed(vertical(3, 10), moved, false, mm) +
                           oracle_directed(moved, vertical(3, 10), false, mm)) /
                          20.0;
    EXPECT_NEAR(oracle, 0.2, 1e-15);
    EXPECT_NEAR(assd(vertical(3, 10), moved, mm), oracle, 1e-15);
  }
}

TEST(MetricsTest, AnisotropicSpacing) {
  const Spacing s{0.5, 2.0};
  EXPECT_EQ(hausdorff(vertical(3, 10), vertical(7, 10), s), 8.0);
  EXPECT_EQ(assd(vertical(3, 10), vertical(7, 10), s), 8.0);
  const Polyline a{{0, 0}};
  const Polyline b{{4, 0}};
  EXPECT_EQ(hausdorff(a, b, s), 2.0);
}

TEST(MetricsTest, Errors) {
  const Spacing mm;
  EXPECT_THROW(hausdorff({}, vertical(1, 3), mm), InvalidArgument);
  EXPECT_THROW(assd(vertical(1, 3), {}, mm), InvalidArgument);
  EXPECT_THROW(hausdorff(vertical(1, 3), vertical(1, 3), Spacing{0.0, 1.0}),
               InvalidArgument);
  EXPECT_THROW(hausdorff({{NAN, 0.0}}, vertical(1, 3), mm), InvalidArgument);
}

TEST(MetricsTest, MatchesOracleOnRandomSets) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 200; ++i) {
    const Polyline a = random_polyline(rng);
    const Polyline b = random_polyline(rng);
    const Spacing s{0.5 + (rng() % 10) / 10.0, 0.5 + (rng() % 10) / 10.0};
    const double hd = std::max(oracle_directed(a, b, true, s),
                               oracle_directed(b, a, true, s));
    const double as = (oracle_directed(a, b, false, s) + oracle_directed(b, a, false, s)) /
                      static_cast<double>(a.size() + b.size());
    EXPECT_NEAR(hausdorff(a, b, s), hd, 1e-9);
    EXPECT_NEAR(assd(a, b, s), as, 1e-9);
  }
}

TEST(MetricsTest, SymmetryAndOrdering) {
  std::mt19937_64 rng(31);
  const Spacing mm;
  for (int i = 0; i < 1000; ++i) {
    const Polyline a = random_polyline(rng);
    const Polyline b = random_polyline(rng);
    ASSERT_EQ(hausdorff(a, b, mm), hausdorff(b, a, mm));
    ASSERT_EQ(assd(a, b, mm), assd(b, a, mm));
    ASSERT_GE(hausdorff(a, b, mm), assd(a, b, mm));
  }
}

TEST(MetricsTest, HausdorffTriangleInequality) {
  std::mt19937_64 rng(41);
  const Spacing mm;
  for (int i = 0; i < 500; ++i) {
    const Polyline a = random_polyline(rng);
    const Polyline b = random_polyline(rng);
    const Polyline c = random_polyline(rng);
    ASSERT_LE(hausdorff(a, c, mm), hausdorff(a, b, mm) + hausdorff(b, c, mm) + 1e-9);
  }
}

TEST(MetricsTest, DoublingSpacingDoublesExactly) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 300; ++i) {
    const Polyline a = random_polyline(rng);
    const Polyline b = random_polyline(rng);
    const Spacing s{0.3 + (rng() % 100) / 50.0, 0.3 + (rng() % 100) / 50.0};
    const Spacing s2{2.0 * s.row_mm, 2.0 * s.col_mm};
    ASSERT_EQ(hausdorff(a, b, s2), 2.0 * hausdorff(a, b, s));
    ASSERT_EQ(assd(a, b, s2), 2.0 * assd(a, b, s));
  }
}

TEST(PathToPolylineTest, Examples) {
  EXPECT_EQ(path_to_polyline({2, {5, 5, 6}}),
            (Polyline{{2, 5}, {3, 5}, {4, 6}}));
  EXPECT_EQ(path_to_polyline({7, {1}}), (Polyline{{7, 1}}));
}

}  // namespace
}  // namespace midline
