#include "midline/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "midline/error.hpp"

namespace midline {

namespace {

struct Directed {
  double max_min = 0.0;
  double sum_min = 0.0;
};

void check_polyline(const Polyline& p, const char* name) {
  if (p.empty()) {
    throw InvalidArgument(std::string("polyline '") + name + "' is empty");
  }
  for (const Point& q : p) {
    if (!std::isfinite(q.row) || !std::isfinite(q.col)) {
      throw InvalidArgument(std::string("polyline '") + name +
                            "' has a non-finite coordinate");
    }
  }
}

// For each point of `from`, the distance to its nearest neighbour in `to`.
Directed directed(const Polyline& from, const Polyline& to, const Spacing& s) {
  Directed d;
  for (const Point& p : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point& q : to) {
      const double dr = (p.row - q.row) * s.row_mm;
      const double dc = (p.col - q.col) * s.col_mm;
      best = std::min(best, dr * dr + dc * dc);
    }
    const double dist = std::sqrt(best);
    d.max_min = std::max(d.max_min, dist);
    d.sum_min += dist;
  }
  return d;
}

}  // namespace

void Spacing::validate() const {
  if (!(row_mm > 0.0) || !(col_mm > 0.0) || !std::isfinite(row_mm) ||
      !std::isfinite(col_mm)) {
    throw InvalidArgument("pixel spacing must be finite and positive");
  }
}

DistanceReport compare_polylines(const Polyline& a, const Polyline& b,
                                 const Spacing& s) {
  check_polyline(a, "a");
  check_polyline(b, "b");
  s.validate();
  const Directed ab = directed(a, b, s);
  const Directed ba = directed(b, a, s);
  DistanceReport r;
  r.hd_mm = std::max(ab.max_min, ba.max_min);
  // IEEE addition is commutative, so swapping a and b leaves this unchanged.
  r.assd_mm = (ab.sum_min + ba.sum_min) /
              static_cast<double>(a.size() + b.size());
  return r;
}

double hausdorff(const Polyline& a, const Polyline& b, const Spacing& s) {
  return compare_polylines(a, b, s).hd_mm;
}

double assd(const Polyline& a, const Polyline& b, const Spacing& s) {
  return compare_polylines(a, b, s).assd_mm;
}

Polyline path_to_polyline(const MidlinePath& path) {
  Polyline out;
  out.reserve(path.cols.size());
  for (std::size_t k = 0; k < path.cols.size(); ++k) {
    out.push_back({static_cast<double>(path.row_start + k),
                   static_cast<double>(path.cols[k])});
  }
  return out;
}

}  // namespace midline
