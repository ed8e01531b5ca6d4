#include "midline/pathfinding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "midline/error.hpp"

namespace midline {

namespace {

void check_probability_grid(const Grid& prob) {
  if (prob.kind() != GridKind::probability) {
    throw InvalidArgument("expected a probability grid, got " +
                          std::string(to_string(prob.kind())));
  }
}

void check_range(const Grid& prob, RowRange range) {
  if (range.end < range.start || range.end >= prob.height()) {
    throw InvalidArgument("row range [" + std::to_string(range.start) + ", " +
                          std::to_string(range.end) + "] invalid for height " +
                          std::to_string(prob.height()));
  }
}

}  // namespace

std::size_t count_discontinuities(const std::vector<int>& cols) {
  std::size_t n = 0;
  for (std::size_t k = 1; k < cols.size(); ++k) {
    if (std::abs(cols[k] - cols[k - 1]) > 1) ++n;
  }
  return n;
}

bool is_continuous(const std::vector<int>& cols) {
  return count_discontinuities(cols) == 0;
}

void validate_path(const MidlinePath& path, std::size_t height,
                   std::size_t width) {
  if (path.cols.empty()) throw InvalidArgument("path is empty");
  if (path.row_end() >= height) {
    throw InvalidArgument("path rows exceed grid height");
  }
  for (int c : path.cols) {
    if (c < 0 || static_cast<std::size_t>(c) >= width) {
      throw InvalidArgument("path column " + std::to_string(c) +
                            " outside [0, " + std::to_string(width) + ")");
    }
  }
  if (!is_continuous(path.cols)) {
    throw InvalidArgument("path violates adjacent-row continuity");
  }
}

void EnergyParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("epsilon must lie in (0, 1)");
  }
  if (!(pairwise_cost >= 0.0) || !std::isfinite(pairwise_cost)) {
    throw InvalidArgument("pairwise_cost must be finite and >= 0");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw InvalidArgument("tau must lie in [0, 1]");
  }
}

double unary_potential(double p, const EnergyParams& params) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidArgument("probability " + std::to_string(p) +
                          " outside [0, 1]");
  }
  return -std::log(std::max(p, params.epsilon));
}

double pairwise_potential(int col_a, int col_b, long row_gap,
                          const EnergyParams& params) {
  if (row_gap == 1 && std::abs(col_a - col_b) <= 1) return params.pairwise_cost;
  return kInfiniteCost;
}

double path_energy(const MidlinePath& path, const Grid& prob,
                   const EnergyParams& params) {
  check_probability_grid(prob);
  if (path.cols.empty()) throw InvalidArgument("path is empty");
  if (path.row_end() >= prob.height()) {
    throw InvalidArgument("path rows exceed grid height");
  }
  for (int c : path.cols) {
    if (c < 0 || static_cast<std::size_t>(c) >= prob.width()) {
      throw InvalidArgument("path column out of bounds");
    }
  }

  double energy = unary_potential(prob(path.row_start, path.cols[0]), params);
  for (std::size_t k = 1; k < path.cols.size(); ++k) {
    energy += unary_potential(prob(path.row_start + k, path.cols[k]), params);
    energy += pairwise_potential(path.cols[k - 1], path.cols[k], 1, params);
  }
  return energy;
}

RowRange select_row_range(const Grid& prob, const EnergyParams& params) {
  check_probability_grid(prob);
  params.validate();

  bool found = false;
  RowRange best;
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t r = 0; r <= prob.height(); ++r) {
    bool active = false;
    if (r < prob.height()) {
      const auto row = prob.row(r);
      active = *std::max_element(row.begin(), row.end()) >= params.tau;
    }
    if (active && !in_run) {
      run_start = r;
      in_run = true;
    } else if (!active && in_run) {
      RowRange run{run_start, r - 1};
      if (!found || run.length() > best.length()) best = run;
      found = true;
      in_run = false;
    }
  }
  if (!found) {
    throw ActivationError("no row reaches activation threshold tau=" +
                          std::to_string(params.tau));
  }
  return best;
}

MidlinePath find_optimal_path(const Grid& prob, RowRange range,
                              const EnergyParams& params) {
  check_probability_grid(prob);
  check_range(prob, range);
  params.validate();

  const std::size_t rows = range.length();
  const std::size_t width = prob.width();
  std::vector<double> cost(width);
  std::vector<double> next(width);
  // back[k * width + c] is the predecessor column of (k, c) for k >= 1.
  std::vector<int> back(rows * width, -1);

  for (std::size_t c = 0; c < width; ++c) {
    cost[c] = unary_potential(prob(range.start, c), params);
  }

  for (std::size_t k = 1; k < rows; ++k) {
    const std::size_t r = range.start + k;
    for (std::size_t c = 0; c < width; ++c) {
      const double unary = unary_potential(prob(r, c), params);
      const std::size_t lo = c == 0 ? 0 : c - 1;
      const std::size_t hi = std::min(c + 1, width - 1);
      double best = kInfiniteCost;
      int best_prev = -1;
      // Ascending scan with strict < keeps the smallest column on ties.
      for (std::size_t p = lo; p <= hi; ++p) {
        double total = cost[p] + unary;
        total += pairwise_potential(static_cast<int>(p), static_cast<int>(c), 1,
                                    params);
        if (total < best) {
          best = total;
          best_prev = static_cast<int>(p);
        }
      }
      next[c] = best;
      back[k * width + c] = best_prev;
    }
    cost.swap(next);
  }

  const auto end_it = std::min_element(cost.begin(), cost.end());
  MidlinePath path;
  path.row_start = range.start;
  path.cols.assign(rows, 0);
  int col = static_cast<int>(end_it - cost.begin());
  for (std::size_t k = rows; k-- > 0;) {
    path.cols[k] = col;
    if (k > 0) col = back[k * width + static_cast<std::size_t>(col)];
  }
  return path;
}

std::vector<int> argmax_baseline(const Grid& prob, RowRange range) {
  check_probability_grid(prob);
  check_range(prob, range);
  std::vector<int> cols;
  cols.reserve(range.length());
  for (std::size_t r = range.start; r <= range.end; ++r) {
    const auto row = prob.row(r);
    cols.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) -
                                    row.begin()));
  }
  return cols;
}

}  // namespace midline
