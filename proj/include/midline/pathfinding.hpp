#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "midline/grid.hpp"

namespace midline {

// One column per row over the contiguous rows
// [row_start, row_start + cols.size()). Adjacent columns differ by at most 1.
struct MidlinePath {
  std::size_t row_start = 0;
  std::vector<int> cols;

  std::size_t row_end() const { return row_start + cols.size() - 1; }
  bool operator==(const MidlinePath&) const = default;
};

// Number of adjacent-row steps with |dcol| > 1.
std::size_t count_discontinuities(const std::vector<int>& cols);
bool is_continuous(const std::vector<int>& cols);

// Throws InvalidArgument if the path is empty, breaks continuity, or leaves
// a height x width grid.
void validate_path(const MidlinePath& path, std::size_t height,
                   std::size_t width);

struct EnergyParams {
  double epsilon = 1e-6;       // probability floor inside -log
  double pairwise_cost = 1.0;  // cost of a valid adjacent-row transition
  double tau = 0.5;            // row activation threshold

  void validate() const;
};

struct RowRange {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  std::size_t length() const { return end - start + 1; }
  bool operator==(const RowRange&) const = default;
};

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

// -log(max(p, epsilon)).
double unary_potential(double p, const EnergyParams& params);

// pairwise_cost for a one-row step of at most one column, infinite otherwise.
double pairwise_potential(int col_a, int col_b, long row_gap,
                          const EnergyParams& params);

// Energy summed top to bottom: unary of the first row, then for each further
// row its unary followed by the transition into it. The DP accumulates in the
// same order so both agree bit for bit.
double path_energy(const MidlinePath& path, const Grid& prob,
                   const EnergyParams& params);

// Longest run of rows whose maximum reaches tau; the earlier run wins ties.
RowRange select_row_range(const Grid& prob, const EnergyParams& params);

// Exact minimizer of path_energy over all connected paths on `range`.
// Among equal-cost predecessors the smaller column wins, and backtracking
// starts from the smallest minimal column in the last row.
MidlinePath find_optimal_path(const Grid& prob, RowRange range,
                              const EnergyParams& params);

// Per-row argmax (leftmost on ties). No continuity guarantee.
std::vector<int> argmax_baseline(const Grid& prob, RowRange range);

}  // namespace midline
