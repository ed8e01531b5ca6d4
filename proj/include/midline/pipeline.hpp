#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "midline/alignment.hpp"
#include "midline/grid.hpp"
#include "midline/metrics.hpp"
#include "midline/pathfinding.hpp"

namespace midline {

struct PipelineConfig {
  EnergyParams energy;
  Spacing spacing;
  std::size_t parallelism = 1;

  void validate() const;
};

// JSON mirror of PipelineConfig:
//   {"tau": .., "epsilon": .., "pairwise_cost": ..,
//    "spacing": {"row_mm": .., "col_mm": ..}, "parallelism": ..}
// Missing keys keep their defaults.
PipelineConfig config_from_json(const std::string& text);
std::string config_to_json(const PipelineConfig& config);

enum class PathMethod { optimal, argmax };

// Row-indexed standard-space curve. Unlike MidlinePath it may be
// discontinuous (argmax baseline output).
struct StandardPath {
  std::size_t row_start = 0;
  std::vector<int> cols;
};

// Runs pathfinding on an already aligned probability map.
StandardPath extract_path(const Grid& aligned_prob, const EnergyParams& params,
                          PathMethod method);

Polyline unalign_cols(const StandardPath& path, const AlignmentPose& pose);

// One slice through align -> pathfind -> unalign.
struct SliceRun {
  AlignmentPose pose;
  StandardPath path;
  StandardPath baseline;  // argmax on the same aligned map
  Polyline original;      // `path` in original-image coordinates
};

// `initial_mask` estimates the pose; when absent the probability map is
// thresholded at tau instead.
SliceRun run_slice(const Grid& prob, const std::optional<Grid>& initial_mask,
                   const PipelineConfig& config, PathMethod method);

struct SliceMetrics {
  double hd_mm = 0.0;
  double assd_mm = 0.0;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  double theta_rad = 0.0;
  std::size_t discontinuities = 0;           // of the evaluated path
  std::size_t baseline_discontinuities = 0;  // of the argmax baseline
};

struct CaseResult {
  std::string name;
  bool ok = false;
  std::string error;
  int exit_code = 0;
  std::vector<SliceMetrics> slices;
  // Per-case values are means over the case's slices.
  double hd_mm = 0.0;
  double assd_mm = 0.0;
  std::size_t discontinuities = 0;
  std::size_t baseline_discontinuities = 0;
};

// A case directory holds prob.mdg, an optional mask.mdg, and ground truth in
// original-image space (gt_original.csv, falling back to gt_path.csv). A
// multi-slice case instead holds slice_* subdirectories with those files.
CaseResult run_case(const std::filesystem::path& dir,
                    const PipelineConfig& config, PathMethod method);

struct PipelineReport {
  PathMethod method = PathMethod::optimal;
  std::vector<CaseResult> cases;  // sorted by name
  std::size_t n = 0;              // successful cases
  double hd_mm_mean = 0.0;
  double hd_mm_std = 0.0;
  double assd_mm_mean = 0.0;
  double assd_mm_std = 0.0;
  // Cases whose evaluated / argmax-baseline path has at least one step of
  // more than one column.
  std::size_t discontinuity_count = 0;
  std::size_t discontinuity_count_baseline = 0;

  bool all_ok() const { return n == cases.size(); }
};

// Runs every case on a pool of config.parallelism workers; the result does
// not depend on the worker count.
PipelineReport run_pipeline(const std::vector<std::filesystem::path>& cases,
                            const PipelineConfig& config, PathMethod method);

std::string report_to_json(const PipelineReport& report);

// One case directory per non-empty line; relative entries resolve against
// the manifest's own directory. Lines starting with '#' are comments.
std::vector<std::filesystem::path> read_manifest(
    const std::filesystem::path& manifest);

// Mean and sample standard deviation (n - 1 denominator; 0 for n < 2).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

}  // namespace midline
