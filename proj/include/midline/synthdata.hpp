#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "midline/alignment.hpp"
#include "midline/grid.hpp"
#include "midline/metrics.hpp"
#include "midline/pathfinding.hpp"

namespace midline {

// Parameters of one synthetic midline case. The ground truth lives in a
// canonical (standard) frame where the ideal midline is the column width/2;
// theta_deg rotates it into the "patient" frame the pipeline sees.
struct SynthParams {
  std::size_t height = 129;
  std::size_t width = 129;
  double shift_amplitude = 0.0;  // bulge height in px (signed)
  double shift_center_row = 64.0;
  double shift_sigma = 16.0;
  double band_sigma = 1.0;   // transverse sigma of the probability ridge
  double noise_level = 0.0;  // mixing weight of uniform noise, in [0, 1)
  double theta_deg = 0.0;
  // Ground truth spans rows [row_margin, height - 1 - row_margin]; the
  // probability ridge is absent outside that span.
  std::size_t row_margin = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthCase {
  SynthParams params;
  // Patient-frame probability map (equal to the canonical map when
  // theta_deg == 0).
  Grid prob;
  // Canonical-frame ground truth and its 5 px band.
  MidlinePath gt_path;
  Grid gt_mask;
  // Maps patient-frame coordinates onto the canonical frame.
  AlignmentPose pose_truth;
  // Patient-frame initial midline mask: a 5 px horizontal band around the
  // rotated ground truth, used to estimate the pose.
  Grid mask;
  // Patient-frame intensity slice: a bright ellipse split by a dark fissure.
  Grid image;
  // gt_path mapped into the patient frame.
  Polyline gt_original;
};

inline constexpr int kGroundTruthBandWidth = 5;

SynthCase gen_case(const SynthParams& params);

// 1s at columns [col - (w-1)/2, col + (w-1)/2] on every path row, clipped.
Grid band_expand(const MidlinePath& path, int width_px, std::size_t height,
                 std::size_t width);

// Canonical ground-truth columns for every row: rounded Gaussian bulge with
// continuity repair. Throws InvalidArgument if the shape is too steep or
// leaves the grid.
std::vector<int> ground_truth_columns(const SynthParams& params);

// Exhaustive minimiser of path_energy over every connected path on `range`,
// returning the lexicographically smallest column sequence among minima.
// Refuses instances with width * 3^(len-1) > 1e7.
MidlinePath brute_force_optimal_path(const Grid& prob, RowRange range,
                                     const EnergyParams& params);

std::string synth_params_to_json(const SynthParams& params);
SynthParams synth_params_from_json(const std::string& text);

// A corpus is `base` with optional per-case uniform draws for the pose angle
// and bulge. Case i is fully determined by (corpus, seed, i).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct CorpusParams {
  SynthParams base;
  std::optional<Interval> theta_deg_range;
  std::optional<Interval> shift_amplitude_range;
  std::optional<Interval> shift_center_row_range;
};

SynthParams corpus_case_params(const CorpusParams& corpus, std::uint64_t seed,
                               std::size_t index);

// Accepts plain SynthParams JSON plus optional "*_range": [lo, hi] keys.
CorpusParams corpus_params_from_json(const std::string& text);

// Writes prob.mdg, mask.mdg, image.mdg, gt_mask.mdg, gt_path.csv,
// gt_original.csv, pose.json and params.json into `dir` (created if needed).
void write_case(const std::filesystem::path& dir, const SynthCase& c);

}  // namespace midline
