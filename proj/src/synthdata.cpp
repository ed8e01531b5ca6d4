#include "midline/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <json.hpp>

#include "midline/error.hpp"
#include "midline/path_io.hpp"

namespace midline {

namespace {

constexpr double kMaxSynthThetaDeg = 45.0;
constexpr double kCurveSamplesPerRow = 8.0;

// Portable uniform doubles in [0, 1): the top 53 bits of a 64-bit
// SplitMix64 stream. Independent of the standard library's distributions.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : state_(seed) {}

  double next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Ground-truth column at a fractional canonical row, linear between rows.
double interpolated_column(const std::vector<int>& cols, double row) {
  const double clamped =
      std::clamp(row, 0.0, static_cast<double>(cols.size() - 1));
  const auto r0 = static_cast<std::size_t>(std::floor(clamped));
  const std::size_t r1 = std::min(r0 + 1, cols.size() - 1);
  const double f = clamped - static_cast<double>(r0);
  return (1.0 - f) * cols[r0] + f * cols[r1];
}

double ridge(double offset, double sigma) {
  return std::exp(-(offset * offset) / (2.0 * sigma * sigma));
}

double ellipse_intensity(const SynthParams& p, double row, double col,
                         double fissure_col) {
  const double cr = (static_cast<double>(p.height) - 1.0) / 2.0;
  const double cc = (static_cast<double>(p.width) - 1.0) / 2.0;
  const double ur = (row - cr) / (0.45 * static_cast<double>(p.height));
  const double uc = (col - cc) / (0.40 * static_cast<double>(p.width));
  if (ur * ur + uc * uc > 1.0) return 0.0;
  return 0.6 - 0.4 * ridge(col - fissure_col, p.band_sigma);
}

// Horizontal 5 px band around the ground-truth curve as seen in the patient
// frame: rows are scanned in the patient frame so the band's row centroids
// sit on the curve itself.
Grid patient_frame_mask(const SynthParams& p, const std::vector<int>& cols,
                        const AlignmentPose& pose) {
  Grid mask(p.height, p.width, 0.0, GridKind::mask);
  const double first_row = static_cast<double>(p.row_margin);
  const double span = static_cast<double>(p.height - 1 - 2 * p.row_margin);
  const auto n_samples = static_cast<std::size_t>(span * kCurveSamplesPerRow) + 1;
  std::vector<Point> curve;
  curve.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t = first_row + static_cast<double>(i) / kCurveSamplesPerRow;
    curve.push_back(pose.inverse({t, interpolated_column(cols, t)}));
  }

  const int half = (kGroundTruthBandWidth - 1) / 2;
  for (std::size_t r = 0; r < p.height; ++r) {
    const double row = static_cast<double>(r);
    for (std::size_t i = 1; i < curve.size(); ++i) {
      const Point& a = curve[i - 1];
      const Point& b = curve[i];
      if ((a.row - row) * (b.row - row) > 0.0 || a.row == b.row) continue;
      const double f = (row - a.row) / (b.row - a.row);
      const long center = std::lround(a.col + f * (b.col - a.col));
      for (long c = center - half; c <= center + half; ++c) {
        if (c >= 0 && c < static_cast<long>(p.width)) {
          mask.set(r, static_cast<std::size_t>(c), 1.0);
        }
      }
      break;
    }
  }
  return mask;
}

}  // namespace

void SynthParams::validate() const {
  if (height < 2 || width < 2) {
    throw InvalidArgument("synthetic grids need at least 2x2 pixels");
  }
  if (!(shift_sigma > 0.0) || !(band_sigma > 0.0)) {
    throw InvalidArgument("shift_sigma and band_sigma must be positive");
  }
  if (!(noise_level >= 0.0 && noise_level < 1.0)) {
    throw InvalidArgument("noise_level must lie in [0, 1)");
  }
  if (!std::isfinite(shift_amplitude) || !std::isfinite(shift_center_row)) {
    throw InvalidArgument("bulge parameters must be finite");
  }
  if (2 * row_margin + 2 > height) {
    throw InvalidArgument("row_margin leaves fewer than two ground-truth rows");
  }
  if (!(std::abs(theta_deg) <= kMaxSynthThetaDeg)) {
    throw InvalidArgument("theta_deg must lie in [-45, 45]");
  }
}

std::vector<int> ground_truth_columns(const SynthParams& params) {
  params.validate();
  const long base = static_cast<long>(params.width / 2);
  std::vector<int> cols(params.height);
  for (std::size_t r = 0; r < params.height; ++r) {
    const double d = static_cast<double>(r) - params.shift_center_row;
    const double shift =
        params.shift_amplitude *
        std::exp(-(d * d) / (2.0 * params.shift_sigma * params.shift_sigma));
    cols[r] = static_cast<int>(base + std::lround(shift));
  }

  // Rounding a steep bulge can produce two-column steps; pull the lower row
  // one column back toward its predecessor. Steps of three or more would
  // need more than one repair and are rejected.
  for (std::size_t r = 1; r < cols.size(); ++r) {
    const int step = cols[r] - cols[r - 1];
    if (std::abs(step) > 2) {
      throw InvalidArgument("bulge too steep: ground truth jumps " +
                            std::to_string(step) + " columns at row " +
                            std::to_string(r));
    }
  }
  for (std::size_t r = 1; r < cols.size(); ++r) {
    const int step = cols[r] - cols[r - 1];
    if (step > 1) cols[r] = cols[r - 1] + 1;
    if (step < -1) cols[r] = cols[r - 1] - 1;
  }
  for (int c : cols) {
    if (c < 0 || c >= static_cast<int>(params.width)) {
      throw InvalidArgument("ground truth leaves the grid");
    }
  }
  return cols;
}

Grid band_expand(const MidlinePath& path, int width_px, std::size_t height,
                 std::size_t width) {
  if (width_px < 1 || width_px % 2 == 0) {
    throw InvalidArgument("band width must be a positive odd number");
  }
  validate_path(path, height, width);
  Grid mask(height, width, 0.0, GridKind::mask);
  const int half = (width_px - 1) / 2;
  for (std::size_t k = 0; k < path.cols.size(); ++k) {
    const int lo = std::max(0, path.cols[k] - half);
    const int hi = std::min(static_cast<int>(width) - 1, path.cols[k] + half);
    for (int c = lo; c <= hi; ++c) {
      mask.set(path.row_start + k, static_cast<std::size_t>(c), 1.0);
    }
  }
  return mask;
}

SynthCase gen_case(const SynthParams& params) {
  params.validate();
  const std::size_t h = params.height;
  const std::size_t w = params.width;
  const std::vector<int> cols = ground_truth_columns(params);

  const std::size_t first = params.row_margin;
  const std::size_t last = h - 1 - params.row_margin;
  MidlinePath gt_path{first, std::vector<int>(cols.begin() + first,
                                              cols.begin() + last + 1)};
  AlignmentPose pose = identity_pose(h, w);
  pose.theta = params.theta_deg * std::numbers::pi / 180.0;
  const bool rotated = params.theta_deg != 0.0;

  UniformStream noise(params.seed);
  const double keep = 1.0 - params.noise_level;
  std::vector<double> prob(h * w);
  std::vector<double> image(h * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      const Point here{static_cast<double>(r), static_cast<double>(c)};
      double ridge_value = 0.0;
      double intensity = 0.0;
      if (!rotated) {
        if (r >= first && r <= last) {
          ridge_value = ridge(here.col - cols[r], params.band_sigma);
        }
        intensity = ellipse_intensity(params, here.row, here.col, cols[r]);
      } else {
        const Point q = pose.forward(here);
        if (q.row >= 0.0 && q.row <= static_cast<double>(h - 1)) {
          const double g = interpolated_column(cols, q.row);
          if (q.row >= static_cast<double>(first) &&
              q.row <= static_cast<double>(last)) {
            ridge_value = ridge(q.col - g, params.band_sigma);
          }
          intensity = ellipse_intensity(params, q.row, q.col, g);
        }
      }
      const double u = noise.next();
      prob[r * w + c] =
          std::clamp(keep * ridge_value + params.noise_level * u, 0.0, 1.0);
      image[r * w + c] = intensity;
    }
  }

  SynthCase out{
      params,
      Grid(h, w, std::move(prob), GridKind::probability),
      gt_path,
      band_expand(gt_path, kGroundTruthBandWidth, h, w),
      pose,
      Grid(h, w, 0.0, GridKind::mask),
      Grid(h, w, std::move(image), GridKind::intensity),
      unalign_path(gt_path, pose),
  };
  out.mask = rotated ? patient_frame_mask(params, cols, pose) : out.gt_mask;
  return out;
}

MidlinePath brute_force_optimal_path(const Grid& prob, RowRange range,
                                     const EnergyParams& params) {
  if (range.end < range.start || range.end >= prob.height()) {
    throw InvalidArgument("invalid row range");
  }
  const std::size_t len = range.length();
  double budget = static_cast<double>(prob.width());
  for (std::size_t k = 1; k < len; ++k) budget *= 3.0;
  if (budget > 1e7) {
    throw InvalidArgument("instance too large for exhaustive search");
  }

  const int width = static_cast<int>(prob.width());
  MidlinePath candidate{range.start, std::vector<int>(len, 0)};
  MidlinePath best;
  double best_energy = kInfiniteCost;

  // Depth-first in ascending column order, so the first path reaching a
  // given energy is the lexicographically smallest one.
  auto visit = [&](auto&& self, std::size_t depth) -> void {
    if (depth == len) {
      const double e = path_energy(candidate, prob, params);
      if (e < best_energy) {
        best_energy = e;
        best = candidate;
      }
      return;
    }
    int lo = 0;
    int hi = width - 1;
    if (depth > 0) {
      lo = std::max(0, candidate.cols[depth - 1] - 1);
      hi = std::min(width - 1, candidate.cols[depth - 1] + 1);
    }
    for (int c = lo; c <= hi; ++c) {
      candidate.cols[depth] = c;
      self(self, depth + 1);
    }
  };
  visit(visit, 0);
  return best;
}

std::string synth_params_to_json(const SynthParams& p) {
  nlohmann::ordered_json j;
  j["height"] = p.height;
  j["width"] = p.width;
  j["shift_amplitude"] = p.shift_amplitude;
  j["shift_center_row"] = p.shift_center_row;
  j["shift_sigma"] = p.shift_sigma;
  j["band_sigma"] = p.band_sigma;
  j["noise_level"] = p.noise_level;
  j["theta_deg"] = p.theta_deg;
  j["row_margin"] = p.row_margin;
  j["seed"] = p.seed;
  return j.dump(2) + "\n";
}

SynthParams synth_params_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SynthParams p;
    p.height = j.value("height", p.height);
    p.width = j.value("width", p.width);
    p.shift_amplitude = j.value("shift_amplitude", p.shift_amplitude);
    p.shift_center_row = j.value("shift_center_row", p.shift_center_row);
    p.shift_sigma = j.value("shift_sigma", p.shift_sigma);
    p.band_sigma = j.value("band_sigma", p.band_sigma);
    p.noise_level = j.value("noise_level", p.noise_level);
    p.theta_deg = j.value("theta_deg", p.theta_deg);
    p.row_margin = j.value("row_margin", p.row_margin);
    p.seed = j.value("seed", p.seed);
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed synth params JSON: ") + e.what());
  }
}

SynthParams corpus_case_params(const CorpusParams& corpus, std::uint64_t seed,
                               std::size_t index) {
  // One stream per case keeps case i independent of how many cases precede
  // it in a run.
  UniformStream draws(seed * 0x100000001B3ull + index);
  SynthParams p = corpus.base;
  p.seed = static_cast<std::uint64_t>(draws.next() * 0x1.0p53);
  auto draw = [&](const std::optional<Interval>& range, double& field) {
    const double u = draws.next();
    if (range) field = range->lo + u * (range->hi - range->lo);
  };
  draw(corpus.theta_deg_range, p.theta_deg);
  draw(corpus.shift_amplitude_range, p.shift_amplitude);
  draw(corpus.shift_center_row_range, p.shift_center_row);
  return p;
}

CorpusParams corpus_params_from_json(const std::string& text) {
  CorpusParams corpus;
  corpus.base = synth_params_from_json(text);
  try {
    const auto j = nlohmann::json::parse(text);
    auto range = [&](const char* key) -> std::optional<Interval> {
      if (!j.contains(key)) return std::nullopt;
      const auto& v = j.at(key);
      if (!v.is_array() || v.size() != 2) {
        throw FormatError(std::string(key) + " must be [lo, hi]");
      }
      return Interval{v[0].get<double>(), v[1].get<double>()};
    };
    corpus.theta_deg_range = range("theta_deg_range");
    corpus.shift_amplitude_range = range("shift_amplitude_range");
    corpus.shift_center_row_range = range("shift_center_row_range");
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed corpus params JSON: ") + e.what());
  }
  return corpus;
}

void write_case(const std::filesystem::path& dir, const SynthCase& c) {
  std::filesystem::create_directories(dir);
  save_grid(dir / "prob.mdg", c.prob);
  save_grid(dir / "mask.mdg", c.mask);
  save_grid(dir / "image.mdg", c.image);
  save_grid(dir / "gt_mask.mdg", c.gt_mask);
  write_text_file(dir / "gt_path.csv", path_to_csv(c.gt_path));
  write_text_file(dir / "gt_original.csv", polyline_to_csv(c.gt_original));
  write_text_file(dir / "pose.json", pose_to_json(c.pose_truth));
  write_text_file(dir / "params.json", synth_params_to_json(c.params));
}

}  // namespace midline
