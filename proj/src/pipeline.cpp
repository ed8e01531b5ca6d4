#include "midline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "midline/error.hpp"
#include "midline/path_io.hpp"

namespace midline {

namespace fs = std::filesystem;

namespace {

Grid threshold_mask(const Grid& prob, double tau) {
  std::vector<double> values(prob.size());
  const auto src = prob.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    values[i] = src[i] >= tau ? 1.0 : 0.0;
  }
  return Grid(prob.height(), prob.width(), std::move(values), GridKind::mask);
}

std::vector<fs::path> slice_dirs(const fs::path& dir) {
  if (fs::exists(dir / "prob.mdg")) return {dir};
  std::vector<fs::path> out;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto name = entry.path().filename().string();
      if (entry.is_directory() && name.rfind("slice_", 0) == 0 &&
          fs::exists(entry.path() / "prob.mdg")) {
        out.push_back(entry.path());
      }
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) {
    throw FormatError("no prob.mdg found in " + dir.string());
  }
  return out;
}

SliceMetrics evaluate_slice(const fs::path& dir, const PipelineConfig& config,
                            PathMethod method) {
  const Grid prob = load_grid(dir / "prob.mdg", GridKind::probability);
  std::optional<Grid> mask;
  if (fs::exists(dir / "mask.mdg")) {
    mask = load_grid(dir / "mask.mdg", GridKind::mask);
  }
  const fs::path gt_file = fs::exists(dir / "gt_original.csv")
                               ? dir / "gt_original.csv"
                               : dir / "gt_path.csv";
  const Polyline gt = polyline_from_csv(read_text_file(gt_file));

  const SliceRun run = run_slice(prob, mask, config, method);
  const DistanceReport d = compare_polylines(run.original, gt, config.spacing);

  SliceMetrics m;
  m.hd_mm = d.hd_mm;
  m.assd_mm = d.assd_mm;
  m.n_pred = run.original.size();
  m.n_gt = gt.size();
  m.theta_rad = run.pose.theta;
  m.discontinuities = count_discontinuities(run.path.cols);
  m.baseline_discontinuities = count_discontinuities(run.baseline.cols);
  return m;
}

nlohmann::ordered_json case_to_json(const CaseResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["ok"] = c.ok;
  if (!c.ok) {
    j["error"] = c.error;
    j["exit_code"] = c.exit_code;
    return j;
  }
  j["hd_mm"] = c.hd_mm;
  j["assd_mm"] = c.assd_mm;
  j["discontinuities"] = c.discontinuities;
  j["baseline_discontinuities"] = c.baseline_discontinuities;
  auto slices = nlohmann::ordered_json::array();
  for (const auto& s : c.slices) {
    nlohmann::ordered_json js;
    js["hd_mm"] = s.hd_mm;
    js["assd_mm"] = s.assd_mm;
    js["n_pred"] = s.n_pred;
    js["n_gt"] = s.n_gt;
    js["theta_rad"] = s.theta_rad;
    slices.push_back(std::move(js));
  }
  j["slices"] = std::move(slices);
  return j;
}

}  // namespace

void PipelineConfig::validate() const {
  energy.validate();
  spacing.validate();
  if (parallelism == 0) throw InvalidArgument("parallelism must be >= 1");
}

PipelineConfig config_from_json(const std::string& text) {
  PipelineConfig cfg;
  try {
    const auto j = nlohmann::json::parse(text);
    cfg.energy.tau = j.value("tau", cfg.energy.tau);
    cfg.energy.epsilon = j.value("epsilon", cfg.energy.epsilon);
    cfg.energy.pairwise_cost = j.value("pairwise_cost", cfg.energy.pairwise_cost);
    if (j.contains("spacing")) {
      const auto& s = j.at("spacing");
      cfg.spacing.row_mm = s.value("row_mm", cfg.spacing.row_mm);
      cfg.spacing.col_mm = s.value("col_mm", cfg.spacing.col_mm);
    }
    cfg.parallelism = j.value("parallelism", cfg.parallelism);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed config JSON: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const PipelineConfig& config) {
  nlohmann::ordered_json j;
  j["tau"] = config.energy.tau;
  j["epsilon"] = config.energy.epsilon;
  j["pairwise_cost"] = config.energy.pairwise_cost;
  j["spacing"] = {{"row_mm", config.spacing.row_mm},
                  {"col_mm", config.spacing.col_mm}};
  j["parallelism"] = config.parallelism;
  return j.dump(2) + "\n";
}

StandardPath extract_path(const Grid& aligned_prob, const EnergyParams& params,
                          PathMethod method) {
  const RowRange range = select_row_range(aligned_prob, params);
  if (method == PathMethod::argmax) {
    return {range.start, argmax_baseline(aligned_prob, range)};
  }
  MidlinePath p = find_optimal_path(aligned_prob, range, params);
  return {p.row_start, std::move(p.cols)};
}

Polyline unalign_cols(const StandardPath& path, const AlignmentPose& pose) {
  // unalign_path only reads row_start and cols, so a discontinuous baseline
  // maps the same way.
  return unalign_path(MidlinePath{path.row_start, path.cols}, pose);
}

SliceRun run_slice(const Grid& prob, const std::optional<Grid>& initial_mask,
                   const PipelineConfig& config, PathMethod method) {
  config.validate();
  if (prob.kind() != GridKind::probability) {
    throw InvalidArgument("pipeline input must be a probability grid");
  }
  const Grid mask =
      initial_mask ? *initial_mask : threshold_mask(prob, config.energy.tau);
  if (mask.height() != prob.height() || mask.width() != prob.width()) {
    throw FormatError("mask and probability map dimensions differ");
  }

  SliceRun run;
  run.pose = compute_pose(extract_endpoints(mask), prob.height(), prob.width());
  const Grid aligned = align_image(prob, run.pose);
  run.path = extract_path(aligned, config.energy, method);
  run.baseline = method == PathMethod::argmax
                     ? run.path
                     : extract_path(aligned, config.energy, PathMethod::argmax);
  run.original = unalign_cols(run.path, run.pose);
  return run;
}

CaseResult run_case(const fs::path& dir, const PipelineConfig& config,
                    PathMethod method) {
  CaseResult result;
  result.name = dir.filename().empty() ? dir.parent_path().filename().string()
                                       : dir.filename().string();
  try {
    for (const auto& slice : slice_dirs(dir)) {
      result.slices.push_back(evaluate_slice(slice, config, method));
    }
    double hd = 0.0;
    double as = 0.0;
    for (const auto& s : result.slices) {
      hd += s.hd_mm;
      as += s.assd_mm;
      result.discontinuities += s.discontinuities;
      result.baseline_discontinuities += s.baseline_discontinuities;
    }
    const auto n = static_cast<double>(result.slices.size());
    result.hd_mm = hd / n;
    result.assd_mm = as / n;
    result.ok = true;
  } catch (const Error& e) {
    result.error = e.what();
    result.exit_code = e.exit_code();
    result.slices.clear();
  } catch (const std::exception& e) {
    result.error = e.what();
    result.exit_code = 1;
    result.slices.clear();
  }
  return result;
}

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

PipelineReport run_pipeline(const std::vector<fs::path>& cases,
                            const PipelineConfig& config, PathMethod method) {
  config.validate();
  std::vector<fs::path> ordered = cases;
  std::sort(ordered.begin(), ordered.end(),
            [](const fs::path& a, const fs::path& b) {
              const auto na = a.filename().string();
              const auto nb = b.filename().string();
              return na != nb ? na < nb : a < b;
            });

  std::vector<CaseResult> results(ordered.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ordered.size(); i = next++) {
      results[i] = run_case(ordered[i], config, method);
    }
  };
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(config.parallelism, ordered.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < n_workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  PipelineReport report;
  report.method = method;
  std::vector<double> hd;
  std::vector<double> as;
  for (const auto& r : results) {
    if (!r.ok) continue;
    ++report.n;
    hd.push_back(r.hd_mm);
    as.push_back(r.assd_mm);
    if (r.discontinuities > 0) ++report.discontinuity_count;
    if (r.baseline_discontinuities > 0) ++report.discontinuity_count_baseline;
  }
  const MeanStd h = mean_std(hd);
  const MeanStd a = mean_std(as);
  report.hd_mm_mean = h.mean;
  report.hd_mm_std = h.std;
  report.assd_mm_mean = a.mean;
  report.assd_mm_std = a.std;
  report.cases = std::move(results);
  return report;
}

std::string report_to_json(const PipelineReport& report) {
  nlohmann::ordered_json j;
  j["n"] = report.n;
  j["hd_mm_mean"] = report.hd_mm_mean;
  j["hd_mm_std"] = report.hd_mm_std;
  j["assd_mm_mean"] = report.assd_mm_mean;
  j["assd_mm_std"] = report.assd_mm_std;
  auto failures = nlohmann::ordered_json::array();
  for (const auto& c : report.cases) {
    if (!c.ok) {
      failures.push_back(
          {{"case", c.name}, {"error", c.error}, {"exit_code", c.exit_code}});
    }
  }
  j["failures"] = std::move(failures);
  j["discontinuity_count_baseline"] = report.discontinuity_count_baseline;
  j["discontinuity_count"] = report.discontinuity_count;
  j["method"] = report.method == PathMethod::optimal ? "optimal" : "argmax";
  auto cases = nlohmann::ordered_json::array();
  for (const auto& c : report.cases) cases.push_back(case_to_json(c));
  j["cases"] = std::move(cases);
  return j.dump(2) + "\n";
}

std::vector<fs::path> read_manifest(const fs::path& manifest) {
  std::istringstream in(read_text_file(manifest));
  const fs::path base = manifest.parent_path();
  std::vector<fs::path> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line.front() == '#') continue;
    fs::path p(line);
    out.push_back(p.is_absolute() ? p : base / p);
  }
  return out;
}

}  // namespace midline
