// Command-line front end: align, pathfind, eval, pipeline, synth.
//
// Exit codes: 0 ok, 1 usage or unexpected error, 2 bad input format,
// 3 degenerate geometry, 4 no activated rows. `pipeline` exits 1 when any
// case fails; details are in the report.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "midline/alignment.hpp"
#include "midline/error.hpp"
#include "midline/grid.hpp"
#include "midline/metrics.hpp"
#include "midline/path_io.hpp"
#include "midline/pathfinding.hpp"
#include "midline/pipeline.hpp"
#include "midline/synthdata.hpp"

namespace fs = std::filesystem;
using namespace midline;

namespace {

struct AlignArgs {
  std::string image, mask, out_image, out_pose;
};

struct PathfindArgs {
  std::string prob, pose, out_path, out_original;
  EnergyParams energy;
  bool baseline = false;
};

struct EvalArgs {
  std::string pred, gt, out_json;
  Spacing spacing;
};

struct PipelineArgs {
  std::string case_dir, manifest, config, report;
  bool baseline = false;
  std::size_t jobs = 0;
};

struct SynthArgs {
  std::string params, out_dir;
  std::size_t n = 1;
  std::uint64_t seed = 0;
};

int cmd_align(const AlignArgs& a) {
  const Grid image = load_grid(a.image, GridKind::intensity);
  const Grid mask = load_grid(a.mask, GridKind::mask);
  if (mask.height() != image.height() || mask.width() != image.width()) {
    throw FormatError("image and mask dimensions differ");
  }
  const AlignmentPose pose =
      compute_pose(extract_endpoints(mask), image.height(), image.width());
  save_grid(a.out_image, align_image(image, pose));
  write_text_file(a.out_pose, pose_to_json(pose));
  return 0;
}

int cmd_pathfind(const PathfindArgs& a) {
  a.energy.validate();
  const Grid prob = load_grid(a.prob, GridKind::probability);
  const PathMethod method = a.baseline ? PathMethod::argmax : PathMethod::optimal;
  const StandardPath path = extract_path(prob, a.energy, method);
  write_text_file(a.out_path, path_to_csv(MidlinePath{path.row_start, path.cols}));
  if (!a.pose.empty()) {
    const AlignmentPose pose = pose_from_json(read_text_file(a.pose));
    fs::path out = a.out_original;
    if (out.empty()) {
      out = fs::path(a.out_path);
      out.replace_extension(".original.csv");
    }
    write_text_file(out, polyline_to_csv(unalign_cols(path, pose)));
  }
  return 0;
}

int cmd_eval(const EvalArgs& a) {
  const Polyline pred = polyline_from_csv(read_text_file(a.pred));
  const Polyline gt = polyline_from_csv(read_text_file(a.gt));
  const DistanceReport d = compare_polylines(pred, gt, a.spacing);
  nlohmann::ordered_json j;
  j["hd_mm"] = d.hd_mm;
  j["assd_mm"] = d.assd_mm;
  j["n_pred"] = pred.size();
  j["n_gt"] = gt.size();
  const std::string text = j.dump(2) + "\n";
  if (a.out_json.empty()) {
    std::cout << text;
  } else {
    write_text_file(a.out_json, text);
  }
  return 0;
}

int cmd_pipeline(const PipelineArgs& a) {
  PipelineConfig config;
  if (!a.config.empty()) config = config_from_json(read_text_file(a.config));
  if (a.jobs > 0) config.parallelism = a.jobs;

  std::vector<fs::path> cases;
  if (!a.manifest.empty()) {
    cases = read_manifest(a.manifest);
  } else {
    cases.push_back(a.case_dir);
  }
  const PipelineReport report = run_pipeline(
      cases, config, a.baseline ? PathMethod::argmax : PathMethod::optimal);
  write_text_file(a.report, report_to_json(report));
  for (const auto& c : report.cases) {
    if (!c.ok) std::cerr << "case " << c.name << " failed: " << c.error << "\n";
  }
  return report.all_ok() ? 0 : 1;
}

int cmd_synth(const SynthArgs& a) {
  const CorpusParams corpus = corpus_params_from_json(read_text_file(a.params));
  const fs::path root(a.out_dir);
  fs::create_directories(root);
  std::string manifest;
  for (std::size_t i = 0; i < a.n; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "case_%04zu", i);
    write_case(root / name, gen_case(corpus_case_params(corpus, a.seed, i)));
    manifest += name;
    manifest += '\n';
  }
  write_text_file(root / "manifest.txt", manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous midline extraction from probability maps"};
  app.require_subcommand(1);

  AlignArgs align;
  auto* align_cmd = app.add_subcommand("align", "Align an image to standard space using a midline mask");
  align_cmd->add_option("--image", align.image, "Input image (MDG1)")->required();
  align_cmd->add_option("--mask", align.mask, "Initial midline mask (MDG1)")->required();
  align_cmd->add_option("--out-image", align.out_image, "Aligned image (MDG1)")->required();
  align_cmd->add_option("--out-pose", align.out_pose, "Pose JSON")->required();

  PathfindArgs pf;
  auto* pf_cmd = app.add_subcommand("pathfind", "Extract a continuous midline from a probability map");
  pf_cmd->add_option("--prob", pf.prob, "Standard-space probability map (MDG1)")->required();
  pf_cmd->add_option("--pose", pf.pose, "Pose JSON; also writes the original-space polyline");
  pf_cmd->add_option("--tau", pf.energy.tau, "Row activation threshold")->capture_default_str();
  pf_cmd->add_option("--epsilon", pf.energy.epsilon, "Probability floor")->capture_default_str();
  pf_cmd->add_option("--pairwise-cost", pf.energy.pairwise_cost, "Transition cost")->capture_default_str();
  pf_cmd->add_option("--out-path", pf.out_path, "Standard-space path CSV")->required();
  pf_cmd->add_option("--out-original", pf.out_original,
                     "Original-space polyline CSV (default: <out-path>.original.csv)");
  pf_cmd->add_flag("--baseline-argmax", pf.baseline, "Use per-row argmax instead of the optimal path");

  EvalArgs ev;
  auto* ev_cmd = app.add_subcommand("eval", "Hausdorff and average symmetric surface distance");
  ev_cmd->add_option("--pred", ev.pred, "Predicted path CSV")->required();
  ev_cmd->add_option("--gt", ev.gt, "Ground-truth path CSV")->required();
  ev_cmd->add_option("--spacing-row", ev.spacing.row_mm, "mm per pixel along rows")->capture_default_str();
  ev_cmd->add_option("--spacing-col", ev.spacing.col_mm, "mm per pixel along columns")->capture_default_str();
  ev_cmd->add_option("--out-json", ev.out_json, "Report path (stdout if omitted)");

  PipelineArgs pl;
  auto* pl_cmd = app.add_subcommand("pipeline", "Align, pathfind, unalign and evaluate cases");
  auto* case_opt = pl_cmd->add_option("--case-dir", pl.case_dir, "Single case directory");
  auto* manifest_opt = pl_cmd->add_option("--manifest", pl.manifest, "File listing case directories");
  case_opt->excludes(manifest_opt);
  pl_cmd->add_option("--config", pl.config, "PipelineConfig JSON");
  pl_cmd->add_option("--report", pl.report, "Report JSON")->required();
  pl_cmd->add_option("--jobs", pl.jobs, "Worker count (overrides config)");
  pl_cmd->add_flag("--baseline-argmax", pl.baseline, "Evaluate the per-row argmax baseline");

  SynthArgs sy;
  auto* sy_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  sy_cmd->add_option("--params", sy.params, "SynthParams JSON (optional *_range keys)")->required();
  sy_cmd->add_option("--n", sy.n, "Number of cases")->capture_default_str();
  sy_cmd->add_option("--seed", sy.seed, "Corpus seed")->capture_default_str();
  sy_cmd->add_option("--out-dir", sy.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*align_cmd) return cmd_align(align);
    if (*pf_cmd) return cmd_pathfind(pf);
    if (*ev_cmd) return cmd_eval(ev);
    if (*pl_cmd) {
      if (pl.case_dir.empty() && pl.manifest.empty()) {
        std::cerr << "error: pipeline needs --case-dir or --manifest\n";
        return 1;
      }
      return cmd_pipeline(pl);
    }
    if (*sy_cmd) return cmd_synth(sy);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
