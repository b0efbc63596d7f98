// planar-pose: command-line front end for the planar relative pose library.
//
//   planar-pose solve <file.csv> [--method optimal|linear|ransac] [--calib c.json]
//   planar-pose bench noise|hill|stability [--trials N] [--seed S] ...
//   planar-pose trajectory <pairs.csv> [--gt gt.csv] [--continuous-path] ...
//   planar-pose synth [--points N] [--sigma S] [--seed S] ...

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "planar_pose/error.h"
#include "planar_pose/io.h"
#include "planar_pose/optimal_solver.h"
#include "planar_pose/ransac.h"
#include "planar_pose/synthetic.h"
#include "planar_pose/trajectory.h"

namespace pp = planar_pose;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitRobust = 4;
constexpr int kExitInternal = 5;

int ExitCodeFor(pp::ErrorCode code) {
  switch (code) {
    case pp::ErrorCode::kParse:
    case pp::ErrorCode::kInvalidInput:
      return kExitParse;
    case pp::ErrorCode::kDegenerateConfiguration:
    case pp::ErrorCode::kDegenerateSample:
      return kExitDegenerate;
    case pp::ErrorCode::kRobustFailure:
      return kExitRobust;
    default:
      return kExitInternal;
  }
}

int ReportError(std::string_view code, const std::string& message, int exit_code) {
  json err = {{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}};
  std::cerr << err.dump() << std::endl;
  return exit_code;
}

json EssentialJson(const pp::PlanarPose& pose) {
  json arr = json::array();
  for (double e : pp::EssentialFromPose(pose).entries()) arr.push_back(pp::Round15(e));
  return arr;
}

struct SolveArgs {
  std::string input;
  std::string method = "optimal";
  std::string calib;
  double threshold = 1e-6;
  double holdout = -1.0;  // < 0: method default
  uint64_t seed = 0;
  int max_iterations = 10000;
};

int RunSolve(const SolveArgs& args) {
  std::optional<pp::CameraPairCalibration> calib;
  if (!args.calib.empty()) calib = pp::ReadCalibrationFile(args.calib);
  const std::vector<pp::Correspondence> points = pp::ReadCorrespondenceFile(args.input, calib);

  json out;
  if (args.method == "optimal") {
    pp::OptimalSolverOptions options;
    if (args.holdout >= 0.0) options.holdout_fraction = args.holdout;
    const pp::OptimalSolverResult r = pp::SolveOptimal(points, options);
    out["alpha_deg"] = pp::Round15(pp::Rad2Deg(r.pose.alpha));
    out["beta_deg"] = pp::Round15(pp::Rad2Deg(r.pose.beta));
    out["essential"] = EssentialJson(r.pose);
    out["cost"] = pp::Round15(r.cost);
    out["candidates_evaluated"] = r.candidates.size();
    out["branch"] = pp::ToString(r.branch);
  } else if (args.method == "linear") {
    const pp::PlanarPose pose = pp::SolveLinearPlanar(points);
    out["alpha_deg"] = pp::Round15(pp::Rad2Deg(pose.alpha));
    out["beta_deg"] = pp::Round15(pp::Rad2Deg(pose.beta));
    out["essential"] = EssentialJson(pose);
    out["cost"] = pp::Round15(pp::AlgebraicCost(pose, points));
    out["candidates_evaluated"] = 1;
    out["branch"] = "linear";
  } else if (args.method == "ransac") {
    pp::RansacConfig cfg;
    cfg.threshold = args.threshold;
    cfg.seed = args.seed;
    cfg.max_iterations = args.max_iterations;
    if (args.holdout >= 0.0) cfg.holdout_fraction = args.holdout;
    const pp::RansacResult r = pp::RansacEstimate(points, cfg);
    std::vector<pp::Correspondence> inliers;
    json mask = json::array();
    for (size_t i = 0; i < points.size(); ++i) {
      if (r.inlier_mask[i]) {
        inliers.push_back(points[i]);
        mask.push_back(i);
      }
    }
    out["alpha_deg"] = pp::Round15(pp::Rad2Deg(r.pose.alpha));
    out["beta_deg"] = pp::Round15(pp::Rad2Deg(r.pose.beta));
    out["essential"] = EssentialJson(r.pose);
    out["cost"] = pp::Round15(pp::AlgebraicCost(r.pose, inliers));
    out["candidates_evaluated"] = r.iterations_run;
    out["branch"] = nullptr;
    out["inliers"] = r.num_inliers;
    out["inlier_indices"] = mask;
    out["iterations"] = r.iterations_run;
  } else {
    return ReportError("parse_error", "unknown method '" + args.method + "'", kExitParse);
  }
  std::cout << out.dump() << std::endl;
  return kExitOk;
}

struct BenchArgs {
  std::string kind;
  int trials = 100;
  uint64_t seed = 0;
  std::string points;
  std::string sigmas = "0.5,1,2";
  std::string steepness = "1,3";
  bool timing = false;
};

int RunBench(const BenchArgs& args) {
  pp::SweepOptions options;
  options.trials = args.trials;
  options.seed = args.seed;
  options.timing = args.timing;
  if (args.trials < 1) return ReportError("parse_error", "--trials must be >= 1", kExitParse);

  if (args.kind == "noise") {
    const auto counts = pp::ParseIntList(args.points.empty() ? "10,20,50,100,200" : args.points);
    const auto rows = pp::RunNoiseSweep(counts, pp::ParseDoubleList(args.sigmas), options);
    pp::WriteBenchCsv(std::cout, rows);
  } else if (args.kind == "hill") {
    const auto counts = pp::ParseIntList(args.points.empty() ? "10,50,200" : args.points);
    options.base.noise_sigma_px = 0.5;
    const auto rows = pp::RunHillSweep(pp::ParseDoubleList(args.steepness), counts, options);
    pp::WriteBenchCsv(std::cout, rows);
  } else if (args.kind == "stability") {
    int lo = 5, hi = 200;
    if (!args.points.empty()) {
      const auto range = pp::ParseIntList(args.points);
      if (range.size() != 2 || range[0] < 3 || range[1] < range[0]) {
        return ReportError("parse_error", "--points for stability is MIN,MAX with MIN >= 3",
                           kExitParse);
      }
      lo = range[0];
      hi = range[1];
    }
    pp::WriteStabilityCsv(std::cout, pp::RunStabilityTest(args.trials, args.seed, lo, hi));
  } else {
    return ReportError("parse_error", "unknown bench '" + args.kind + "'", kExitParse);
  }
  return kExitOk;
}

struct TrajectoryArgs {
  std::string input;
  std::string calib;
  std::string gt;
  std::string cdf_out;
  bool continuous_path = false;
  double threshold = 1e-6;
  double holdout = 0.05;
  uint64_t seed = 0;
};

int RunTrajectoryCmd(const TrajectoryArgs& args) {
  std::optional<pp::CameraPairCalibration> calib;
  if (!args.calib.empty()) calib = pp::ReadCalibrationFile(args.calib);
  std::ifstream in(args.input);
  if (!in) throw pp::Error(pp::ErrorCode::kParse, "cannot open " + args.input);
  std::vector<pp::PairRecord> records = pp::ReadPairRecords(in, calib);
  if (!args.gt.empty()) {
    std::ifstream gt_in(args.gt);
    if (!gt_in) throw pp::Error(pp::ErrorCode::kParse, "cannot open " + args.gt);
    const auto gt = pp::ReadGroundTruth(gt_in);
    for (auto& r : records) {
      if (auto it = gt.find(r.id); it != gt.end()) r.ground_truth = it->second;
    }
  }
  pp::TrajectoryOptions options;
  options.continuous_path = args.continuous_path;
  options.ransac.threshold = args.threshold;
  options.ransac.holdout_fraction = args.holdout;
  options.ransac.seed = args.seed;
  const auto rows = pp::RunTrajectory(records, options);
  pp::WriteTrajectoryCsv(std::cout, rows);
  if (!args.cdf_out.empty()) {
    std::ofstream cdf(args.cdf_out);
    if (!cdf) throw pp::Error(pp::ErrorCode::kParse, "cannot write " + args.cdf_out);
    pp::WriteErrorCdfCsv(cdf, rows);
  }
  return kExitOk;
}

struct SynthArgs {
  int points = 100;
  double sigma = 0.0;
  double steepness = 0.0;
  double outliers = 0.0;
  uint64_t seed = 0;
  std::optional<double> rotation_deg;
  bool pixels = false;
  std::string calib_out;
};

int RunSynth(const SynthArgs& args) {
  pp::SceneConfig cfg;
  cfg.num_points = args.points;
  cfg.noise_sigma_px = args.sigma;
  cfg.hill_steepness_deg = args.steepness;
  cfg.outlier_fraction = args.outliers;
  cfg.seed = args.seed;
  cfg.fixed_rotation_deg = args.rotation_deg;
  const pp::SyntheticScene scene = pp::GenerateScene(cfg);
  pp::WriteSceneCsv(std::cout, scene, args.pixels);
  if (!args.calib_out.empty()) {
    const pp::Calibration cam{cfg.focal, cfg.focal, cfg.cx, cfg.cy};
    std::ofstream out(args.calib_out);
    if (!out) throw pp::Error(pp::ErrorCode::kParse, "cannot write " + args.calib_out);
    out << pp::CalibrationToJson({cam, cam}) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative pose of two calibrated cameras under planar motion"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Estimate the pose from a correspondence CSV");
  solve_cmd->add_option("input", solve.input, "Correspondence CSV")->required();
  solve_cmd->add_option("--method", solve.method, "optimal, linear or ransac")
      ->check(CLI::IsMember({"optimal", "linear", "ransac"}));
  solve_cmd->add_option("--calib", solve.calib, "Calibration JSON for pixel input");
  solve_cmd->add_option("--threshold", solve.threshold, "RANSAC Sampson threshold");
  solve_cmd->add_option("--holdout", solve.holdout, "Holdout fraction for candidate selection");
  solve_cmd->add_option("--seed", solve.seed, "RANSAC seed");
  solve_cmd->add_option("--max-iterations", solve.max_iterations, "RANSAC iteration cap");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Synthetic benchmarks (CSV on stdout)");
  bench_cmd->add_option("kind", bench.kind, "noise, hill or stability")
      ->required()
      ->check(CLI::IsMember({"noise", "hill", "stability"}));
  bench_cmd->add_option("--trials", bench.trials, "Trials per cell");
  bench_cmd->add_option("--seed", bench.seed, "Seed");
  bench_cmd->add_option("--points", bench.points,
                        "Point counts (noise, hill) or MIN,MAX (stability)");
  bench_cmd->add_option("--sigmas", bench.sigmas, "Noise levels in pixels");
  bench_cmd->add_option("--steepness", bench.steepness, "Hill steepness values in degrees");
  bench_cmd->add_flag("--timing", bench.timing, "Fill the time_us_med column");

  TrajectoryArgs traj;
  auto* traj_cmd = app.add_subcommand("trajectory", "Estimate and concatenate consecutive pairs");
  traj_cmd->add_option("input", traj.input, "Pair-keyed correspondence CSV")->required();
  traj_cmd->add_option("--calib", traj.calib, "Calibration JSON for pixel input");
  traj_cmd->add_option("--gt", traj.gt, "Ground truth CSV (pair,alpha_deg,beta_deg)");
  traj_cmd->add_option("--cdf-out", traj.cdf_out, "Write the error CDF CSV here");
  traj_cmd->add_flag("--continuous-path", traj.continuous_path, "Fold rotations modulo 90 deg");
  traj_cmd->add_option("--threshold", traj.threshold, "RANSAC Sampson threshold");
  traj_cmd->add_option("--holdout", traj.holdout, "Holdout fraction");
  traj_cmd->add_option("--seed", traj.seed, "RANSAC seed");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic scene as CSV");
  synth_cmd->add_option("--points", synth.points, "Number of correspondences");
  synth_cmd->add_option("--sigma", synth.sigma, "Pixel noise");
  synth_cmd->add_option("--steepness", synth.steepness, "Hill steepness in degrees");
  synth_cmd->add_option("--outliers", synth.outliers, "Outlier fraction");
  synth_cmd->add_option("--seed", synth.seed, "Seed");
  synth_cmd->add_option("--rotation-deg", synth.rotation_deg, "Fixed rotation about Y");
  synth_cmd->add_flag("--pixels", synth.pixels, "Write pixel instead of normalized coordinates");
  synth_cmd->add_option("--calib-out", synth.calib_out, "Write the matching calibration JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return ReportError("parse_error", e.what(), kExitParse);
  }

  try {
    if (*solve_cmd) return RunSolve(solve);
    if (*bench_cmd) return RunBench(bench);
    if (*traj_cmd) return RunTrajectoryCmd(traj);
    if (*synth_cmd) return RunSynth(synth);
  } catch (const pp::Error& e) {
    return ReportError(pp::ToString(e.code()), e.what(), ExitCodeFor(e.code()));
  } catch (const std::exception& e) {
    return ReportError("internal", e.what(), kExitInternal);
  }
  return kExitInternal;
}
