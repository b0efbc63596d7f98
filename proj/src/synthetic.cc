#include "planar_pose/synthetic.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <numeric>

#include <Eigen/Geometry>

#include "planar_pose/error.h"
#include "planar_pose/optimal_solver.h"
#include "planar_pose/random.h"

namespace planar_pose {

namespace {

constexpr int kResampleBudgetPerPoint = 1000;

Eigen::Matrix3d RotationX(double rad) {
  return Eigen::AngleAxisd(rad, Eigen::Vector3d::UnitX()).toRotationMatrix();
}

Eigen::Vector3d SampleUnitBall(Rng& rng) {
  while (true) {
    const Eigen::Vector3d p(rng.Uniform(-1.0, 1.0), rng.Uniform(-1.0, 1.0),
                            rng.Uniform(-1.0, 1.0));
    if (p.squaredNorm() <= 1.0) return p;
  }
}

void Validate(const SceneConfig& c) {
  if (!(c.focal > 0.0)) throw Error(ErrorCode::kInvalidInput, "focal must be positive");
  if (c.num_points < 2) throw Error(ErrorCode::kInvalidInput, "num_points must be >= 2");
  if (c.noise_sigma_px < 0.0) throw Error(ErrorCode::kInvalidInput, "noise sigma must be >= 0");
  if (c.hill_steepness_deg < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "hill steepness must be >= 0");
  }
  if (c.outlier_fraction < 0.0 || c.outlier_fraction >= 1.0) {
    throw Error(ErrorCode::kInvalidInput, "outlier fraction must be in [0, 1)");
  }
}

uint64_t CellKey(int n, double sigma, double steepness) {
  uint64_t h = SplitMix64(static_cast<uint64_t>(n));
  h = SplitMix64(h ^ std::bit_cast<uint64_t>(sigma));
  return SplitMix64(h ^ std::bit_cast<uint64_t>(steepness));
}

struct CellResult {
  std::vector<double> rot, trans, time_us;
  int failures = 0;
};

void RunMethod(Method method, const SyntheticScene& scene, bool timing, CellResult* out) {
  PlanarPose pose;
  bool ok = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    pose = method == Method::kOptimal ? SolveOptimal(scene.correspondences).pose
                                      : SolveLinearPlanar(scene.correspondences);
  } catch (const Error&) {
    ok = false;
  }
  const auto stop = std::chrono::steady_clock::now();
  if (timing) {
    out->time_us.push_back(std::chrono::duration<double, std::micro>(stop - start).count());
  }
  if (!ok) {
    out->rot.push_back(180.0);
    out->trans.push_back(180.0);
    ++out->failures;
    return;
  }
  const PoseError err = ScenePoseError(scene, pose);
  out->rot.push_back(err.rotation_deg);
  out->trans.push_back(err.translation_deg);
}

BenchRow Summarize(Method method, int n, double sigma, double steepness, int trials,
                   const CellResult& r, bool timing) {
  BenchRow row;
  row.method = ToString(method);
  row.n = n;
  row.sigma = sigma;
  row.steepness = steepness;
  row.trial_count = trials;
  row.rot_err_med_deg = Median(r.rot);
  row.rot_err_mean_deg = Mean(r.rot);
  row.trans_err_med_deg = Median(r.trans);
  row.trans_err_mean_deg = Mean(r.trans);
  if (timing) row.time_us_med = Median(r.time_us);
  row.failures = r.failures;
  return row;
}

void RunCell(int n, double sigma, double steepness, const SweepOptions& options,
             std::vector<BenchRow>* rows) {
  CellResult optimal, linear;
  const uint64_t key = CellKey(n, sigma, steepness);
  for (int t = 0; t < options.trials; ++t) {
    SceneConfig cfg = options.base;
    cfg.num_points = n;
    cfg.noise_sigma_px = sigma;
    cfg.hill_steepness_deg = steepness;
    cfg.seed = Rng::Stream(options.seed ^ key, static_cast<uint64_t>(t)).NextU64();
    const SyntheticScene scene = GenerateScene(cfg);
    RunMethod(Method::kOptimal, scene, options.timing, &optimal);
    RunMethod(Method::kLinear, scene, options.timing, &linear);
  }
  rows->push_back(
      Summarize(Method::kOptimal, n, sigma, steepness, options.trials, optimal, options.timing));
  rows->push_back(
      Summarize(Method::kLinear, n, sigma, steepness, options.trials, linear, options.timing));
}

}  // namespace

const char* ToString(Method method) {
  return method == Method::kOptimal ? "optimal" : "linear";
}

SyntheticScene GenerateScene(const SceneConfig& config) {
  Validate(config);
  Rng rng(config.seed);

  const double alpha = config.fixed_rotation_deg
                           ? Deg2Rad(*config.fixed_rotation_deg)
                           : Deg2Rad(rng.Uniform(-config.max_rotation_deg, config.max_rotation_deg));
  const double pitch = Deg2Rad(config.hill_steepness_deg);
  const Eigen::Matrix3d rotation = RotationX(pitch) * PlanarPose(alpha, 0.0).rotation();
  const Eigen::Vector3d center2(0.0, config.baseline * std::tan(pitch), config.baseline);

  SyntheticScene scene;
  scene.gt_rotation = rotation;
  scene.gt_translation = (rotation * center2).normalized();
  scene.gt_pose = PlanarPose(alpha, std::atan2(scene.gt_translation.z(), scene.gt_translation.x()));

  const Eigen::Vector3d ball_center(0.0, 0.0, config.points_center_depth);
  auto to_pixel = [&](const Eigen::Vector3d& x, double* u, double* v) {
    *u = config.focal * x.x() / x.z() + config.cx;
    *v = config.focal * x.y() / x.z() + config.cy;
    return x.z() > 0.0 && *u >= 0.0 && *u <= config.image_width && *v >= 0.0 &&
           *v <= config.image_height;
  };

  const long budget = static_cast<long>(kResampleBudgetPerPoint) * config.num_points;
  long attempts = 0;
  while (static_cast<int>(scene.points3d.size()) < config.num_points) {
    if (++attempts > budget) {
      throw Error(ErrorCode::kGenerationFailure,
                  "could not place enough points visible in both cameras");
    }
    const Eigen::Vector3d x1 = ball_center + SampleUnitBall(rng);
    const Eigen::Vector3d x2 = rotation * (x1 - center2);
    PixelPair px;
    if (!to_pixel(x1, &px.p1x, &px.p1y) || !to_pixel(x2, &px.p2x, &px.p2y)) continue;
    scene.points3d.push_back(x1);
    scene.exact_pixel_points.push_back(px);
  }

  const int n = config.num_points;
  scene.pixel_points = scene.exact_pixel_points;
  if (config.noise_sigma_px > 0.0) {
    for (auto& px : scene.pixel_points) {
      px.p1x += config.noise_sigma_px * rng.Normal();
      px.p1y += config.noise_sigma_px * rng.Normal();
      px.p2x += config.noise_sigma_px * rng.Normal();
      px.p2y += config.noise_sigma_px * rng.Normal();
    }
  }

  scene.inlier_labels.assign(n, true);
  const int outliers = static_cast<int>(std::lround(config.outlier_fraction * n));
  if (outliers > 0) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates.
    for (int i = 0; i < outliers; ++i) {
      const int j = i + static_cast<int>(rng.UniformIndex(static_cast<uint64_t>(n - i)));
      std::swap(order[i], order[j]);
      auto& px = scene.pixel_points[order[i]];
      px.p2x = rng.Uniform(0.0, config.image_width);
      px.p2y = rng.Uniform(0.0, config.image_height);
      scene.inlier_labels[order[i]] = false;
    }
  }

  scene.correspondences.reserve(n);
  for (const auto& px : scene.pixel_points) {
    scene.correspondences.push_back({(px.p1x - config.cx) / config.focal,
                                     (px.p1y - config.cy) / config.focal,
                                     (px.p2x - config.cx) / config.focal,
                                     (px.p2y - config.cy) / config.focal});
  }
  return scene;
}

std::vector<Correspondence> ProjectPlanar(const PlanarPose& pose,
                                          const std::vector<Eigen::Vector3d>& points) {
  const Eigen::Matrix3d r = pose.rotation();
  const Eigen::Vector3d t = pose.translation();
  std::vector<Correspondence> out;
  out.reserve(points.size());
  for (const auto& x1 : points) {
    const Eigen::Vector3d x2 = r * x1 - t;
    if (x1.z() <= 0.0 || x2.z() <= 0.0) continue;
    out.push_back({x1.x() / x1.z(), x1.y() / x1.z(), x2.x() / x2.z(), x2.y() / x2.z()});
  }
  return out;
}

PoseError ScenePoseError(const SyntheticScene& scene, const PlanarPose& estimate,
                         bool min_over_sign) {
  PoseError err;
  err.rotation_deg = RotationMatrixAngleDeg(estimate.rotation(), scene.gt_rotation);
  err.translation_deg = DirectionAngleDeg(estimate.translation(), scene.gt_translation);
  if (min_over_sign) err.translation_deg = std::min(err.translation_deg, 180.0 - err.translation_deg);
  return err;
}

std::vector<BenchRow> RunNoiseSweep(const std::vector<int>& point_counts,
                                    const std::vector<double>& sigmas,
                                    const SweepOptions& options) {
  std::vector<BenchRow> rows;
  for (double sigma : sigmas) {
    for (int n : point_counts) RunCell(n, sigma, options.base.hill_steepness_deg, options, &rows);
  }
  return rows;
}

std::vector<BenchRow> RunHillSweep(const std::vector<double>& steepness_deg,
                                   const std::vector<int>& point_counts,
                                   const SweepOptions& options) {
  std::vector<BenchRow> rows;
  for (double steep : steepness_deg) {
    for (int n : point_counts) RunCell(n, options.base.noise_sigma_px, steep, options, &rows);
  }
  return rows;
}

StabilityHistogram RunStabilityTest(int trials, uint64_t seed, int min_points, int max_points,
                                    SceneConfig base) {
  StabilityHistogram hist;
  hist.counts.assign(40, 0);
  hist.trials = trials;
  std::vector<double> errors;
  errors.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::Stream(seed, static_cast<uint64_t>(t));
    SceneConfig cfg = base;
    cfg.noise_sigma_px = 0.0;
    cfg.hill_steepness_deg = 0.0;
    cfg.outlier_fraction = 0.0;
    cfg.num_points = rng.UniformInt(min_points, max_points);
    cfg.seed = rng.NextU64();
    const SyntheticScene scene = GenerateScene(cfg);
    double err = 180.0;
    try {
      const PlanarPose pose = SolveOptimal(scene.correspondences).pose;
      err = RotationAngularError(pose.alpha, scene.gt_pose.alpha);
    } catch (const Error&) {
      ++hist.failures;
    }
    errors.push_back(err);
    const int bins = static_cast<int>(hist.counts.size());
    int bin = 0;
    if (err > 0.0) {
      bin = static_cast<int>(std::floor((std::log10(err) - hist.log10_min) / hist.bin_width));
    }
    ++hist.counts[std::clamp(bin, 0, bins - 1)];
  }
  hist.max_error_deg = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  hist.median_error_deg = Median(errors);
  return hist;
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  if (values.size() % 2 == 1) return values[mid];
  const double upper = values[mid];
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

double Mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace planar_pose
