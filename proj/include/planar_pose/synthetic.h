#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "planar_pose/geometry.h"

namespace planar_pose {

struct PixelPair {
  double p1x = 0.0;
  double p1y = 0.0;
  double p2x = 0.0;
  double p2y = 0.0;
};

// Two pinhole cameras with shared intrinsics; the second one is moved
// `baseline` units forward along the first camera's optical axis and turned
// about Y by a uniform angle in [-max_rotation_deg, max_rotation_deg]. A
// non-zero hill_steepness_deg pitches the second camera about X and lifts it
// by baseline * tan(steepness), breaking the planar model.
struct SceneConfig {
  double focal = 1000.0;
  double cx = 500.0;
  double cy = 500.0;
  double image_width = 1000.0;
  double image_height = 1000.0;
  double baseline = 10.0;
  double max_rotation_deg = 5.0;
  int num_points = 100;
  double noise_sigma_px = 0.0;
  double hill_steepness_deg = 0.0;
  double outlier_fraction = 0.0;
  // Points are drawn uniformly from the unit ball centred on the optical
  // axis at this depth (in front of both cameras).
  double points_center_depth = 15.0;
  uint64_t seed = 0;
  // Overrides the random rotation when set.
  std::optional<double> fixed_rotation_deg;
};

struct SyntheticScene {
  std::vector<Correspondence> correspondences;
  std::vector<PixelPair> pixel_points;
  // Projections before noise and outlier replacement.
  std::vector<PixelPair> exact_pixel_points;
  std::vector<Eigen::Vector3d> points3d;
  std::vector<bool> inlier_labels;
  // Planar reading of the ground truth. Exact when there is no hill.
  PlanarPose gt_pose;
  // Full ground truth: X2 = gt_rotation * X1 - s * gt_translation.
  Eigen::Matrix3d gt_rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d gt_translation = Eigen::Vector3d::UnitZ();
};

// Throws Error(kInvalidInput) for an invalid config and
// Error(kGenerationFailure) when visible points cannot be found within the
// resampling budget.
SyntheticScene GenerateScene(const SceneConfig& config);

// Exact projection of camera-1 frame points for an arbitrary planar pose, in
// normalized coordinates. Points not in front of both cameras are skipped.
std::vector<Correspondence> ProjectPlanar(const PlanarPose& pose,
                                          const std::vector<Eigen::Vector3d>& points);

struct PoseError {
  double rotation_deg = 0.0;
  double translation_deg = 0.0;
};

// Rotation error is the angle of the relative rotation between the planar
// estimate and the full ground truth; translation error is the angle between
// the translation directions (sign included unless min_over_sign).
PoseError ScenePoseError(const SyntheticScene& scene, const PlanarPose& estimate,
                         bool min_over_sign = false);

enum class Method { kOptimal, kLinear };
const char* ToString(Method method);

struct BenchRow {
  std::string method;
  int n = 0;
  double sigma = 0.0;
  double steepness = 0.0;
  int trial_count = 0;
  double rot_err_med_deg = 0.0;
  double rot_err_mean_deg = 0.0;
  double trans_err_med_deg = 0.0;
  double trans_err_mean_deg = 0.0;
  // Median wall time per solve; only filled when timing is requested.
  std::optional<double> time_us_med;
  // Solver exceptions, counted as 180 degree errors.
  int failures = 0;
};

struct SweepOptions {
  int trials = 100;
  uint64_t seed = 0;
  bool timing = false;
  SceneConfig base;
};

// One row per (N, sigma, method); both methods see identical scenes.
std::vector<BenchRow> RunNoiseSweep(const std::vector<int>& point_counts,
                                    const std::vector<double>& sigmas,
                                    const SweepOptions& options);

// Noise fixed by options.base.noise_sigma_px (0.5 px by default in the CLI).
std::vector<BenchRow> RunHillSweep(const std::vector<double>& steepness_deg,
                                   const std::vector<int>& point_counts,
                                   const SweepOptions& options);

struct StabilityHistogram {
  double log10_min = -18.0;
  double bin_width = 0.5;
  // Errors below log10_min (including exact zeros) land in the first bin,
  // errors above the range in the last.
  std::vector<int> counts;
  int trials = 0;
  int failures = 0;
  double max_error_deg = 0.0;
  double median_error_deg = 0.0;

  double bin_lo(int i) const { return log10_min + i * bin_width; }
  double bin_hi(int i) const { return bin_lo(i + 1); }
};

// Noise-free scenes with N uniform in [min_points, max_points]; histogram of
// log10 rotation error (degrees) of the optimal solver.
StabilityHistogram RunStabilityTest(int trials, uint64_t seed, int min_points = 5,
                                    int max_points = 200, SceneConfig base = {});

double Median(std::vector<double> values);
double Mean(const std::vector<double>& values);

}  // namespace planar_pose
