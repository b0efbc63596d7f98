#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "planar_pose/error.h"
#include "planar_pose/geometry.h"

namespace planar_pose {

struct RansacConfig {
  // Sampson distance threshold in squared normalized units (1e-6 is about
  // one pixel at f = 1000).
  double threshold = 1e-6;
  int max_iterations = 10000;
  double confidence = 0.999;
  uint64_t seed = 0;
  bool lo_enabled = true;
  // Share of the inliers held out when the optimal solver picks among its
  // candidates.
  double holdout_fraction = 0.05;
  int min_inliers = 3;
};

struct RansacResult {
  PlanarPose pose;
  std::vector<bool> inlier_mask;
  int num_inliers = 0;
  int iterations_run = 0;
  // Sum of Sampson distances of the inliers under the final pose.
  double final_cost = 0.0;
  // Degenerate samples and solver failures (skipped hypotheses).
  int solver_failures = 0;
  // Inlier count of the best minimal hypothesis before local optimization.
  int best_minimal_inliers = 0;

  bool operator==(const RansacResult&) const = default;
};

// Thrown when no hypothesis reaches min_inliers; carries the best-effort
// result for diagnostics.
class RobustFailure : public Error {
 public:
  RobustFailure(const std::string& message, RansacResult partial)
      : Error(ErrorCode::kRobustFailure, message), partial_(std::move(partial)) {}
  const RansacResult& partial() const { return partial_; }

 private:
  RansacResult partial_;
};

// Throws Error(kInvalidInput) for < 2 points or an invalid config.
void ValidateConfig(const RansacConfig& config);

// LO-RANSAC: two-point hypotheses scored by inlier count under the Sampson
// threshold; each new best is refit with the optimal solver on its inliers
// (if lo_enabled) and the better of the two is kept. The final model is
// polished with the optimal solver on the final inlier set. The iteration
// schedule depends only on the seed.
RansacResult RansacEstimate(std::span<const Correspondence> points, const RansacConfig& config);

// Candidate with the smallest sum of squared epipolar residuals on the
// holdout points; with no holdout points, the smallest in-sample cost.
PlanarPose SelectByHoldout(std::span<const std::pair<PlanarPose, double>> candidates,
                           std::span<const Correspondence> holdout);

// max(1, floor(fraction * n)) for fraction > 0, else 0.
int HoldoutSize(int n, double fraction);

}  // namespace planar_pose
