#include "planar_pose/ransac.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "planar_pose/minimal_solver.h"
#include "planar_pose/optimal_solver.h"
#include "planar_pose/random.h"

namespace planar_pose {

namespace {

constexpr int kSampleSize = 2;

struct Scored {
  PlanarPose pose;
  std::vector<bool> mask;
  int count = -1;
};

Scored Score(const PlanarPose& pose, std::span<const Correspondence> points, double threshold) {
  Scored s;
  s.pose = pose;
  s.mask.assign(points.size(), false);
  s.count = 0;
  const EssentialMatrix e = EssentialFromPose(pose);
  for (size_t i = 0; i < points.size(); ++i) {
    if (SampsonDistance(e, points[i]) <= threshold) {
      s.mask[i] = true;
      ++s.count;
    }
  }
  return s;
}

std::vector<Correspondence> Select(std::span<const Correspondence> points,
                                   const std::vector<bool>& mask) {
  std::vector<Correspondence> out;
  for (size_t i = 0; i < points.size(); ++i) {
    if (mask[i]) out.push_back(points[i]);
  }
  return out;
}

int RequiredIterations(int inliers, int n, double confidence) {
  const double w = static_cast<double>(inliers) / n;
  const double p_good = std::pow(w, kSampleSize);
  if (p_good >= 1.0) return 0;
  if (p_good <= 0.0) return std::numeric_limits<int>::max();
  const double k = std::log(1.0 - confidence) / std::log(1.0 - p_good);
  if (!(k < static_cast<double>(std::numeric_limits<int>::max()))) {
    return std::numeric_limits<int>::max();
  }
  return static_cast<int>(std::ceil(k));
}

// Refits on the inliers of `current` with the optimal solver and keeps the
// refit only if it does not lose inliers.
Scored Refit(const Scored& current, std::span<const Correspondence> points,
             const RansacConfig& config, int* failures) {
  if (current.count < 3) return current;
  const std::vector<Correspondence> inliers = Select(points, current.mask);
  OptimalSolverOptions options;
  options.holdout_fraction = config.holdout_fraction;
  try {
    Scored refit = Score(SolveOptimal(inliers, options).pose, points, config.threshold);
    if (refit.count >= current.count) return refit;
  } catch (const Error&) {
    ++*failures;
  }
  return current;
}

}  // namespace

void ValidateConfig(const RansacConfig& config) {
  if (!(config.threshold > 0.0)) throw Error(ErrorCode::kInvalidInput, "threshold must be > 0");
  if (config.max_iterations <= 0) {
    throw Error(ErrorCode::kInvalidInput, "max_iterations must be positive");
  }
  if (!(config.confidence > 0.0 && config.confidence < 1.0)) {
    throw Error(ErrorCode::kInvalidInput, "confidence must be in (0, 1)");
  }
  if (!(config.holdout_fraction >= 0.0 && config.holdout_fraction <= 0.5)) {
    throw Error(ErrorCode::kInvalidInput, "holdout fraction must be in [0, 0.5]");
  }
  if (config.min_inliers <= 0) throw Error(ErrorCode::kInvalidInput, "min_inliers must be positive");
}

int HoldoutSize(int n, double fraction) {
  return static_cast<int>(HoldoutIndices(n, fraction).size());
}

PlanarPose SelectByHoldout(std::span<const std::pair<PlanarPose, double>> candidates,
                           std::span<const Correspondence> holdout) {
  if (candidates.empty()) throw Error(ErrorCode::kInvalidInput, "SelectByHoldout: no candidates");
  size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const double score =
        holdout.empty() ? candidates[i].second : AlgebraicCost(candidates[i].first, holdout);
    if (score < best_score) {
      best = i;
      best_score = score;
    }
  }
  return candidates[best].first;
}

RansacResult RansacEstimate(std::span<const Correspondence> points, const RansacConfig& config) {
  ValidateConfig(config);
  if (points.size() < 2) throw Error(ErrorCode::kInvalidInput, "at least 2 correspondences required");

  const int n = static_cast<int>(points.size());
  Rng rng(config.seed);
  RansacResult result;
  Scored best;
  int limit = config.max_iterations;

  while (result.iterations_run < limit) {
    ++result.iterations_run;
    const int i = static_cast<int>(rng.UniformIndex(n));
    int j = static_cast<int>(rng.UniformIndex(n - 1));
    if (j >= i) ++j;

    std::vector<PlanarPose> poses;
    try {
      poses = SolveTwoPoint(points[i], points[j]);
    } catch (const Error&) {
      ++result.solver_failures;
      continue;
    }
    if (poses.empty()) {
      ++result.solver_failures;
      continue;
    }

    // Poses come in +/-t pairs that share the same essential matrix up to sign.
    Scored hypothesis;
    for (size_t k = 0; k < poses.size(); k += 2) {
      Scored s = Score(poses[k], points, config.threshold);
      if (s.count > hypothesis.count) hypothesis = std::move(s);
    }
    result.best_minimal_inliers = std::max(result.best_minimal_inliers, hypothesis.count);
    if (hypothesis.count <= best.count) continue;

    best = config.lo_enabled ? Refit(hypothesis, points, config, &result.solver_failures)
                             : std::move(hypothesis);
    limit = std::min(config.max_iterations,
                     std::max(result.iterations_run,
                              RequiredIterations(best.count, n, config.confidence)));
  }

  if (best.count >= 3) best = Refit(best, points, config, &result.solver_failures);

  result.num_inliers = std::max(best.count, 0);
  if (best.count < 0) best.mask.assign(points.size(), false);
  const std::vector<Correspondence> inliers = Select(points, best.mask);
  if (!inliers.empty()) {
    const std::array<PlanarPose, 2> signs = {best.pose, best.pose.flipped()};
    best.pose = CheiralitySelect(signs, inliers);
  }
  result.pose = best.pose;
  result.inlier_mask = best.mask;
  const EssentialMatrix e = EssentialFromPose(best.pose);
  for (const auto& c : inliers) result.final_cost += SampsonDistance(e, c);

  if (result.num_inliers < config.min_inliers) {
    throw RobustFailure("no hypothesis reached the minimum inlier count", result);
  }
  return result;
}

}  // namespace planar_pose
