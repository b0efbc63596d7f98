#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "planar_pose/geometry.h"
#include "planar_pose/io.h"
#include "planar_pose/ransac.h"

namespace planar_pose {

struct PairRecord {
  std::string id;
  std::vector<Correspondence> correspondences;
  std::optional<PlanarPose> ground_truth;
};

// Groups the rows of a pair-keyed correspondence CSV into records, in order
// of first appearance.
std::vector<PairRecord> ReadPairRecords(std::istream& in,
                                        const std::optional<CameraPairCalibration>& calib);

// Ground-truth CSV with header pair,alpha_deg,beta_deg. Throws Error(kParse).
std::map<std::string, PlanarPose> ReadGroundTruth(std::istream& in);

// One step of the dead-reckoned path.
struct PathState {
  double heading_deg = 0.0;
  double x = 0.0;
  double z = 0.0;
};

// Applies a relative planar pose with a unit-length step: the camera turns
// by alpha and its center moves by R_world * R(alpha)^T * t(beta).
PathState ComposeStep(const PathState& state, const PlanarPose& step);

struct TrajectoryOptions {
  RansacConfig ransac;
  bool continuous_path = false;
};

struct TrajectoryRow {
  std::string pair;
  bool ok = false;
  std::string status;  // "ok" or the error code
  PlanarPose pose;     // after continuous-path folding when enabled
  int inliers = 0;
  PathState state;     // path after this pair (unchanged on failure)
  std::optional<double> rot_err_deg;
  std::optional<double> trans_err_deg;
};

// Estimates every pair independently and concatenates the poses. Failed
// pairs become gap rows. With continuous_path the rotation angle is folded
// modulo 90 degrees before use.
std::vector<TrajectoryRow> RunTrajectory(std::span<const PairRecord> records,
                                         const TrajectoryOptions& options);

void WriteTrajectoryCsv(std::ostream& out, std::span<const TrajectoryRow> rows);

// Empirical CDF of the per-pair errors: kind,error_deg,cdf.
void WriteErrorCdfCsv(std::ostream& out, std::span<const TrajectoryRow> rows);

}  // namespace planar_pose
