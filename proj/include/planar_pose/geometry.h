#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace planar_pose {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double Deg2Rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double Rad2Deg(double rad) { return rad * 180.0 / kPi; }

// Wraps an angle into (-pi, pi].
double WrapAngle(double rad);

// One normalized point pair. The homogeneous third coordinate is 1.
struct Correspondence {
  double q1x = 0.0;
  double q1y = 0.0;
  double q2x = 0.0;
  double q2y = 0.0;

  Eigen::Vector3d q1() const { return {q1x, q1y, 1.0}; }
  Eigen::Vector3d q2() const { return {q2x, q2y, 1.0}; }
  bool finite() const;
};

// Relative pose of two cameras moving in their common XZ plane.
//
// alpha rotates about the Y axis, beta is the direction of the unit
// translation t = [cos beta, 0, sin beta]. A point moves between camera
// frames as X2 = R(alpha) * X1 - s * t with s > 0, i.e. t is the position of
// the second camera center expressed in the second camera's axes. Pure
// forward motion along the optical axis is beta = pi/2.
struct PlanarPose {
  double alpha = 0.0;
  double beta = 0.0;

  PlanarPose() = default;
  PlanarPose(double alpha_rad, double beta_rad)
      : alpha(WrapAngle(alpha_rad)), beta(WrapAngle(beta_rad)) {}

  Eigen::Matrix3d rotation() const;
  Eigen::Vector3d translation() const;
  // Same rotation, opposite translation.
  PlanarPose flipped() const;

  bool operator==(const PlanarPose&) const = default;
};

// Essential matrix with the planar zero pattern, entries e1..e9 row-major.
class EssentialMatrix {
 public:
  EssentialMatrix() { e_.fill(0.0); }
  // Takes the four free entries; the other five are zero by construction.
  EssentialMatrix(double e2, double e4, double e6, double e8);

  // 1-based, as in e1..e9.
  double e(int i) const { return e_[i - 1]; }
  const std::array<double, 9>& entries() const { return e_; }
  Eigen::Matrix3d matrix() const;
  EssentialMatrix operator-() const { return {-e(2), -e(4), -e(6), -e(8)}; }

 private:
  std::array<double, 9> e_;
};

// e2 = -sin b, e4 = sin(a+b), e6 = -cos(a+b), e8 = cos b.
EssentialMatrix EssentialFromPose(const PlanarPose& pose);

// The two poses compatible with +/-E: beta and beta + pi, same alpha.
// Throws Error(kInvalidInput) for the zero matrix.
std::pair<PlanarPose, PlanarPose> PoseFromEssential(const EssentialMatrix& e);

// Row of the homogeneous system A x = 0 for one correspondence, where
// x = [cos b, sin b, sin(a+b), cos(a+b)]:
//   [q1y, -q2x * q1y, q2y * q1x, -q2y].
Eigen::Vector4d DesignRow(const Correspondence& c);

// Unit-circle parameter vector of a pose, matching DesignRow.
Eigen::Vector4d ParameterVector(const PlanarPose& pose);

// q2^T E q1.
double EpipolarResidual(const EssentialMatrix& e, const Correspondence& c);

// (q2^T E q1)^2 / (|(E q1)_{1,2}|^2 + |(E^T q2)_{1,2}|^2). Returns +inf for a
// zero denominator with non-zero residual and 0 when both vanish.
double SampsonDistance(const EssentialMatrix& e, const Correspondence& c);

// Least-squares cost |gamma a1 + delta a2 + epsilon a3 + a4|^2 with the
// larger of sin(a+b), cos(a+b) scaled to one: the unit-normalized sum of
// squared residuals divided by max(sin^2(a+b), cos^2(a+b)). This is the
// smaller of the two fixed-coordinate costs, so it is comparable across
// branches and its global minimum is a root of one of them.
double AlgebraicCost(const PlanarPose& pose, std::span<const Correspondence> points);

// Sum of squared residuals with both parameter sub-vectors on the unit circle.
double UnitAlgebraicCost(const PlanarPose& pose, std::span<const Correspondence> points);

// Midpoint triangulation in the first camera frame. Returns false when the
// rays are (near) parallel.
bool TriangulateMidpoint(const PlanarPose& pose, const Correspondence& c,
                         Eigen::Vector3d* point);

// Number of correspondences whose midpoint triangulation lies in front of
// both cameras.
int CountPositiveDepth(const PlanarPose& pose, std::span<const Correspondence> points);

// Picks the candidate with the most points in front of both cameras, ties
// broken by lower mean Sampson distance (then by first occurrence).
PlanarPose CheiralitySelect(std::span<const PlanarPose> candidates,
                            std::span<const Correspondence> points);

// Continuous-path folding of a degree angle: the sign-preserving remainder
// modulo 90 (110 -> 20, -110 -> -20).
double FoldContinuousPathDeg(double deg);

// |alpha_est - alpha_gt| wrapped, in degrees within [0, 180]. With
// continuous_path the estimate (in degrees) is folded first.
double RotationAngularError(double alpha_est, double alpha_gt, bool continuous_path = false);

// Angle between the planar translation directions, in degrees. With
// min_over_sign the +/-t ambiguity is ignored (result within [0, 90]).
double TranslationAngularError(double beta_est, double beta_gt, bool min_over_sign = false);

// Angle of the relative rotation Ra^T Rb, in degrees.
double RotationMatrixAngleDeg(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb);

// Angle between two (not necessarily unit) 3D directions, in degrees.
double DirectionAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b);

}  // namespace planar_pose
