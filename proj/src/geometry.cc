#include "planar_pose/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "planar_pose/error.h"

namespace planar_pose {

double WrapAngle(double rad) {
  double r = std::remainder(rad, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

bool Correspondence::finite() const {
  return std::isfinite(q1x) && std::isfinite(q1y) && std::isfinite(q2x) &&
         std::isfinite(q2y);
}

Eigen::Matrix3d PlanarPose::rotation() const {
  const double c = std::cos(alpha);
  const double s = std::sin(alpha);
  Eigen::Matrix3d r;
  r << c, 0, s,
       0, 1, 0,
      -s, 0, c;
  return r;
}

Eigen::Vector3d PlanarPose::translation() const {
  return {std::cos(beta), 0.0, std::sin(beta)};
}

PlanarPose PlanarPose::flipped() const { return PlanarPose(alpha, beta + kPi); }

EssentialMatrix::EssentialMatrix(double e2, double e4, double e6, double e8) {
  e_.fill(0.0);
  e_[1] = e2;
  e_[3] = e4;
  e_[5] = e6;
  e_[7] = e8;
}

Eigen::Matrix3d EssentialMatrix::matrix() const {
  Eigen::Matrix3d m;
  m << e_[0], e_[1], e_[2],
       e_[3], e_[4], e_[5],
       e_[6], e_[7], e_[8];
  return m;
}

EssentialMatrix EssentialFromPose(const PlanarPose& pose) {
  const double sum = pose.alpha + pose.beta;
  return {-std::sin(pose.beta), std::sin(sum), -std::cos(sum), std::cos(pose.beta)};
}

std::pair<PlanarPose, PlanarPose> PoseFromEssential(const EssentialMatrix& e) {
  if (e.e(2) == 0.0 && e.e(4) == 0.0 && e.e(6) == 0.0 && e.e(8) == 0.0) {
    throw Error(ErrorCode::kInvalidInput, "PoseFromEssential: zero matrix");
  }
  const double beta = std::atan2(-e.e(2), e.e(8));
  const double sum = std::atan2(e.e(4), -e.e(6));
  const PlanarPose first(sum - beta, beta);
  return {first, first.flipped()};
}

Eigen::Vector4d DesignRow(const Correspondence& c) {
  return {c.q1y, -c.q2x * c.q1y, c.q2y * c.q1x, -c.q2y};
}

Eigen::Vector4d ParameterVector(const PlanarPose& pose) {
  const double sum = pose.alpha + pose.beta;
  return {std::cos(pose.beta), std::sin(pose.beta), std::sin(sum), std::cos(sum)};
}

double EpipolarResidual(const EssentialMatrix& e, const Correspondence& c) {
  // Only the four planar entries contribute.
  return c.q2x * e.e(2) * c.q1y + c.q2y * (e.e(4) * c.q1x + e.e(6)) + e.e(8) * c.q1y;
}

double SampsonDistance(const EssentialMatrix& e, const Correspondence& c) {
  const double r = EpipolarResidual(e, c);
  // E q1 = [e2 q1y, e4 q1x + e6, e8 q1y], E^T q2 = [e4 q2y, e2 q2x + e8, e6 q2y].
  const double eq1_x = e.e(2) * c.q1y;
  const double eq1_y = e.e(4) * c.q1x + e.e(6);
  const double etq2_x = e.e(4) * c.q2y;
  const double etq2_y = e.e(2) * c.q2x + e.e(8);
  const double denom = eq1_x * eq1_x + eq1_y * eq1_y + etq2_x * etq2_x + etq2_y * etq2_y;
  if (denom == 0.0) {
    return r == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return r * r / denom;
}

double UnitAlgebraicCost(const PlanarPose& pose, std::span<const Correspondence> points) {
  const Eigen::Vector4d x = ParameterVector(pose);
  double cost = 0.0;
  for (const auto& c : points) {
    const double r = DesignRow(c).dot(x);
    cost += r * r;
  }
  return cost;
}

double AlgebraicCost(const PlanarPose& pose, std::span<const Correspondence> points) {
  const double sum = pose.alpha + pose.beta;
  const double fixed = std::max(std::abs(std::sin(sum)), std::abs(std::cos(sum)));
  return UnitAlgebraicCost(pose, points) / (fixed * fixed);
}

bool TriangulateMidpoint(const PlanarPose& pose, const Correspondence& c,
                         Eigen::Vector3d* point) {
  const Eigen::Matrix3d rt = pose.rotation().transpose();
  const Eigen::Vector3d center2 = rt * pose.translation();
  const Eigen::Vector3d d1 = c.q1();
  const Eigen::Vector3d d2 = rt * c.q2();

  // Minimize |s1 d1 - (center2 + s2 d2)|^2 over (s1, s2).
  const double a = d1.dot(d1);
  const double b = d1.dot(d2);
  const double cc = d2.dot(d2);
  const double det = a * cc - b * b;
  if (!(det > 1e-14 * a * cc)) return false;
  const double p = d1.dot(center2);
  const double q = d2.dot(center2);
  const double s1 = (cc * p - b * q) / det;
  const double s2 = (b * p - a * q) / det;
  *point = 0.5 * (s1 * d1 + center2 + s2 * d2);
  return point->allFinite();
}

int CountPositiveDepth(const PlanarPose& pose, std::span<const Correspondence> points) {
  const Eigen::Matrix3d r = pose.rotation();
  const Eigen::Vector3d t = pose.translation();
  int count = 0;
  for (const auto& c : points) {
    Eigen::Vector3d x;
    if (!TriangulateMidpoint(pose, c, &x)) continue;
    const double depth2 = (r * x - t).z();
    if (x.z() > 0.0 && depth2 > 0.0) ++count;
  }
  return count;
}

PlanarPose CheiralitySelect(std::span<const PlanarPose> candidates,
                            std::span<const Correspondence> points) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kInvalidInput, "CheiralitySelect: no candidates");
  }
  size_t best = 0;
  int best_count = -1;
  double best_sampson = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates.size(); ++i) {
    const int count = CountPositiveDepth(candidates[i], points);
    if (count < best_count) continue;
    double sampson = 0.0;
    const EssentialMatrix e = EssentialFromPose(candidates[i]);
    for (const auto& c : points) sampson += SampsonDistance(e, c);
    if (!points.empty()) sampson /= static_cast<double>(points.size());
    if (count > best_count || sampson < best_sampson) {
      best = i;
      best_count = count;
      best_sampson = sampson;
    }
  }
  return candidates[best];
}

double FoldContinuousPathDeg(double deg) { return std::fmod(deg, 90.0); }

double RotationAngularError(double alpha_est, double alpha_gt, bool continuous_path) {
  double est = alpha_est;
  if (continuous_path) est = Deg2Rad(FoldContinuousPathDeg(Rad2Deg(WrapAngle(alpha_est))));
  return std::abs(Rad2Deg(WrapAngle(est - alpha_gt)));
}

double TranslationAngularError(double beta_est, double beta_gt, bool min_over_sign) {
  const double err = std::abs(Rad2Deg(WrapAngle(beta_est - beta_gt)));
  return min_over_sign ? std::min(err, 180.0 - err) : err;
}

double RotationMatrixAngleDeg(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb) {
  const Eigen::Matrix3d rel = ra.transpose() * rb;
  const double c = std::clamp(0.5 * (rel.trace() - 1.0), -1.0, 1.0);
  // acos loses precision near identity; use the skew part there.
  const Eigen::Vector3d axis(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0),
                             rel(1, 0) - rel(0, 1));
  return Rad2Deg(std::atan2(0.5 * axis.norm(), c));
}

double DirectionAngleDeg(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return Rad2Deg(std::atan2(a.cross(b).norm(), a.dot(b)));
}

}  // namespace planar_pose
