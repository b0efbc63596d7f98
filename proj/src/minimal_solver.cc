#include "planar_pose/minimal_solver.h"

#include <cmath>

#include <Eigen/Dense>

#include "planar_pose/error.h"

namespace planar_pose {

namespace {

constexpr double kRankTol = 1e-12;

// Ratios (u, v) with a u^2 + 2 b u v + c v^2 = 0, at most two.
std::vector<Eigen::Vector2d> SolveHomogeneousQuadratic(double a, double b, double c) {
  std::vector<Eigen::Vector2d> out;
  const double disc = b * b - a * c;
  if (disc < 0.0) return out;
  const double root = std::sqrt(disc);
  const double q = -(b + std::copysign(root, b));
  // Work in the ratio whose leading coefficient is larger; the other
  // orientation covers the v = 0 (resp. u = 0) solution.
  if (std::abs(a) >= std::abs(c)) {
    if (a == 0.0) return out;  // a = b = c = 0 is caught by the caller.
    // a t^2 + 2 b t + c = 0, t = u / v.
    out.emplace_back(q / a, 1.0);
    if (disc > 0.0) out.emplace_back(c / q, 1.0);
  } else {
    // c s^2 + 2 b s + a = 0, s = v / u.
    out.emplace_back(1.0, q / c);
    if (disc > 0.0) out.emplace_back(1.0, a / q);
  }
  return out;
}

}  // namespace

std::vector<PlanarPose> SolveTwoPoint(const Correspondence& c1, const Correspondence& c2) {
  Eigen::Matrix<double, 4, 2> rows;
  rows.col(0) = DesignRow(c1);
  rows.col(1) = DesignRow(c2);
  const double scale = rows.norm();
  if (!(scale > 0.0)) {
    throw Error(ErrorCode::kDegenerateSample, "two-point sample has zero design rows");
  }

  const Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(rows);
  const Eigen::Matrix<double, 4, 2> r = qr.matrixQR().triangularView<Eigen::Upper>();
  if (std::abs(r(0, 0)) <= kRankTol * scale || std::abs(r(1, 1)) <= kRankTol * scale) {
    throw Error(ErrorCode::kDegenerateSample, "two-point sample is rank deficient");
  }
  const Eigen::Matrix4d q = qr.householderQ();
  const Eigen::Vector4d n1 = q.col(2);
  const Eigen::Vector4d n2 = q.col(3);

  const Eigen::Vector4d d(1.0, 1.0, -1.0, -1.0);
  const double a = n1.cwiseProduct(d).dot(n1);
  const double b = n1.cwiseProduct(d).dot(n2);
  const double c = n2.cwiseProduct(d).dot(n2);

  std::vector<PlanarPose> poses;
  for (const Eigen::Vector2d& uv : SolveHomogeneousQuadratic(a, b, c)) {
    const Eigen::Vector4d x = uv(0) * n1 + uv(1) * n2;
    const double len12 = std::hypot(x(0), x(1));
    const double len34 = std::hypot(x(2), x(3));
    if (!(len12 > 0.0) || !(len34 > 0.0)) continue;
    const double beta = std::atan2(x(1), x(0));
    const double sum = std::atan2(x(2), x(3));
    const PlanarPose pose(sum - beta, beta);
    poses.push_back(pose);
    poses.push_back(pose.flipped());
  }
  return poses;
}

}  // namespace planar_pose
