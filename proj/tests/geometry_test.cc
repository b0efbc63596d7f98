#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "planar_pose/error.h"
#include "planar_pose/geometry.h"
#include "planar_pose/random.h"
#include "planar_pose/synthetic.h"

namespace pp = planar_pose;

namespace {

void ExpectMatrixNear(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b, double tol) {
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), tol) << a << "\nvs\n" << b;
}

std::vector<Eigen::Vector3d> RandomPoints(pp::Rng& rng, int n) {
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < n; ++i) {
    pts.emplace_back(rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(8, 20));
  }
  return pts;
}

pp::Correspondence RandomCorrespondence(pp::Rng& rng) {
  return {rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1)};
}

TEST(GeometryTest, WrapAngleRange) {
  EXPECT_DOUBLE_EQ(pp::WrapAngle(pp::kPi), pp::kPi);
  EXPECT_DOUBLE_EQ(pp::WrapAngle(-pp::kPi), pp::kPi);
  EXPECT_NEAR(pp::WrapAngle(3 * pp::kPi / 2), -pp::kPi / 2, 1e-15);
}

TEST(GeometryTest, EssentialSideways) {
  Eigen::Matrix3d expect;
  expect << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  ExpectMatrixNear(pp::EssentialFromPose({0, 0}).matrix(), expect, 1e-15);
}

TEST(GeometryTest, EssentialForward) {
  Eigen::Matrix3d expect;
  expect << 0, -1, 0, 1, 0, 0, 0, 0, 0;
  ExpectMatrixNear(pp::EssentialFromPose({0, pp::kPi / 2}).matrix(), expect, 1e-15);
}

TEST(GeometryTest, EssentialGenericEntries) {
  const pp::EssentialMatrix e = pp::EssentialFromPose({0.1, 0.7});
  EXPECT_DOUBLE_EQ(e.e(4), std::sin(0.8));
  EXPECT_DOUBLE_EQ(e.e(6), -std::cos(0.8));
  EXPECT_DOUBLE_EQ(e.e(2), -std::sin(0.7));
  EXPECT_DOUBLE_EQ(e.e(8), std::cos(0.7));
  for (int i : {1, 3, 5, 7, 9}) EXPECT_EQ(e.e(i), 0.0);
}

TEST(GeometryTest, EssentialMatchesDenseConstruction) {
  pp::Rng rng(1);
  for (int t = 0; t < 200; ++t) {
    const double a = rng.Uniform(-pp::kPi, pp::kPi), b = rng.Uniform(-pp::kPi, pp::kPi);
    const pp::EssentialMatrix e = pp::EssentialFromPose({a, b});
    ExpectMatrixNear(e.matrix(), oracle::DenseEssential(a, b), 1e-14);
    EXPECT_NEAR(e.e(2) * e.e(2) + e.e(8) * e.e(8), e.e(4) * e.e(4) + e.e(6) * e.e(6), 1e-14);
  }
}

TEST(GeometryTest, PoseFromEssentialForward) {
  const auto [p, q] = pp::PoseFromEssential(pp::EssentialMatrix(-1, 1, 0, 0));
  EXPECT_NEAR(p.alpha, 0, 1e-15);
  EXPECT_NEAR(p.beta, pp::kPi / 2, 1e-15);
  EXPECT_NEAR(q.alpha, 0, 1e-15);
  EXPECT_NEAR(q.beta, -pp::kPi / 2, 1e-15);
}

TEST(GeometryTest, PoseFromZeroEssentialThrows) {
  try {
    pp::PoseFromEssential(pp::EssentialMatrix());
    FAIL();
  } catch (const pp::Error& e) {
    EXPECT_EQ(e.code(), pp::ErrorCode::kInvalidInput);
  }
}

bool SamePose(const pp::PlanarPose& a, const pp::PlanarPose& b, double tol) {
  return std::abs(pp::WrapAngle(a.alpha - b.alpha)) < tol &&
         std::abs(pp::WrapAngle(a.beta - b.beta)) < tol;
}

TEST(GeometryTest, PoseRoundTrip) {
  pp::Rng rng(2);
  for (int t = 0; t < 1000; ++t) {
    const pp::PlanarPose p(rng.Uniform(-pp::kPi, pp::kPi), rng.Uniform(-pp::kPi, pp::kPi));
    const auto [c1, c2] = pp::PoseFromEssential(pp::EssentialFromPose(p));
    EXPECT_TRUE(SamePose(c1, p, 1e-12) || SamePose(c2, p, 1e-12));

    // -E yields the same pair as a set.
    const auto [n1, n2] = pp::PoseFromEssential(-pp::EssentialFromPose(p));
    EXPECT_TRUE((SamePose(n1, c1, 1e-12) && SamePose(n2, c2, 1e-12)) ||
                (SamePose(n1, c2, 1e-12) && SamePose(n2, c1, 1e-12)));
  }
}

TEST(GeometryTest, ResidualExamples) {
  const pp::EssentialMatrix fwd = pp::EssentialFromPose({0, pp::kPi / 2});
  EXPECT_NEAR(pp::EpipolarResidual(fwd, {1, 0, 0, 1}), 1.0, 1e-15);
  EXPECT_EQ(pp::EpipolarResidual(pp::EssentialFromPose({0.3, 1.1}), {0, 0, 0, 0}), 0.0);

  // Same ray under pure forward motion.
  const Eigen::Vector3d x1(0.2 * 12, 0.3 * 12, 12);
  const auto c = pp::ProjectPlanar({0, pp::kPi / 2}, {x1});
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].q1x, 0.2, 1e-15);
  EXPECT_NEAR(pp::EpipolarResidual(fwd, c[0]), 0.0, 1e-12);
}

TEST(GeometryTest, ExactProjectionsHaveZeroResidual) {
  pp::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const pp::PlanarPose pose(pp::Deg2Rad(rng.Uniform(-30, 30)), rng.Uniform(-pp::kPi, pp::kPi));
    const pp::EssentialMatrix e = pp::EssentialFromPose(pose);
    for (const auto& c : pp::ProjectPlanar(pose, RandomPoints(rng, 10))) {
      EXPECT_LT(std::abs(pp::EpipolarResidual(e, c)), 1e-10);
    }
  }
}

TEST(GeometryTest, ResidualIsLinearInParameterVector) {
  pp::Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    const pp::PlanarPose pose(rng.Uniform(-pp::kPi, pp::kPi), rng.Uniform(-pp::kPi, pp::kPi));
    const pp::Correspondence c = RandomCorrespondence(rng);
    const double dense = oracle::H(c.q2x, c.q2y)
                             .dot(oracle::DenseEssential(pose.alpha, pose.beta) *
                                  oracle::H(c.q1x, c.q1y));
    const double linear = pp::DesignRow(c).dot(pp::ParameterVector(pose));
    EXPECT_NEAR(pp::EpipolarResidual(pp::EssentialFromPose(pose), c), dense, 1e-13);
    EXPECT_NEAR(linear, dense, 1e-13);
  }
}

TEST(GeometryTest, DesignRowLayout) {
  const Eigen::Vector4d row = pp::DesignRow({0.1, 0.2, 0.3, 0.4});
  EXPECT_NEAR(row(0), 0.2, 1e-15);
  EXPECT_NEAR(row(1), -0.06, 1e-15);
  EXPECT_NEAR(row(2), 0.04, 1e-15);
  EXPECT_NEAR(row(3), -0.4, 1e-15);
}

TEST(GeometryTest, SampsonMatchesDenseOracle) {
  pp::Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    const pp::PlanarPose pose(rng.Uniform(-pp::kPi, pp::kPi), rng.Uniform(-pp::kPi, pp::kPi));
    const pp::Correspondence c = RandomCorrespondence(rng);
    const double expect = oracle::DenseSampson(oracle::DenseEssential(pose.alpha, pose.beta), c);
    const double got = pp::SampsonDistance(pp::EssentialFromPose(pose), c);
    EXPECT_GE(got, 0.0);
    EXPECT_NEAR(got, expect, 1e-12 * std::max(1.0, expect));
  }
}

TEST(GeometryTest, SampsonEdgeCases) {
  const pp::EssentialMatrix fwd = pp::EssentialFromPose({0, pp::kPi / 2});
  // E q1 = (-q1y, q1x, 0), E^T q2 = (q2y, -q2x, 0).
  const pp::Correspondence c{1, 0, 0, 1};
  EXPECT_NEAR(pp::SampsonDistance(fwd, c), 1.0 / 2.0, 1e-15);
  EXPECT_EQ(pp::SampsonDistance(fwd, {0, 0, 0, 0}), 0.0);
  EXPECT_EQ(pp::SampsonDistance(pp::EssentialMatrix(), {1, 1, 1, 1}), 0.0);
  // Perfect correspondence.
  const pp::PlanarPose pose(0.05, 1.2);
  const auto exact = pp::ProjectPlanar(pose, {{0.4, -0.3, 12.0}});
  EXPECT_LT(pp::SampsonDistance(pp::EssentialFromPose(pose), exact.at(0)), 1e-28);
}

TEST(GeometryTest, AlgebraicCostMatchesDenseOracle) {
  pp::Rng rng(6);
  std::vector<pp::Correspondence> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(RandomCorrespondence(rng));
  for (int t = 0; t < 100; ++t) {
    const pp::PlanarPose pose(rng.Uniform(-pp::kPi, pp::kPi), rng.Uniform(-pp::kPi, pp::kPi));
    const double unit = oracle::DenseUnitCost(pose.alpha, pose.beta, pts);
    const double fixed = oracle::DenseCost(pose.alpha, pose.beta, pts);
    EXPECT_NEAR(pp::UnitAlgebraicCost(pose, pts), unit, 1e-12 * unit);
    EXPECT_NEAR(pp::AlgebraicCost(pose, pts), fixed, 1e-12 * fixed);
    EXPECT_GE(fixed, unit * (1 - 1e-15));
  }
}

TEST(GeometryTest, CheiralityPrefersPointsInFront) {
  pp::Rng rng(7);
  const pp::PlanarPose truth(pp::Deg2Rad(3), pp::kPi / 2);
  const auto pts = pp::ProjectPlanar(truth, RandomPoints(rng, 40));
  EXPECT_EQ(pp::CountPositiveDepth(truth, pts), 40);
  EXPECT_LT(pp::CountPositiveDepth(truth.flipped(), pts), 40);

  const std::vector<pp::PlanarPose> both = {truth.flipped(), truth};
  EXPECT_EQ(pp::CheiralitySelect(both, pts), truth);
  const std::vector<pp::PlanarPose> one = {truth.flipped()};
  EXPECT_EQ(pp::CheiralitySelect(one, pts), truth.flipped());
  const std::vector<pp::PlanarPose> dup = {truth, truth};
  EXPECT_EQ(pp::CheiralitySelect(dup, pts), truth);
}

TEST(GeometryTest, TriangulationRecoversPoint) {
  const pp::PlanarPose pose(pp::Deg2Rad(4), pp::Deg2Rad(80));
  const Eigen::Vector3d x(0.3, -0.2, 14.0);
  const auto c = pp::ProjectPlanar(pose, {x});
  ASSERT_EQ(c.size(), 1u);
  Eigen::Vector3d got;
  ASSERT_TRUE(pp::TriangulateMidpoint(pose, c[0], &got));
  // Scale is fixed by the unit translation of the pose model.
  EXPECT_NEAR(got.normalized().dot(x.normalized()), 1.0, 1e-12);
}

TEST(GeometryTest, AngularErrors) {
  EXPECT_EQ(pp::RotationAngularError(0.1, 0.1), 0.0);
  EXPECT_NEAR(pp::RotationAngularError(pp::Deg2Rad(179), pp::Deg2Rad(-179)), 2.0, 1e-10);
  EXPECT_NEAR(pp::RotationAngularError(pp::Deg2Rad(110), pp::Deg2Rad(20), true), 0.0, 1e-10);
  EXPECT_NEAR(pp::TranslationAngularError(0.2, 0.2 + pp::kPi), 180.0, 1e-10);
  EXPECT_NEAR(pp::TranslationAngularError(0.2, 0.2 + pp::kPi, true), 0.0, 1e-10);
  EXPECT_NEAR(pp::TranslationAngularError(pp::Deg2Rad(10), pp::Deg2Rad(-15)), 25.0, 1e-10);
}

TEST(GeometryTest, ContinuousPathFolding) {
  EXPECT_DOUBLE_EQ(pp::FoldContinuousPathDeg(110), 20);
  EXPECT_DOUBLE_EQ(pp::FoldContinuousPathDeg(-110), -20);
  EXPECT_DOUBLE_EQ(pp::FoldContinuousPathDeg(45), 45);
}

TEST(GeometryTest, RotationMatrixAngle) {
  EXPECT_NEAR(pp::RotationMatrixAngleDeg(oracle::RotY(0.1), oracle::RotY(0.4)),
              pp::Rad2Deg(0.3), 1e-10);
  EXPECT_NEAR(pp::DirectionAngleDeg({1, 0, 0}, {0, 0, 2}), 90.0, 1e-12);
}

}  // namespace
