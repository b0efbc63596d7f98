#pragma once

#include <vector>

#include "planar_pose/geometry.h"

namespace planar_pose {

// Two-point planar relative pose.
//
// The two design rows leave a 2D null space {n1, n2}; x = u n1 + v n2 must
// satisfy x1^2 + x2^2 = x3^2 + x4^2, a homogeneous quadratic in (u, v) with
// at most two real ratios. Each ratio is returned with both signs of t, so
// the result holds 0, 2 or 4 poses.
//
// Throws Error(kDegenerateSample) when the two rows are (numerically) parallel
// or either vanishes.
std::vector<PlanarPose> SolveTwoPoint(const Correspondence& c1, const Correspondence& c2);

}  // namespace planar_pose
