#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "planar_pose/geometry.h"
#include "planar_pose/polynomial.h"

namespace planar_pose {

// The N x 4 design matrix A, kept only through its Gram matrix A^T A. The
// columns a1..a4 of A multiply [cos b, sin b, sin(a+b), cos(a+b)].
struct DesignColumns {
  int n = 0;
  Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();
};

// Which coordinate of x is fixed to 1 to remove the scale ambiguity.
//   kFixFourth: x = [gamma, delta, epsilon, 1]
//   kFixThird:  x = [gamma, delta, 1, epsilon]  (columns 3 and 4 swapped)
enum class Branch { kFixFourth, kFixThird };

const char* ToString(Branch branch);

// Throws Error(kInvalidInput) for fewer than 3 points. Sums are compensated
// when there are more than 10^4 points.
DesignColumns BuildDesign(std::span<const Correspondence> points);

// True when either column block of A is numerically zero, i.e.
// max(g11, g22) <= tol or max(g33, g44) <= tol.
bool CheckDegenerate(const DesignColumns& design, double tol);

// Numerators and denominator of the rational solution
//   [gamma, delta, epsilon] = [P1, P2, P3] / P4
// of M(lambda) x = b, with
//   M(lambda) = [[lambda + g11, g12, g13],
//                [g12, lambda + g22, g23],
//                [g13, g23, g33 - lambda]],   b = -[g14, g24, g34].
// P1..P3 are the rows of adj(M) times b; P4 = det M is a cubic with
// leading coefficient -1.
struct LambdaPolynomials {
  Polynomial p1, p2, p3, p4;

  // P1^2 + P2^2 + P3^2 - P4^2: the constraint gamma^2 + delta^2 = epsilon^2 + 1
  // cleared of denominators. Degree 6, leading coefficient -1.
  Polynomial ConstraintPolynomial() const;
};

// Gram matrix as seen by a branch (indices 3 and 4 swapped for kFixThird).
Eigen::Matrix4d BranchGram(const Eigen::Matrix4d& gram, Branch branch);

// Throws Error(kDegenerateConfiguration) when CheckDegenerate holds at the
// default tolerance.
LambdaPolynomials BuildLambdaPolynomials(const DesignColumns& design, Branch branch);

// M(lambda) for a branch-ordered Gram matrix.
Eigen::Matrix3d LagrangeMatrix(const Eigen::Matrix4d& branch_gram, double lambda);

struct SolverCandidate {
  double lambda = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double epsilon = 0.0;
  Branch branch = Branch::kFixFourth;
  // AlgebraicCost of the pose on all input points.
  double cost = 0.0;
  // |gamma^2 + delta^2 - epsilon^2 - 1| before renormalization.
  double constraint_residual = 0.0;
  // Holdout score when candidate selection uses held-out points, else cost.
  double selection_score = 0.0;
  PlanarPose pose;
};

struct OptimalSolverOptions {
  // Fraction of points kept out of the fit and used only to pick among the
  // candidates; at least one point is held out when > 0.
  double holdout_fraction = 0.0;
  // Candidates whose constraint residual exceeds this are discarded.
  double constraint_tol = 1e-7;
  // Relative to the largest Gram diagonal entry.
  double degenerate_tol = 1e-14;
  RootOptions roots;
};

struct OptimalSolverResult {
  PlanarPose pose;
  // Cost of the returned pose on all input points.
  double cost = 0.0;
  Branch branch = Branch::kFixFourth;
  // Distinct refined roots accepted on both branches.
  int root_count = 0;
  // Every accepted candidate, sorted best first.
  std::vector<SolverCandidate> candidates;
};

// Least-squares optimal planar pose from three or more correspondences.
// Both branches are always solved and pooled; the candidate with the lowest
// cost wins and the sign of t is resolved by cheirality.
//
// Throws Error(kInvalidInput) for fewer than 3 points,
// Error(kDegenerateConfiguration) if a column block vanishes, and
// Error(kNoSolution) if neither branch yields an accepted candidate.
OptimalSolverResult SolveOptimal(std::span<const Correspondence> points,
                                 const OptimalSolverOptions& options = {});

// Indices of the points held out for candidate selection:
// max(1, floor(fraction * n)) evenly spaced indices, or none when the
// fraction is 0.
std::vector<int> HoldoutIndices(int n, double fraction);

// DLT baseline: the right singular vector of A for the smallest singular
// value, with both sub-vectors projected onto the unit circle. The sign of t
// is resolved by cheirality.
PlanarPose SolveLinearPlanar(std::span<const Correspondence> points);

}  // namespace planar_pose
