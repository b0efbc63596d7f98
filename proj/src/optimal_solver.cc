#include "planar_pose/optimal_solver.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "planar_pose/error.h"

namespace planar_pose {

const char* ToString(Branch branch) {
  return branch == Branch::kFixFourth ? "fix_fourth" : "fix_third";
}

namespace {

constexpr int kCompensatedThreshold = 10000;
// Near-double real roots come out of the eigensolver as complex pairs with
// imaginary parts around sqrt(eps); they are kept and refined.
constexpr double kLooseImagTol = 1e-4;

void RequireAtLeastThree(std::span<const Correspondence> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::kInvalidInput, "at least 3 correspondences are required");
  }
}

double MaxDiagonal(const Eigen::Matrix4d& g) { return g.diagonal().maxCoeff(); }

bool IsDegenerate(const DesignColumns& design, double relative_tol) {
  const double scale = MaxDiagonal(design.gram);
  return scale <= 0.0 || CheckDegenerate(design, relative_tol * scale);
}

// Polynomials for a branch-ordered Gram matrix, without the degeneracy check.
LambdaPolynomials PolynomialsFromGram(const Eigen::Matrix4d& g) {
  const Polynomial m11 = Polynomial::Linear(g(0, 0));
  const Polynomial m22 = Polynomial::Linear(g(1, 1));
  const Polynomial m33 = Polynomial::Linear(g(2, 2), -1.0);
  const double g12 = g(0, 1), g13 = g(0, 2), g23 = g(1, 2);

  // adj(M) is symmetric because M is.
  const Polynomial a11 = m22 * m33 - Polynomial::Constant(g23 * g23);
  const Polynomial a12 = Polynomial::Constant(g13 * g23) - m33 * g12;
  const Polynomial a13 = Polynomial::Constant(g12 * g23) - m22 * g13;
  const Polynomial a22 = m11 * m33 - Polynomial::Constant(g13 * g13);
  const Polynomial a23 = Polynomial::Constant(g12 * g13) - m11 * g23;
  const Polynomial a33 = m11 * m22 - Polynomial::Constant(g12 * g12);

  const double b1 = -g(0, 3), b2 = -g(1, 3), b3 = -g(2, 3);

  LambdaPolynomials out;
  out.p1 = a11 * b1 + a12 * b2 + a13 * b3;
  out.p2 = a12 * b1 + a22 * b2 + a23 * b3;
  out.p3 = a13 * b1 + a23 * b2 + a33 * b3;
  out.p4 = m11 * a11 + a12 * g12 + a13 * g13;
  return out;
}

struct LinearSolution {
  Eigen::Vector3d x;
  double constraint = 0.0;
  double derivative = 0.0;
};

// Solves M(lambda) x = b and evaluates c(lambda) = gamma^2 + delta^2 -
// epsilon^2 - 1 together with dc/dlambda.
bool SolveAt(const Eigen::Matrix4d& g, double lambda, LinearSolution* out) {
  const Eigen::Matrix3d m = LagrangeMatrix(g, lambda);
  const Eigen::Vector3d b = -g.block<3, 1>(0, 3);
  const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
  if (!lu.isInvertible()) return false;
  const Eigen::Vector3d x = lu.solve(b);
  if (!x.allFinite()) return false;
  // dM/dlambda = diag(1, 1, -1), so dx/dlambda = -M^{-1} diag(1, 1, -1) x.
  const Eigen::Vector3d dx = -lu.solve(Eigen::Vector3d(x(0), x(1), -x(2)));
  out->x = x;
  out->constraint = x(0) * x(0) + x(1) * x(1) - x(2) * x(2) - 1.0;
  out->derivative = 2.0 * (x(0) * dx(0) + x(1) * dx(1) - x(2) * dx(2));
  return true;
}

// Newton on the unexpanded constraint c(lambda); the expanded sextic loses
// digits through squaring, this does not.
bool RefineRoot(const Eigen::Matrix4d& g, double* lambda, LinearSolution* sol) {
  if (!SolveAt(g, *lambda, sol)) return false;
  for (int k = 0; k < 8 && sol->constraint != 0.0; ++k) {
    if (sol->derivative == 0.0 || !std::isfinite(sol->derivative)) break;
    const double next = *lambda - sol->constraint / sol->derivative;
    LinearSolution trial;
    if (!SolveAt(g, next, &trial)) break;
    if (!(std::abs(trial.constraint) < std::abs(sol->constraint))) break;
    *lambda = next;
    *sol = trial;
  }
  return true;
}

// ||adj(M) b||^2 - det(M)^2 evaluated from M itself: the sextic without
// expanded coefficients and, unlike c(lambda), free of poles.
double ClearedConstraint(const Eigen::Matrix4d& g, double lambda) {
  const Eigen::Matrix3d m = LagrangeMatrix(g, lambda);
  Eigen::Matrix3d adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const double det = m(0, 0) * adj(0, 0) + m(0, 1) * adj(1, 0) + m(0, 2) * adj(2, 0);
  const Eigen::Vector3d b = -g.block<3, 1>(0, 3);
  return (adj * b).squaredNorm() - det * det;
}

// Sign changes of the cleared constraint on a small stencil around a seed,
// each bisected to full precision. Catches pairs of close real roots that
// the eigensolver reports as a complex pair, typically straddling a pole of
// c(lambda) where Newton cannot start.
void BracketNear(const Eigen::Matrix4d& g, double center, double width,
                 std::vector<double>* out) {
  constexpr int kHalf = 4;
  double prev_x = center - kHalf * width;
  double prev_f = ClearedConstraint(g, prev_x);
  for (int k = -kHalf + 1; k <= kHalf; ++k) {
    const double x = center + k * width;
    const double f = ClearedConstraint(g, x);
    if (f == 0.0) {
      out->push_back(x);
    } else if ((prev_f < 0.0) != (f < 0.0) && prev_f != 0.0) {
      double lo = prev_x, hi = x, flo = prev_f;
      for (int it = 0; it < 200 && lo < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = ClearedConstraint(g, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out->push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_f = f;
  }
}

// The sextic's roots are also the eigenvalues (negated) of the 6x6 matrix
//   K = [[D H, -I], [-D g g^T, D H]],  D = diag(1, 1, -1),
// with H the leading 3x3 block and g the last column of the Gram matrix.
// Unlike the companion matrix of the expanded coefficients, K keeps clusters
// of small roots apart. Eigenvalues within imag_tol of the real axis become
// Newton seeds; near-real complex pairs are also bracketed.
std::vector<double> StructuredRoots(const Eigen::Matrix4d& gram, double imag_tol) {
  const Eigen::Vector3d d(1.0, 1.0, -1.0);
  const Eigen::Matrix3d dh = d.asDiagonal() * gram.topLeftCorner<3, 3>();
  const Eigen::Vector3d gv = gram.block<3, 1>(0, 3);
  const Eigen::Matrix3d dgg = d.asDiagonal() * (gv * gv.transpose());
  Eigen::Matrix<double, 6, 6> k;
  k << dh, -Eigen::Matrix3d::Identity(), -dgg, dh;
  const Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(k, false);
  std::vector<double> out;
  if (es.info() != Eigen::Success) return out;
  for (int i = 0; i < 6; ++i) {
    const std::complex<double> mu = es.eigenvalues()(i);
    const double re = -mu.real();
    const double im = std::abs(mu.imag());
    if (im > imag_tol * (1.0 + std::abs(re))) continue;
    out.push_back(re);
    if (im > 0.0 && mu.imag() > 0.0) BracketNear(gram, re, im, &out);
  }
  return out;
}

bool SubVectorsToPose(const Eigen::Vector4d& x, PlanarPose* pose) {
  const double n1 = std::hypot(x(0), x(1));
  const double n2 = std::hypot(x(2), x(3));
  if (!(n1 > 0.0) || !(n2 > 0.0) || !std::isfinite(n1) || !std::isfinite(n2)) return false;
  const double beta = std::atan2(x(1), x(0));
  const double sum = std::atan2(x(2), x(3));
  *pose = PlanarPose(sum - beta, beta);
  return true;
}

double HoldoutScore(const PlanarPose& pose, std::span<const Correspondence> holdout) {
  return AlgebraicCost(pose, holdout);
}

// Strict ordering used only after exact sorting: candidates whose scores agree
// to 1e-14 relative prefer kFixFourth, then the smaller |lambda|.
bool PreferOnTie(const SolverCandidate& a, const SolverCandidate& b) {
  if (a.branch != b.branch) return a.branch == Branch::kFixFourth;
  return std::abs(a.lambda) < std::abs(b.lambda);
}

}  // namespace

DesignColumns BuildDesign(std::span<const Correspondence> points) {
  RequireAtLeastThree(points);
  DesignColumns out;
  out.n = static_cast<int>(points.size());
  if (points.size() <= kCompensatedThreshold) {
    for (const auto& c : points) {
      const Eigen::Vector4d row = DesignRow(c);
      out.gram.noalias() += row * row.transpose();
    }
    return out;
  }
  // Kahan summation per entry.
  Eigen::Matrix4d sum = Eigen::Matrix4d::Zero();
  Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
  for (const auto& c : points) {
    const Eigen::Vector4d row = DesignRow(c);
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        const double y = row(i) * row(j) - comp(i, j);
        const double t = sum(i, j) + y;
        comp(i, j) = (t - sum(i, j)) - y;
        sum(i, j) = t;
      }
    }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      out.gram(i, j) = sum(i, j);
      out.gram(j, i) = sum(i, j);
    }
  }
  return out;
}

bool CheckDegenerate(const DesignColumns& design, double tol) {
  const auto& g = design.gram;
  return std::max(g(0, 0), g(1, 1)) <= tol || std::max(g(2, 2), g(3, 3)) <= tol;
}

Polynomial LambdaPolynomials::ConstraintPolynomial() const {
  return PolySquaredNorm(p1) + PolySquaredNorm(p2) + PolySquaredNorm(p3) -
         PolySquaredNorm(p4);
}

Eigen::Matrix4d BranchGram(const Eigen::Matrix4d& gram, Branch branch) {
  if (branch == Branch::kFixFourth) return gram;
  Eigen::Matrix4d swapped = gram;
  swapped.row(2).swap(swapped.row(3));
  swapped.col(2).swap(swapped.col(3));
  return swapped;
}

LambdaPolynomials BuildLambdaPolynomials(const DesignColumns& design, Branch branch) {
  if (IsDegenerate(design, OptimalSolverOptions{}.degenerate_tol)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "degenerate configuration: a column block of the design matrix vanishes");
  }
  return PolynomialsFromGram(BranchGram(design.gram, branch));
}

Eigen::Matrix3d LagrangeMatrix(const Eigen::Matrix4d& branch_gram, double lambda) {
  Eigen::Matrix3d m = branch_gram.topLeftCorner<3, 3>();
  m(0, 0) += lambda;
  m(1, 1) += lambda;
  m(2, 2) -= lambda;
  return m;
}

std::vector<int> HoldoutIndices(int n, double fraction) {
  std::vector<int> out;
  if (!(fraction > 0.0) || n <= 0) return out;
  const int count = std::max(1, static_cast<int>(std::floor(fraction * n)));
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    out.push_back(static_cast<int>(std::floor((k + 0.5) * n / count)));
  }
  return out;
}

OptimalSolverResult SolveOptimal(std::span<const Correspondence> points,
                                 const OptimalSolverOptions& options) {
  RequireAtLeastThree(points);

  // Split off the holdout set when requested and there is enough data left.
  std::vector<Correspondence> fit_storage;
  std::vector<Correspondence> holdout;
  std::span<const Correspondence> fit = points;
  const std::vector<int> held = HoldoutIndices(static_cast<int>(points.size()),
                                               options.holdout_fraction);
  if (!held.empty() && points.size() - held.size() >= 3) {
    size_t next = 0;
    for (size_t i = 0; i < points.size(); ++i) {
      if (next < held.size() && static_cast<int>(i) == held[next]) {
        holdout.push_back(points[i]);
        ++next;
      } else {
        fit_storage.push_back(points[i]);
      }
    }
    fit = fit_storage;
  }

  const DesignColumns design = BuildDesign(fit);
  if (IsDegenerate(design, options.degenerate_tol)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "degenerate configuration: a column block of the design matrix vanishes");
  }

  // Work on a unit-scaled Gram matrix; lambda scales with it.
  const double scale = MaxDiagonal(design.gram);
  const Eigen::Matrix4d scaled = design.gram / scale;

  OptimalSolverResult result;
  for (const Branch branch : {Branch::kFixFourth, Branch::kFixThird}) {
    const Eigen::Matrix4d g = BranchGram(scaled, branch);
    const Polynomial sextic = PolynomialsFromGram(g).ConstraintPolynomial();
    if (sextic.degree() < 1) continue;
    // Roots of the expanded sextic and of the structured eigenproblem are
    // pooled; after refinement on c(lambda) duplicates are merged.
    std::vector<double> seeds = RealRoots(sextic, options.roots);
    const std::vector<double> structured = StructuredRoots(g, kLooseImagTol);
    seeds.insert(seeds.end(), structured.begin(), structured.end());

    std::vector<double> accepted;
    for (double lambda : seeds) {
      LinearSolution sol;
      if (!RefineRoot(g, &lambda, &sol)) continue;
      const double residual = std::abs(sol.constraint);
      if (!(residual <= options.constraint_tol)) continue;
      const bool duplicate = std::any_of(accepted.begin(), accepted.end(), [&](double other) {
        return std::abs(other - lambda) <= options.roots.merge_tol * (1.0 + std::abs(lambda));
      });
      if (duplicate) continue;
      accepted.push_back(lambda);
      ++result.root_count;

      Eigen::Vector4d x;
      if (branch == Branch::kFixFourth) {
        x << sol.x(0), sol.x(1), sol.x(2), 1.0;
      } else {
        x << sol.x(0), sol.x(1), 1.0, sol.x(2);
      }
      SolverCandidate cand;
      if (!SubVectorsToPose(x, &cand.pose)) continue;
      cand.lambda = lambda * scale;
      cand.gamma = sol.x(0);
      cand.delta = sol.x(1);
      cand.epsilon = sol.x(2);
      cand.branch = branch;
      cand.constraint_residual = residual;
      cand.cost = AlgebraicCost(cand.pose, points);
      cand.selection_score =
          holdout.empty() ? AlgebraicCost(cand.pose, fit) : HoldoutScore(cand.pose, holdout);
      result.candidates.push_back(cand);
    }
  }

  if (result.candidates.empty()) {
    throw Error(ErrorCode::kNoSolution, "no real root yields a valid candidate on either branch");
  }

  std::stable_sort(result.candidates.begin(), result.candidates.end(),
                   [](const SolverCandidate& a, const SolverCandidate& b) {
                     return a.selection_score < b.selection_score;
                   });
  const double best_score = result.candidates.front().selection_score;
  size_t winner = 0;
  for (size_t i = 1; i < result.candidates.size(); ++i) {
    const double s = result.candidates[i].selection_score;
    if (s - best_score > 1e-14 * std::max(std::abs(s), std::abs(best_score))) break;
    if (PreferOnTie(result.candidates[i], result.candidates[winner])) winner = i;
  }
  std::rotate(result.candidates.begin(), result.candidates.begin() + winner,
              result.candidates.begin() + winner + 1);

  const SolverCandidate& best = result.candidates.front();
  const std::array<PlanarPose, 2> signs = {best.pose, best.pose.flipped()};
  result.pose = CheiralitySelect(signs, points);
  result.cost = best.cost;
  result.branch = best.branch;
  return result;
}

PlanarPose SolveLinearPlanar(std::span<const Correspondence> points) {
  const DesignColumns design = BuildDesign(points);
  if (IsDegenerate(design, OptimalSolverOptions{}.degenerate_tol)) {
    throw Error(ErrorCode::kDegenerateConfiguration,
                "degenerate configuration: a column block of the design matrix vanishes");
  }
  Eigen::MatrixX4d a(points.size(), 4);
  for (size_t i = 0; i < points.size(); ++i) a.row(i) = DesignRow(points[i]).transpose();
  const Eigen::JacobiSVD<Eigen::MatrixX4d> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d x = svd.matrixV().col(3);
  PlanarPose pose;
  if (!SubVectorsToPose(x, &pose)) {
    throw Error(ErrorCode::kDegenerateConfiguration, "null vector has a vanishing sub-vector");
  }
  const std::array<PlanarPose, 2> signs = {pose, pose.flipped()};
  return CheiralitySelect(signs, points);
}

}  // namespace planar_pose
