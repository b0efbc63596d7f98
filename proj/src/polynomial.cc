#include "planar_pose/polynomial.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "planar_pose/error.h"

namespace planar_pose {

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

int Polynomial::degree() const {
  double max_abs = 0.0;
  for (double c : coeffs_) max_abs = std::max(max_abs, std::abs(c));
  if (max_abs == 0.0) return 0;
  const double cutoff = kTrimRelative * max_abs;
  for (int i = static_cast<int>(coeffs_.size()) - 1; i > 0; --i) {
    if (std::abs(coeffs_[i]) > cutoff) return i;
  }
  return 0;
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::Derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
  for (size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(Polynomial a, double s) { return a *= s; }
Polynomial operator*(const Polynomial& a, const Polynomial& b) { return PolyMul(a, b); }

Polynomial PolyMul(const Polynomial& p, const Polynomial& q) {
  const auto pc = p.coeffs();
  const auto qc = q.coeffs();
  std::vector<double> out(pc.size() + qc.size() - 1, 0.0);
  for (size_t i = 0; i < pc.size(); ++i) {
    for (size_t j = 0; j < qc.size(); ++j) out[i + j] += pc[i] * qc[j];
  }
  return Polynomial(std::move(out));
}

Polynomial PolySquaredNorm(const Polynomial& p) { return PolyMul(p, p); }

namespace {

double PolishNewton(const Polynomial& p, const Polynomial& dp, double x, int steps) {
  double fx = std::abs(p(x));
  for (int k = 0; k < steps && fx > 0.0; ++k) {
    const double d = dp(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double next = x - p(x) / d;
    const double f_next = std::abs(p(next));
    // Only take steps that reduce |p|.
    if (!(f_next < fx)) break;
    x = next;
    fx = f_next;
  }
  return x;
}

}  // namespace

std::vector<double> RealRoots(const Polynomial& p, const RootOptions& options) {
  const int n = p.degree();
  if (n < 1) throw Error(ErrorCode::kInvalidInput, "RealRoots: polynomial has degree 0");

  const auto c = p.coeffs();
  const double lead = c[n];

  std::vector<double> roots;
  if (n == 1) {
    roots.push_back(-c[0] / lead);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    companion.diagonal(-1).setOnes();
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / lead;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    const Eigen::VectorXcd eig = solver.eigenvalues();
    for (int i = 0; i < n; ++i) {
      const double re = eig(i).real();
      const double im = eig(i).imag();
      if (std::abs(im) <= options.imag_tol * (1.0 + std::abs(re))) roots.push_back(re);
    }
  }

  // Polish against the original (trimmed) polynomial.
  std::vector<double> trimmed(c.begin(), c.begin() + n + 1);
  const Polynomial q(std::move(trimmed));
  const Polynomial dq = q.Derivative();
  for (double& r : roots) r = PolishNewton(q, dq, r, options.newton_steps);

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && std::abs(r - merged.back()) < options.merge_tol) {
      if (std::abs(q(r)) < std::abs(q(merged.back()))) merged.back() = r;
      continue;
    }
    merged.push_back(r);
  }
  return merged;
}

}  // namespace planar_pose
