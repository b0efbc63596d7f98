#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace planar_pose {

// Dense univariate polynomial in lambda with real coefficients.
// coeffs()[i] is the coefficient of lambda^i. The coefficient list is never
// empty; the zero polynomial is stored as {0}.
class Polynomial {
 public:
  Polynomial() : coeffs_{0.0} {}
  Polynomial(std::initializer_list<double> coeffs);
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial Constant(double c) { return Polynomial({c}); }
  // lambda + c
  static Polynomial Linear(double c, double slope = 1.0) {
    return Polynomial({c, slope});
  }

  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](int i) const {
    return i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0.0;
  }

  // Highest index whose coefficient survives trimming: coefficients below
  // kTrimRelative * max|c| are treated as zero. The zero polynomial has
  // degree 0.
  int degree() const;
  double leading() const { return coeffs_[degree()]; }

  // Horner evaluation.
  double operator()(double x) const;
  Polynomial Derivative() const;

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);

  static constexpr double kTrimRelative = 1e-13;

 private:
  std::vector<double> coeffs_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(Polynomial a, double s);
Polynomial operator*(const Polynomial& a, const Polynomial& b);

// Coefficient convolution: result_k = sum_{i+j=k} p_i q_j.
Polynomial PolyMul(const Polynomial& p, const Polynomial& q);

// p * p. The degree doubles.
Polynomial PolySquaredNorm(const Polynomial& p);

struct RootOptions {
  // Conjugate pairs with |Im| > imag_tol * (1 + |Re|) are rejected.
  double imag_tol = 1e-8;
  // Roots closer than this are merged.
  double merge_tol = 1e-10;
  int newton_steps = 2;
};

// All real roots of p, ascending. Computed as eigenvalues of the companion
// matrix of the monic normalization and polished with Newton steps on p.
// Throws Error(kInvalidInput) for constant polynomials.
std::vector<double> RealRoots(const Polynomial& p, const RootOptions& options = {});

}  // namespace planar_pose
