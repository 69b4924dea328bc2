#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <cstdlib>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace voroform {

using Float = boost::multiprecision::mpfr_float_50;

/**
 * Positive or indefinite quadratic form on Z^d, stored as an exact symmetric
 * rational matrix. Immutable value type: every operation returns a new form.
 */
class QuadForm {
 public:
  explicit QuadForm(Mat m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1)
      throw DimensionMismatchException("form matrix must be square of dimension >= 1");
    for (int i = 0; i < m_.rows(); ++i)
      for (int j = i + 1; j < m_.cols(); ++j)
        if (m_(i, j) != m_(j, i)) throw DimensionMismatchException("form matrix must be symmetric");
  }

  static QuadForm identity(int d) { return QuadForm(Mat::identity(d)); }

  /** Gram form xx^t of an integer vector. */
  static QuadForm rank_one(const VecZ& x) {
    Mat m(static_cast<int>(x.size()), static_cast<int>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j)
        m(static_cast<int>(i), static_cast<int>(j)) = Rat(x[i] * x[j]);
    return QuadForm(m);
  }

  int dim() const { return m_.rows(); }
  const Mat& mat() const { return m_; }
  const Rat& operator()(int i, int j) const { return m_(i, j); }

  bool operator==(const QuadForm& o) const { return m_ == o.m_; }
  bool operator!=(const QuadForm& o) const { return !(*this == o); }

  QuadForm scaled(const Rat& c) const { return QuadForm(m_.scaled(c)); }

  /** Q + c*R for a symmetric rational direction R. */
  QuadForm plus(const Rat& c, const Mat& r) const { return QuadForm(m_ + r.scaled(c)); }

  /** U^t Q U. */
  QuadForm transformed(const Mat& u) const { return QuadForm(u.transposed() * m_ * u); }

 private:
  Mat m_;
};

struct LagrangeExpansion {
  VecR outer;  // A_1..A_d, all positive for positive definite input
  Mat inner;   // alpha_ij stored above the diagonal (i < j)
};

inline Rat evaluate(const QuadForm& q, const VecZ& x) {
  if (q.dim() != static_cast<int>(x.size()))
    throw DimensionMismatchException("form/vector dimension mismatch");
  Rat s = 0;
  for (int i = 0; i < q.dim(); ++i) {
    if (x[i] == 0) continue;
    Rat row = 0;
    for (int j = 0; j < q.dim(); ++j) {
      if (x[j] != 0) row += q(i, j) * Rat(x[j]);
    }
    s += Rat(x[i]) * row;
  }
  return s;
}

/** <Q, Q'> = sum_ij q_ij q'_ij = trace(Q Q'). */
inline Rat inner_product(const QuadForm& a, const QuadForm& b) {
  if (a.dim() != b.dim()) throw DimensionMismatchException("form dimension mismatch");
  Rat s = 0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

inline Rat determinant(const QuadForm& q) { return det(q.mat()); }

/** Sylvester criterion: all leading principal minors positive. */
inline bool is_positive_definite(const QuadForm& q) {
  Mat m = q.mat();
  const int n = m.rows();
  Rat prev = 1;
  for (int k = 0; k < n; ++k) {
    if (m(k, k) <= 0) return false;  // m(k,k) holds the (k+1)-st leading minor
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return true;
}

/**
 * Positive semidefiniteness for symmetric Q: all eigenvalues are real, and they
 * are all nonnegative exactly when every elementary symmetric function e_k of
 * the eigenvalues is nonnegative (a negative eigenvalue -t would make
 * sum_k e_k t^{n-k} a positive value at a root). The e_k come from the exact
 * power sums tr(Q^k) through Newton's identities.
 */
inline bool is_positive_semidefinite(const QuadForm& q) {
  const int n = q.dim();
  const Mat& a = q.mat();
  // Cheap exact rejections: a PSD matrix has a nonnegative diagonal and
  // nonnegative 2x2 principal minors. Cone rays, the bulk of the inputs on
  // the enumeration path, are usually visibly indefinite here.
  for (int i = 0; i < n; ++i) {
    if (a(i, i) < 0) return false;
    for (int j = i + 1; j < n; ++j)
      if (a(i, i) * a(j, j) - a(i, j) * a(i, j) < 0) return false;
  }
  std::vector<Rat> p(n + 1), e(n + 1);
  e[0] = 1;
  Mat m = a;
  for (int k = 1; k <= n; ++k) {
    Rat tr = 0;
    for (int i = 0; i < n; ++i) tr += m(i, i);
    p[k] = tr;
    Rat s = 0;
    int sign = 1;
    for (int i = 1; i <= k; ++i) {
      s += Rat(sign) * e[k - i] * p[i];
      sign = -sign;
    }
    e[k] = s / k;
    if (e[k] < 0) return false;
    if (k < n) m = m * a;
  }
  return true;
}

/**
 * Q[x] = sum_i A_i (x_i - sum_{j>i} alpha_ij x_j)^2 with unique positive outer
 * coefficients; the nesting drives the short-vector enumeration.
 */
inline LagrangeExpansion lagrange_expansion(const QuadForm& q) {
  const int n = q.dim();
  Mat w = q.mat();
  LagrangeExpansion e;
  e.outer.assign(n, Rat(0));
  e.inner = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    const Rat a = w(i, i);
    if (a <= 0) throw NotPositiveDefiniteException();
    e.outer[i] = a;
    for (int j = i + 1; j < n; ++j) e.inner(i, j) = -w(i, j) / a;
    for (int j = i + 1; j < n; ++j)
      for (int k = j; k < n; ++k) {
        w(j, k) -= w(i, j) * w(i, k) / a;
        w(k, j) = w(j, k);
      }
  }
  return e;
}

/** Reconstruct the form encoded by a Lagrange expansion (test oracle for round trips). */
inline QuadForm lagrange_reconstruct(const LagrangeExpansion& e) {
  const int n = static_cast<int>(e.outer.size());
  Mat m(n, n);
  for (int i = 0; i < n; ++i) {
    // A_i (x_i - sum_{j>i} alpha_ij x_j)^2 contributes to all pairs (j,k) >= i.
    VecR coeff(n);
    coeff[i] = 1;
    for (int j = i + 1; j < n; ++j) coeff[j] = -e.inner(i, j);
    for (int j = i; j < n; ++j)
      for (int k = i; k < n; ++k) m(j, k) += e.outer[i] * coeff[j] * coeff[k];
  }
  return QuadForm(m);
}

/** H(Q)^d = lambda(Q)^d / det Q, exact; callers compare d-th powers to stay rational. */
inline Rat hermite_invariant_pow(const QuadForm& q, const Rat& min) {
  const Rat d = determinant(q);
  if (d <= 0 || !is_positive_definite(q)) throw NotPositiveDefiniteException();
  Rat p = 1;
  for (int i = 0; i < q.dim(); ++i) p *= min;
  return p / d;
}

inline Float rat_to_float(const Rat& r) {
  return Float(numerator(r).str()) / Float(denominator(r).str());
}

/**
 * Sphere packing density delta = (min/4)^{d/2} vol(B^d) / sqrt(det Q), evaluated
 * in high-precision floating point for display only; all decisions elsewhere use
 * exact rationals.
 */
inline Float packing_density(const QuadForm& q, const Rat& min) {
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const int d = q.dim();
  const Float pi = boost::math::constants::pi<Float>();
  // vol(B^d) = pi^{d/2} / Gamma(d/2 + 1), split by parity to stay closed-form.
  Float vol;
  if (d % 2 == 0) {
    Rat fact = 1;
    for (int i = 2; i <= d / 2; ++i) fact *= i;
    vol = pow(pi, d / 2) / rat_to_float(fact);
  } else {
    // pi^{n+1/2} / Gamma(n + 3/2) with Gamma(n + 3/2) = sqrt(pi) (2n+2)! / (4^{n+1} (n+1)!);
    // the sqrt(pi) factors cancel.
    const int n = (d - 1) / 2;
    Rat c = 1;  // 4^{n+1} (n+1)! / (2n+2)!
    for (int i = 1; i <= n + 1; ++i) c *= Rat(4) * i;
    for (int i = 2; i <= 2 * n + 2; ++i) c /= i;
    vol = pow(pi, n) * rat_to_float(c);
  }
  Rat radius_pow = 1;  // (min/4)^d, then take the square root
  for (int i = 0; i < d; ++i) radius_pow *= min / 4;
  return sqrt(rat_to_float(radius_pow)) * vol / sqrt(rat_to_float(determinant(q)));
}

/** Number of density digits to print; the environment variable overrides the default 4. */
inline int density_digits() {
  if (const char* env = std::getenv("VOROFORM_DENSITY_DIGITS")) {
    const int v = std::atoi(env);
    if (v >= 1 && v <= 40) return v;
  }
  return 4;
}

/**
 * Leading decimals of a value as "0.XXXX": truncation with two guard digits,
 * i.e. the value is first rounded at digits+2 and then cut. A tail like
 * 0.9068|99… therefore prints as 0.9069 while 0.7853|98… stays 0.7853, the
 * style used by the classical density tables.
 */
inline std::string truncated_decimal_string(const Float& value, int digits) {
  Float scaled = value;
  for (int i = 0; i < digits + 2; ++i) scaled *= 10;
  const auto guarded = static_cast<boost::multiprecision::mpz_int>(floor(scaled + Float(0.5)));
  const boost::multiprecision::mpz_int ipart = guarded / 100;  // guard digits dropped after the carry settled
  std::string s = ipart.str();
  const bool neg = !s.empty() && s[0] == '-';
  if (neg) s = s.substr(1);
  while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

inline std::string density_string(const QuadForm& q, const Rat& min) {
  return truncated_decimal_string(packing_density(q, min), density_digits());
}

}  // namespace voroform
