#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace voroform {

/** Dense rational matrix with exact arithmetic throughout. */
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const Rat& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat operator+(const Mat& o) const {
    require_same_shape(o);
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
  }

  Mat operator-(const Mat& o) const {
    require_same_shape(o);
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatchException("matrix product shape mismatch");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& aik = (*this)(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }

  Mat scaled(const Rat& c) const {
    Mat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * c;
    return r;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool is_integer() const {
    for (const auto& x : a_)
      if (denominator(x) != 1) return false;
    return true;
  }

 private:
  void require_same_shape(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw DimensionMismatchException("matrix shape mismatch");
  }

  int rows_, cols_;
  std::vector<Rat> a_;
};

inline VecR mat_vec(const Mat& m, const VecR& v) {
  if (m.cols() != static_cast<int>(v.size()))
    throw DimensionMismatchException("matrix-vector shape mismatch");
  VecR r(m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j];
  return r;
}

inline Rat dot(const VecR& a, const VecR& b) {
  if (a.size() != b.size()) throw DimensionMismatchException("dot product shape mismatch");
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/** Exact determinant via fraction-free (Bareiss) elimination. */
inline Rat det(Mat m) {
  if (m.rows() != m.cols()) throw DimensionMismatchException("determinant of non-square matrix");
  const int n = m.rows();
  if (n == 0) return 1;
  Rat prev = 1;
  int sign = 1;
  for (int k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (m(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

/**
 * Reduce to row echelon form in place with deterministic first-nonzero pivoting.
 * Returns the pivot column indices (rank = their count).
 */
inline std::vector<int> rref_in_place(Mat& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i)
      if (m(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(p, j));
    const Rat inv = m(row, col);
    for (int j = 0; j < m.cols(); ++j) m(row, j) /= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      const Rat f = m(i, col);
      for (int j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank(Mat m) { return static_cast<int>(rref_in_place(m).size()); }

/** Exact inverse by Gauss-Jordan elimination. Throws when singular. */
inline Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionMismatchException("inverse of non-square matrix");
  const int n = m.rows();
  Mat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const auto pivots = rref_in_place(aug);
  if (static_cast<int>(pivots.size()) != n || pivots.back() != n - 1)
    throw SingularMatrixException();
  Mat r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = aug(i, n + j);
  return r;
}

/**
 * Basis of {x : Mx = 0}, one vector per free column, canonicalized to primitive
 * integer vectors with positive leading entry, in free-column order.
 */
inline std::vector<VecR> kernel_basis(Mat m) {
  const int n = m.cols();
  const auto pivots = rref_in_place(m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<VecR> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    VecR v(n);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(static_cast<int>(r), f);
    v = primitive_integer_vector(v);
    canonicalize_sign(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

/** One exact solution of Ax = b, or nullopt when inconsistent (free variables set to 0). */
inline std::optional<VecR> solve(const Mat& a, const VecR& b) {
  if (a.rows() != static_cast<int>(b.size()))
    throw DimensionMismatchException("solve shape mismatch");
  Mat aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const auto pivots = rref_in_place(aug);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;  // row (0 .. 0 | 1)
  VecR x(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<int>(r), a.cols());
  return x;
}

}  // namespace voroform
