#pragma once

#include <cstddef>
#include <vector>

#include "matrix.hpp"

namespace voroform {

/** Outcome of an exact linear program in equality standard form. */
struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  Rat objective = 0;
  VecR solution;  // primal point, one entry per variable (empty unless optimal)
};

namespace detail {

/**
 * Dense rational simplex tableau. Row `m` carries the reduced costs c_j - z_j;
 * a column enters when its reduced cost is positive (maximization), chosen by
 * Bland's rule, which rules out cycling in exact arithmetic.
 */
class Tableau {
 public:
  Tableau(std::size_t m, std::size_t n) : m_(m), n_(n), t_(m + 1, std::vector<Rat>(n + 1, Rat(0))), basis_(m, 0) {}

  std::vector<Rat>& row(std::size_t i) { return t_[i]; }
  Rat& at(std::size_t i, std::size_t j) { return t_[i][j]; }
  Rat& rhs(std::size_t i) { return t_[i][n_]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const Rat p = t_[pr][pc];
    for (auto& e : t_[pr]) e /= p;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == pr || t_[i][pc] == 0) continue;
      const Rat f = t_[i][pc];
      for (std::size_t j = 0; j <= n_; ++j) t_[i][j] -= f * t_[pr][j];
    }
    basis_[pr] = pc;
  }

  /** Bland iteration until optimal (true) or unbounded (false). `active` bounds
   * the columns eligible to enter. */
  bool iterate(std::size_t active) {
    for (;;) {
      std::size_t enter = active;
      for (std::size_t j = 0; j < active; ++j)
        if (t_[m_][j] > 0) {
          enter = j;
          break;
        }
      if (enter == active) return true;
      std::size_t leave = m_;
      for (std::size_t i = 0; i < m_; ++i) {
        if (t_[i][enter] <= 0) continue;
        if (leave == m_) {
          leave = i;
          continue;
        }
        const Rat cur = t_[leave][n_] / t_[leave][enter];
        const Rat alt = t_[i][n_] / t_[i][enter];
        if (alt < cur || (alt == cur && basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == m_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<std::vector<Rat>> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/**
 * Maximize c.x subject to A x = b, x >= 0, exactly. Two-phase simplex with
 * Bland's rule throughout; redundant equations are detected in phase one and
 * dropped.
 */
inline LpResult solve_lp_max(const Mat& a, const VecR& b, const VecR& c) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m || c.size() != n) throw DimensionMismatchException();

  // Phase one: artificial variables n..n+m-1, maximize minus their sum.
  detail::Tableau t(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool neg = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = neg ? -a(i, j) : a(i, j);
    t.rhs(i) = neg ? -b[i] : b[i];
    t.at(i, n + i) = 1;
    t.basis()[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat s = 0;
    for (std::size_t i = 0; i < m; ++i) s += t.at(i, j);
    t.at(m, j) = s;  // reduced cost of a real variable under the artificial objective
  }
  for (std::size_t i = 0; i < m; ++i) t.rhs(m) += t.rhs(i);  // -z, and z starts at -sum(b)
  if (!t.iterate(n)) throw InternalErrorException("phase-one objective is bounded by zero");
  if (t.rhs(m) != 0) return {LpResult::Status::infeasible, 0, {}};

  // Drive leftover artificials out of the basis; a row with no real-variable
  // support is a redundant equation.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis()[i] < n) {
      keep.push_back(i);
      continue;
    }
    std::size_t piv = n;
    for (std::size_t j = 0; j < n; ++j)
      if (t.at(i, j) != 0) {
        piv = j;
        break;
      }
    if (piv == n) continue;  // redundant row
    t.pivot(i, piv);
    keep.push_back(i);
  }

  // Phase two on the surviving rows with the real objective.
  detail::Tableau t2(keep.size(), n);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) t2.at(i, j) = t.at(keep[i], j);
    t2.rhs(i) = t.rhs(keep[i]);
    t2.basis()[i] = t.basis()[keep[i]];
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat z = 0;
    for (std::size_t i = 0; i < keep.size(); ++i) z += c[t2.basis()[i]] * t2.at(i, j);
    t2.at(t2.rows(), j) = c[j] - z;
  }
  for (std::size_t i = 0; i < keep.size(); ++i) t2.rhs(t2.rows()) -= c[t2.basis()[i]] * t2.rhs(i);
  if (!t2.iterate(n)) return {LpResult::Status::unbounded, 0, {}};

  LpResult r;
  r.status = LpResult::Status::optimal;
  r.objective = -t2.rhs(t2.rows());
  r.solution.assign(n, Rat(0));
  for (std::size_t i = 0; i < t2.rows(); ++i) r.solution[t2.basis()[i]] = t2.rhs(i);
  return r;
}

}  // namespace voroform
