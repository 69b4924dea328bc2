#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "neighbor.hpp"

namespace voroform {

/**
 * Linear subspace T of the symmetric d x d matrices intersecting the positive
 * definite cone, optionally arising as the invariant forms T_G of a finite
 * unimodular group G. The basis is canonicalized (reduced row echelon form over
 * full-space coordinates, primitive integer matrices) so equal subspaces
 * serialize identically.
 */
struct TSpace {
  int dim_ambient = 0;
  std::vector<Mat> basis;
  std::vector<Mat> group;  // generators of G when T = T_G, empty otherwise
  Mat pd_witness;
  std::string kind;  // "eisenstein" | "gaussian" | "hurwitz" | "file"

  CoordMap chart() const { return CoordMap::from_basis(dim_ambient, basis); }
  int dim() const { return static_cast<int>(basis.size()); }
};

namespace detail {

inline std::vector<Rat> mat_key(const Mat& m) {
  std::vector<Rat> k;
  k.reserve(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) k.push_back(m(i, j));
  return k;
}

/** Canonicalize a spanning set: RREF over full-space coordinates, primitive rows. */
inline std::vector<Mat> canonical_basis(int d, const std::vector<VecR>& coord_rows) {
  const int cols = d * (d + 1) / 2;
  Mat m(static_cast<int>(coord_rows.size()), cols);
  for (std::size_t i = 0; i < coord_rows.size(); ++i)
    for (int j = 0; j < cols; ++j) m(static_cast<int>(i), j) = coord_rows[i][j];
  const auto piv = rref_in_place(m);
  const CoordMap full = CoordMap::full_space(d);
  std::vector<Mat> basis;
  for (std::size_t r = 0; r < piv.size(); ++r) {
    VecR row(cols);
    for (int j = 0; j < cols; ++j) row[j] = m(static_cast<int>(r), j);
    basis.push_back(full.to_matrix(primitive_integer_vector(row)));
  }
  return basis;
}

}  // namespace detail

/** Multiplicative closure of integer matrix generators, or throws past the budget. */
inline std::vector<Mat> group_closure(const std::vector<Mat>& gens, long long budget = 10000) {
  if (gens.empty()) return {};
  const int d = gens.front().rows();
  std::set<std::vector<Rat>> seen;
  std::vector<Mat> elems;
  auto push = [&](const Mat& m) {
    if (seen.insert(detail::mat_key(m)).second) {
      elems.push_back(m);
      return true;
    }
    return false;
  };
  push(Mat::identity(d));
  for (const auto& g : gens) push(g);
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (const auto& g : gens) {
      push(elems[i] * g);
      if (static_cast<long long>(elems.size()) > budget)
        throw ClosureBudgetExceededException();
    }
  }
  return elems;
}

/**
 * T_G = {Q symmetric : U^t Q U = Q for all generators U}, with a positive
 * definite witness obtained by averaging sum_{U in G} U^t U over the closure.
 */
inline TSpace invariant_space(const std::vector<Mat>& generators, long long closure_budget = 10000,
                              const std::string& kind = "group") {
  if (generators.empty()) throw DimensionMismatchException("need at least one generator");
  const int d = generators.front().rows();
  for (const auto& g : generators)
    if (g.rows() != d || g.cols() != d || !g.is_integer() ||
        (det(g) != 1 && det(g) != -1))
      throw DimensionMismatchException("generators must be unimodular integer matrices");

  const CoordMap full = CoordMap::full_space(d);
  const int n = full.dim();
  // Stack (L_U - I) y = 0 over generators, where L_U is the chart matrix of
  // B |-> U^t B U.
  Mat sys(static_cast<int>(generators.size()) * n, n);
  int row0 = 0;
  for (const auto& u : generators) {
    const Mat ut = u.transposed();
    for (int k = 0; k < n; ++k) {
      const VecR col = CoordMap::full_coords(ut * full.basis()[k] * u);
      for (int i = 0; i < n; ++i) sys(row0 + i, k) = col[i];
    }
    for (int i = 0; i < n; ++i) sys(row0 + i, i) -= 1;
    row0 += n;
  }
  const auto kern = kernel_basis(sys);
  if (kern.empty()) throw EmptyPositivePartException("invariant space is trivial");

  TSpace t;
  t.dim_ambient = d;
  t.kind = kind;
  t.basis = detail::canonical_basis(d, kern);
  t.group = generators;

  Mat witness(d, d);
  for (const auto& u : group_closure(generators, closure_budget)) witness = witness + u.transposed() * u;
  if (!is_positive_definite(QuadForm(witness)))
    throw EmptyPositivePartException("group averaging produced no positive definite form");
  t.pd_witness = witness;
  // The witness must lie in the computed space; anything else signals a
  // non-closed generating set.
  if (!t.chart().contains(witness))
    throw EmptyPositivePartException("witness escapes the invariant space");
  return t;
}

/** Order-3 fixed-point-free generator id_{d/2} (x) [[0,-1],[1,-1]]. */
inline std::vector<Mat> eisenstein_group(int d) {
  if (d < 2 || d % 2 != 0) throw OddDimensionException();
  Mat g(d, d);
  for (int b = 0; b < d / 2; ++b) {
    g(2 * b, 2 * b + 1) = -1;
    g(2 * b + 1, 2 * b) = 1;
    g(2 * b + 1, 2 * b + 1) = -1;
  }
  return {g};
}

/** Order-4 fixed-point-free generator id_{d/2} (x) [[0,-1],[1,0]]. */
inline std::vector<Mat> gaussian_group(int d) {
  if (d < 2 || d % 2 != 0) throw OddDimensionException();
  Mat g(d, d);
  for (int b = 0; b < d / 2; ++b) {
    g(2 * b, 2 * b + 1) = -1;
    g(2 * b + 1, 2 * b) = 1;
  }
  return {g};
}

/**
 * Generators of a copy of 2A4 (order 24) acting fixed-point-freely: left
 * multiplication by the quaternion units i and omega = (-1+i+j+k)/2 on H^{d/4}
 * over the Z-basis {1, i, j, (1+i+j+k)/2} of the Hurwitz order.
 */
inline std::vector<Mat> hurwitz_group(int d) {
  if (d < 4 || d % 4 != 0) throw NotMultipleOf4Exception();
  const int li[4][4] = {{0, -1, -1, -1}, {1, 0, -1, 0}, {0, 0, -1, -1}, {0, 0, 2, 1}};
  const int lw[4][4] = {{-1, 0, -1, -1}, {0, 0, -1, 0}, {0, 1, -1, 0}, {1, -1, 1, 0}};
  Mat gi(d, d), gw(d, d);
  for (int b = 0; b < d / 4; ++b)
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) {
        gi(4 * b + r, 4 * b + c) = li[r][c];
        gw(4 * b + r, 4 * b + c) = lw[r][c];
      }
  return {gi, gw};
}

/**
 * User-supplied subspace from a raw basis: canonicalized, no group attached;
 * the positive definite witness is searched among small integer combinations
 * (deterministic candidates first, then a seeded random sweep).
 */
inline TSpace tspace_from_basis(int d, const std::vector<Mat>& raw, long long witness_budget = 20000) {
  if (raw.empty()) throw DimensionMismatchException("empty basis");
  std::vector<VecR> rows;
  for (const auto& b : raw) {
    if (b.rows() != d || b.cols() != d || b != b.transposed())
      throw DimensionMismatchException("basis entries must be symmetric d x d matrices");
    rows.push_back(CoordMap::full_coords(b));
  }
  TSpace t;
  t.dim_ambient = d;
  t.kind = "file";
  t.basis = detail::canonical_basis(d, rows);
  if (t.basis.size() != raw.size())
    throw DimensionMismatchException("basis is linearly dependent");

  const int k = t.dim();
  auto try_combo = [&](const std::vector<Int>& coeff) -> bool {
    Mat m(d, d);
    for (int i = 0; i < k; ++i)
      if (coeff[i] != 0) m = m + t.basis[i].scaled(Rat(coeff[i]));
    if (m.is_zero() || !is_positive_definite(QuadForm(m))) return false;
    t.pd_witness = m;
    return true;
  };
  for (int i = 0; i < k; ++i) {
    std::vector<Int> c(k, Int(0));
    c[i] = 1;
    if (try_combo(c)) return t;
  }
  if (try_combo(std::vector<Int>(k, Int(1)))) return t;
  std::mt19937 rng(0xC0FFEE);
  for (long long it = 0; it < witness_budget; ++it) {
    std::vector<Int> c(k);
    for (int i = 0; i < k; ++i) c[i] = static_cast<int>(rng() % 9) - 4;
    if (try_combo(c)) return t;
  }
  throw EmptyPositivePartException();
}

/**
 * Walk from a positive definite Q0 in T down to a T-perfect form with the same
 * minimum: while the support cone P_T(Q) has a nontrivial lineality space, move
 * along a non-PSD direction in it (each step strictly enlarges the span of the
 * minimal vectors, so at most dim T steps occur).
 */
inline QuadForm descend_to_t_perfect(const QuadForm& q0, const TSpace& t) {
  const CoordMap chart = t.chart();
  if (!chart.contains(q0.mat())) throw NotInSubspaceException("start form not in subspace");
  if (!is_positive_definite(q0)) throw NotPositiveDefiniteException();
  QuadForm q = q0;
  const Rat lam = minimum(q).min_value;
  for (int guard = 0; guard <= t.dim(); ++guard) {
    const MinData md = minimum(q);
    const Cone cone = support_cone(md, chart);
    const auto lin = lineality_space(cone);
    if (lin.empty()) return q;
    // Candidate directions in deterministic order: basis vectors, then sums
    // and differences of pairs; a candidate or its negative is never PSD on
    // both sides, so the first candidate already yields a usable direction.
    std::vector<VecR> cands = lin;
    for (std::size_t i = 0; i < lin.size(); ++i)
      for (std::size_t j = i + 1; j < lin.size(); ++j) {
        VecR s(lin[i].size()), dvec(lin[i].size());
        for (std::size_t p = 0; p < lin[i].size(); ++p) {
          s[p] = lin[i][p] + lin[j][p];
          dvec[p] = lin[i][p] - lin[j][p];
        }
        cands.push_back(std::move(s));
        cands.push_back(std::move(dvec));
      }
    bool moved = false;
    for (const auto& cand : cands) {
      Mat r = chart.to_matrix(cand);
      if (r.is_zero()) continue;
      if (is_positive_semidefinite(QuadForm(r))) {
        r = r.scaled(Rat(-1));
        if (is_positive_semidefinite(QuadForm(r))) continue;  // impossible for r != 0
      }
      q = neighbor(q, r, lam).qn;
      moved = true;
      break;
    }
    if (!moved) throw NoIndefiniteDirectionException();
  }
  throw InternalErrorException("descent did not reach a pointed support cone");
}

}  // namespace voroform
