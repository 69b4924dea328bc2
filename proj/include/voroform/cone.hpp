#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

#include "shortvec.hpp"

namespace voroform {

/**
 * Rational coordinate chart on a subspace of symmetric d x d matrices. The full
 * space uses the basis {E_ii} followed by {E_ij + E_ji, i < j}; the inner product
 * of forms is always taken through the matrix representation, never through raw
 * coordinates, so the off-diagonal factor 2 cannot leak into cone data.
 */
class CoordMap {
 public:
  static CoordMap full_space(int d) {
    CoordMap c;
    c.d_ = d;
    for (int i = 0; i < d; ++i) {
      Mat b(d, d);
      b(i, i) = 1;
      c.basis_.push_back(std::move(b));
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) {
        Mat b(d, d);
        b(i, j) = b(j, i) = 1;
        c.basis_.push_back(std::move(b));
      }
    c.build_solver();
    return c;
  }

  static CoordMap from_basis(int d, std::vector<Mat> basis) {
    CoordMap c;
    c.d_ = d;
    c.basis_ = std::move(basis);
    for (const auto& b : c.basis_)
      if (b.rows() != d || b.cols() != d || b != b.transposed())
        throw DimensionMismatchException("chart basis must consist of symmetric d x d matrices");
    c.build_solver();
    if (static_cast<int>(c.pivots_.size()) != c.dim())
      throw DimensionMismatchException("chart basis is linearly dependent");
    return c;
  }

  int dim() const { return static_cast<int>(basis_.size()); }
  int ambient_matrix_dim() const { return d_; }
  const std::vector<Mat>& basis() const { return basis_; }

  Mat to_matrix(const VecR& y) const {
    if (static_cast<int>(y.size()) != dim())
      throw DimensionMismatchException("coordinate vector has wrong length");
    Mat m(d_, d_);
    for (int k = 0; k < dim(); ++k)
      if (y[k] != 0) m = m + basis_[k].scaled(y[k]);
    return m;
  }

  VecR to_coords(const Mat& m) const {
    auto y = try_coords(m);
    if (!y) throw NotInSubspaceException();
    return *y;
  }

  bool contains(const Mat& m) const { return try_coords(m).has_value(); }

  /** Full-space coordinate vector of a symmetric matrix (diagonal, then i<j entries). */
  static VecR full_coords(const Mat& m) {
    const int d = m.rows();
    VecR y;
    y.reserve(static_cast<std::size_t>(d) * (d + 1) / 2);
    for (int i = 0; i < d; ++i) y.push_back(m(i, i));
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) y.push_back(m(i, j));
    return y;
  }

 private:
  std::optional<VecR> try_coords(const Mat& m) const {
    if (m.rows() != d_ || m.cols() != d_ || m != m.transposed())
      throw DimensionMismatchException("expected a symmetric d x d matrix");
    const VecR target = full_coords(m);
    // Solve span_ * y = target using the cached echelon form of span_.
    VecR rhs(target);
    VecR y(dim(), Rat(0));
    // Forward-substitute through the recorded row operations.
    Mat aug = span_;
    const int rows = aug.rows();
    Mat work(rows, dim() + 1);
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < dim(); ++j) work(i, j) = aug(i, j);
      work(i, dim()) = rhs[i];
    }
    const auto piv = rref_in_place(work);
    if (!piv.empty() && piv.back() == dim()) return std::nullopt;  // inconsistent
    for (std::size_t r = 0; r < piv.size(); ++r) y[piv[r]] = work(static_cast<int>(r), dim());
    // Confirm exactly (free columns, if any, were set to zero).
    if (to_matrix(y) != m) return std::nullopt;
    return y;
  }

  void build_solver() {
    const int rows = d_ * (d_ + 1) / 2;
    span_ = Mat(rows, dim());
    for (int k = 0; k < dim(); ++k) {
      const VecR col = full_coords(basis_[k]);
      for (int i = 0; i < rows; ++i) span_(i, k) = col[i];
    }
    Mat copy = span_;
    pivots_ = rref_in_place(copy);
  }

  int d_ = 0;
  std::vector<Mat> basis_;
  Mat span_;  // full-space coordinates of the basis, one column per element
  std::vector<int> pivots_;
};

/** Polyhedral cone in chart coordinates; either description may be present. */
struct Cone {
  int ambient_dim = 0;
  std::optional<std::vector<VecR>> h_rep;  // inequality normals a: <a, y> >= 0
  std::optional<std::vector<VecR>> v_rep;  // extreme rays
  std::vector<VecR> lineality;
};

/**
 * Support cone P(Q) (or P_T(Q)) of a form with minimum data m: one inequality
 * per minimal pair x, with normal components B_k[x] over the chart basis;
 * normals are scaled to primitive integer vectors and duplicates merged.
 */
inline Cone support_cone(const MinData& m, const CoordMap& chart) {
  Cone c;
  c.ambient_dim = chart.dim();
  std::vector<VecR> normals;
  normals.reserve(m.vectors.size());
  for (const auto& x : m.vectors) {
    VecR a(chart.dim());
    for (int k = 0; k < chart.dim(); ++k) a[k] = evaluate(QuadForm(chart.basis()[k]), x);
    normals.push_back(primitive_integer_vector(a));
  }
  std::sort(normals.begin(), normals.end(), lex_less_rat);
  normals.erase(std::unique(normals.begin(), normals.end()), normals.end());
  c.h_rep = std::move(normals);
  return c;
}

/** Basis of the maximal linear subspace {y : <a_i, y> = 0 for all i} of the cone. */
inline std::vector<VecR> lineality_space(const Cone& c) {
  if (!c.h_rep) throw NoHRepException();
  if (c.h_rep->empty()) {
    std::vector<VecR> full;
    for (int i = 0; i < c.ambient_dim; ++i) {
      VecR e(c.ambient_dim);
      e[i] = 1;
      full.push_back(std::move(e));
    }
    return full;
  }
  Mat a(static_cast<int>(c.h_rep->size()), c.ambient_dim);
  for (std::size_t i = 0; i < c.h_rep->size(); ++i)
    for (int j = 0; j < c.ambient_dim; ++j) a(static_cast<int>(i), j) = (*c.h_rep)[i][j];
  return kernel_basis(a);
}

namespace detail {

/** Bitset over constraint indices with popcount and subset tests. */
struct TightSet {
  std::vector<std::uint64_t> w;

  explicit TightSet(std::size_t bits = 0) : w((bits + 63) / 64, 0) {}
  void set(std::size_t i) { w[i / 64] |= std::uint64_t(1) << (i % 64); }
  bool test(std::size_t i) const { return (w[i / 64] >> (i % 64)) & 1; }

  static TightSet intersect(const TightSet& a, const TightSet& b) {
    TightSet r;
    r.w.resize(a.w.size());
    for (std::size_t k = 0; k < a.w.size(); ++k) r.w[k] = a.w[k] & b.w[k];
    return r;
  }

  int count_and(const TightSet& mask) const {
    int c = 0;
    for (std::size_t k = 0; k < w.size(); ++k)
      c += std::popcount(w[k] & mask.w[k]);
    return c;
  }

  /** this & mask subset of other & mask */
  bool subset_of(const TightSet& other, const TightSet& mask) const {
    for (std::size_t k = 0; k < w.size(); ++k)
      if ((w[k] & mask.w[k]) & ~other.w[k]) return false;
    return true;
  }
};

struct DDRay {
  VecR v;
  TightSet tight;
};

}  // namespace detail

/**
 * Extreme rays of a pointed cone from its inequality description, by the double
 * description method with deterministic insertion order. Adjacency uses the
 * tight-set popcount prefilter followed by the combinatorial containment test
 * over the constraints processed so far. Rays come back as primitive integer
 * vectors in lexicographic order. Throws when more than `intermediate_budget`
 * rays accumulate at any stage.
 */
inline std::vector<VecR> extreme_rays(const Cone& c, long long intermediate_budget = 100000) {
  if (!c.h_rep) throw NoHRepException();
  if (!lineality_space(c).empty()) throw NotPointedException();
  const auto& normals = *c.h_rep;
  const int n = c.ambient_dim;
  const std::size_t m = normals.size();

  // Seed with n constraints of full rank; the seed cone {y : a_i y >= 0} is
  // simplicial with rays given by the columns of the inverse normal matrix.
  std::vector<int> seed;
  {
    int got = 0;
    for (std::size_t i = 0; i < m && got < n; ++i) {
      Mat trial(got + 1, n);
      for (int r = 0; r < got; ++r)
        for (int j = 0; j < n; ++j) trial(r, j) = normals[seed[r]][j];
      for (int j = 0; j < n; ++j) trial(got, j) = normals[i][j];
      if (rank(trial) == got + 1) {
        seed.push_back(static_cast<int>(i));
        ++got;
      }
    }
    if (got < n) throw NotPointedException();  // defensive; lineality test above covers this
  }

  Mat seed_mat(n, n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) seed_mat(r, j) = normals[seed[r]][j];
  const Mat seed_inv = inverse(seed_mat);

  auto tight_bits = [&](const VecR& v) {
    detail::TightSet t(m);
    for (std::size_t i = 0; i < m; ++i)
      if (dot(normals[i], v) == 0) t.set(i);
    return t;
  };

  std::vector<detail::DDRay> rays;
  for (int j = 0; j < n; ++j) {
    VecR v(n);
    for (int i = 0; i < n; ++i) v[i] = seed_inv(i, j);
    v = primitive_integer_vector(v);
    rays.push_back({v, tight_bits(v)});
  }

  detail::TightSet processed(m);
  for (int s : seed) processed.set(static_cast<std::size_t>(s));

  std::vector<char> in_seed(m, 0);
  for (int s : seed) in_seed[static_cast<std::size_t>(s)] = 1;

  for (std::size_t t = 0; t < m; ++t) {
    if (in_seed[t]) continue;
    std::vector<Rat> val(rays.size());
    std::vector<std::size_t> pos, neg, zero;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      val[r] = dot(normals[t], rays[r].v);
      if (val[r] > 0)
        pos.push_back(r);
      else if (val[r] < 0)
        neg.push_back(r);
      else
        zero.push_back(r);
    }
    processed.set(t);
    if (neg.empty()) continue;

    // Combine adjacent (positive, negative) pairs; adjacency is tested among
    // the rays of the current cone only, never against freshly created ones.
    std::vector<detail::DDRay> created;
    for (std::size_t p : pos) {
      for (std::size_t q : neg) {
        const auto common = detail::TightSet::intersect(rays[p].tight, rays[q].tight);
        if (common.count_and(processed) < n - 2) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size(); ++r) {
          if (r == p || r == q) continue;
          if (common.subset_of(rays[r].tight, processed)) {
            adjacent = false;
            break;
          }
        }
        if (!adjacent) continue;
        VecR v(n);
        for (int j = 0; j < n; ++j) v[j] = val[p] * rays[q].v[j] - val[q] * rays[p].v[j];
        v = primitive_integer_vector(v);
        created.push_back({std::move(v), detail::TightSet()});
        created.back().tight = tight_bits(created.back().v);
        if (static_cast<long long>(pos.size() + zero.size() + created.size()) >
            intermediate_budget)
          throw BudgetExceededException("extreme ray budget exceeded");
      }
    }

    std::vector<detail::DDRay> next;
    next.reserve(pos.size() + zero.size() + created.size());
    for (std::size_t r : pos) next.push_back(std::move(rays[r]));
    for (std::size_t r : zero) next.push_back(std::move(rays[r]));
    for (auto& r : created) next.push_back(std::move(r));
    rays = std::move(next);
  }

  std::vector<VecR> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  std::sort(out.begin(), out.end(), lex_less_rat);
  return out;
}

/**
 * Irredundant inequality description of the conic hull of `rays` (assumed to
 * span a pointed cone). When the hull is lower-dimensional, the orthogonal
 * complement of its span is emitted as pairs of opposite inequalities.
 */
inline Cone facet_description(const std::vector<VecR>& rays, int ambient_dim) {
  Cone out;
  out.ambient_dim = ambient_dim;
  out.v_rep = rays;
  if (rays.empty()) {  // hull = {0}: cut down to the origin by +-e_i
    std::vector<VecR> h;
    for (int i = 0; i < ambient_dim; ++i) {
      VecR e(ambient_dim), f(ambient_dim);
      e[i] = 1;
      f[i] = -1;
      h.push_back(std::move(e));
      h.push_back(std::move(f));
    }
    out.h_rep = std::move(h);
    return out;
  }
  Mat r(static_cast<int>(rays.size()), ambient_dim);
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (int j = 0; j < ambient_dim; ++j) r(static_cast<int>(i), j) = rays[i][j];
  const auto perp = kernel_basis(r);  // both lin(dual cone) and span(rays)^perp

  std::vector<VecR> facets;
  if (perp.empty()) {
    Cone dual;
    dual.ambient_dim = ambient_dim;
    dual.h_rep = rays;
    facets = extreme_rays(dual);
  } else {
    // Work inside a complement W of the perpendicular space: a = W^t z.
    Mat rr = r;
    const auto piv = rref_in_place(rr);
    const int k = static_cast<int>(piv.size());
    Mat w(k, ambient_dim);  // rows: basis of the span of the rays
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < ambient_dim; ++j) w(i, j) = rr(i, j);
    Cone quot;
    quot.ambient_dim = k;
    std::vector<VecR> qnorm;
    const Mat wt = w.transposed();
    for (const auto& ray : rays) {
      VecR row(k);
      for (int z = 0; z < k; ++z) {
        Rat s = 0;
        for (int j = 0; j < ambient_dim; ++j) s += ray[j] * wt(j, z);
        row[z] = s;
      }
      qnorm.push_back(primitive_integer_vector(row));
    }
    std::sort(qnorm.begin(), qnorm.end(), lex_less_rat);
    qnorm.erase(std::unique(qnorm.begin(), qnorm.end()), qnorm.end());
    quot.h_rep = std::move(qnorm);
    for (const auto& z : extreme_rays(quot)) {
      VecR a(ambient_dim);
      for (int j = 0; j < ambient_dim; ++j) {
        Rat s = 0;
        for (int zi = 0; zi < k; ++zi) s += wt(j, zi) * z[zi];
        a[j] = s;
      }
      facets.push_back(primitive_integer_vector(a));
    }
    std::sort(facets.begin(), facets.end(), lex_less_rat);
  }
  for (const auto& l : perp) {
    facets.push_back(l);
    VecR neg(l.size());
    for (std::size_t j = 0; j < l.size(); ++j) neg[j] = -l[j];
    facets.push_back(std::move(neg));
  }
  out.h_rep = std::move(facets);
  return out;
}

}  // namespace voroform
