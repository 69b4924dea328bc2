#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "tspace.hpp"

namespace voroform {

/** Automorphisms U^t Q U = Q. `order` is present only when fully enumerated. */
struct IsometryGroup {
  std::vector<Mat> generators;  // sample of group elements (all of them when small)
  std::optional<long long> order;
};

namespace detail {

/** Sorted multiset of |x_i^t Q x_j| over minimal pair representatives: an
 * arithmetic-equivalence invariant used as a cheap pre-filter. */
inline std::vector<Rat> gram_key(const QuadForm& q, const MinData& md) {
  std::vector<Rat> key;
  const std::size_t p = md.vectors.size();
  key.reserve(p * (p - 1) / 2);
  for (std::size_t i = 0; i < p; ++i) {
    const VecR qx = mat_vec(q.mat(), [&] {
      VecR v(md.vectors[i].size());
      for (std::size_t k = 0; k < v.size(); ++k) v[k] = Rat(md.vectors[i][k]);
      return v;
    }());
    for (std::size_t j = i + 1; j < p; ++j) {
      Rat s = 0;
      for (std::size_t k = 0; k < qx.size(); ++k) s += qx[k] * Rat(md.vectors[j][k]);
      key.push_back(abs(s));
    }
  }
  std::sort(key.begin(), key.end());
  return key;
}

/**
 * Backtracking over columns: u_i runs over vectors with A[u_i] = b_ii, pruned
 * by the partial Gram conditions u_i^t A u_j = b_ij. Every completed U with
 * U^t A U = B is passed to the sink; search stops when the sink returns
 * false. Column order is by ascending candidate count. The sign of the first
 * placed column is fixed (solutions come in +-U pairs), so sinks counting
 * solutions must double their tally.
 *
 * Callers must ensure det A = det B; completed solutions are then
 * automatically unimodular (the Gram conditions give U^t A U = B entrywise,
 * so det(U)^2 = det B / det A = 1 with U integral).
 *
 * With a chart, accepted solutions additionally satisfy U^t b U in T for
 * every chart basis element b. The condition is enforced incrementally: the
 * columns placed so far determine a prefix of the entries of U^t b U, and
 * that prefix must lie in the projection of T onto those entries — a linear
 * condition tested against precomputed complement functionals per depth. At
 * full depth the test is exact membership, so the sink sees no spurious
 * solutions. Without this the search would stream through the full classical
 * isometry set (astronomically large for highly symmetric forms) rejecting
 * each completed matrix after the fact.
 */
class IsomSearch {
 public:
  IsomSearch(const QuadForm& a, const QuadForm& b, const CoordMap* t_chart = nullptr)
      : a_(a), b_(b), d_(a.dim()), chart_(t_chart) {}

  /** False when some column has no candidates at all. */
  bool prepare() {
    Rat maxdiag = b_(0, 0);
    for (int i = 1; i < d_; ++i) maxdiag = std::max(maxdiag, b_(i, i));
    if (maxdiag <= 0) return false;
    // One positive scale clears both forms to integers: U^t (sA) U = sB is the
    // same equation, but the hot Gram conditions become gcd-free integer ops.
    Int s0 = 1;
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        s0 = lcm_int(s0, denominator(a_(i, j)));
        s0 = lcm_int(s0, denominator(b_(i, j)));
      }
    ai_.assign(static_cast<std::size_t>(d_) * d_, Int(0));
    bi_.assign(static_cast<std::size_t>(d_) * d_, Int(0));
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) {
        ai_[static_cast<std::size_t>(i) * d_ + j] =
            numerator(a_(i, j)) * (s0 / denominator(a_(i, j)));
        bi_[static_cast<std::size_t>(i) * d_ + j] =
            numerator(b_(i, j)) * (s0 / denominator(b_(i, j)));
      }
    std::vector<Int> values;
    for (int i = 0; i < d_; ++i) values.push_back(bi_[static_cast<std::size_t>(i) * d_ + i]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (const auto& v : vectors_below(a_, maxdiag)) {
      VecZ av(d_, Int(0));
      for (int i = 0; i < d_; ++i) {
        Int acc = 0;
        for (int j = 0; j < d_; ++j)
          if (v[j] != 0) acc += ai_[static_cast<std::size_t>(i) * d_ + j] * v[j];
        av[i] = std::move(acc);
      }
      Int val = 0;
      for (int i = 0; i < d_; ++i)
        if (v[i] != 0) val += av[i] * v[i];
      if (!std::binary_search(values.begin(), values.end(), val)) continue;
      pool_.push_back(v);
      pool_av_.push_back(std::move(av));
      pool_val_.push_back(std::move(val));
    }
    cand_.assign(d_, {});
    for (std::size_t k = 0; k < pool_.size(); ++k)
      for (int i = 0; i < d_; ++i)
        if (pool_val_[k] == bi_[static_cast<std::size_t>(i) * d_ + i])
          cand_[i].push_back(static_cast<int>(k));
    order_.resize(d_);
    for (int i = 0; i < d_; ++i) order_[i] = i;
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int x, int y) { return cand_[x].size() < cand_[y].size(); });
    for (int i = 0; i < d_; ++i)
      if (cand_[i].empty()) return false;
    if (chart_) prepare_t_filter();
    return true;
  }

  /** sink(U) -> keep searching? */
  void run(const std::function<bool(const Mat&)>& sink) {
    sink_ = &sink;
    stop_ = false;
    chosen_.assign(d_, -1);
    sign_.assign(d_, 1);
    place(0);
  }

 private:
  void place(int depth) {
    if (stop_) return;
    if (depth == d_) {
      Mat u(d_, d_);
      for (int c = 0; c < d_; ++c)
        for (int r = 0; r < d_; ++r) u(r, c) = Rat(sign_[c] * pool_[chosen_[c]][r]);
      if (!(*sink_)(u)) stop_ = true;
      return;
    }
    const int col = order_[depth];
    for (int k : cand_[col]) {
      for (int s : {1, -1}) {
        if (depth == 0 && s < 0) break;  // global sign symmetry: fix first column
        bool ok = true;
        for (int pd = 0; pd < depth && ok; ++pd) {
          const int pcol = order_[pd];
          Rat g = 0;
          for (int i = 0; i < d_; ++i) g += pool_av_[k][i] * Rat(pool_[chosen_[pcol]][i]);
          ok = g * s * sign_[pcol] == b_(col, pcol);
        }
        if (!ok) continue;
        if (chart_ && !tfun_[depth + 1].empty() && !t_check(depth, k, s)) continue;
        chosen_[col] = k;
        sign_[col] = s;
        place(depth + 1);
        chosen_[col] = -1;
        if (chart_) t_trim(depth);
        if (stop_) return;
      }
    }
  }

  /** Projection of T onto the Gram entries fixed by each placement prefix,
   * encoded as complement functionals (empty list = no constraint yet). Entry
   * order within the flat vectors: for placement depth p, the block
   * (c_p, c_0), ..., (c_p, c_{p-1}), (c_p, c_p) with c = order_. */
  void prepare_t_filter() {
    tbasis_ = chart_->basis();
    const int m = static_cast<int>(tbasis_.size());
    const int full = d_ * (d_ + 1) / 2;
    Mat rows(m, full);
    for (int r = 0; r < m; ++r) {
      int pos = 0;
      for (int p = 0; p < d_; ++p)
        for (int j = 0; j <= p; ++j) rows(r, pos++) = tbasis_[r](order_[p], order_[j]);
    }
    tfun_.assign(static_cast<std::size_t>(d_) + 1, {});
    for (int depth = 1; depth <= d_; ++depth) {
      const int len = depth * (depth + 1) / 2;
      Mat prefix(m, len);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < len; ++c) prefix(r, c) = rows(r, c);
      tfun_[depth] = kernel_basis(prefix);
    }
    tb_pool_.assign(pool_.size(), {});
    tb_ready_.assign(pool_.size(), 0);
    tentries_.assign(tbasis_.size(), {});
    for (auto& e : tentries_) e.reserve(static_cast<std::size_t>(full));
    tlen_ = 0;
  }

  void t_memo(int k) {
    if (tb_ready_[k]) return;
    const VecZ& v = pool_[k];
    tb_pool_[k].resize(tbasis_.size());
    for (std::size_t t = 0; t < tbasis_.size(); ++t) {
      VecR bv(d_);
      for (int i = 0; i < d_; ++i) {
        Rat acc = 0;
        for (int j = 0; j < d_; ++j) acc += tbasis_[t](i, j) * Rat(v[j]);
        bv[i] = acc;
      }
      tb_pool_[k][t] = std::move(bv);
    }
    tb_ready_[k] = 1;
  }

  /** Appends the Gram-entry block of every U^t b U for the column s*pool_[k]
   * placed at depth q (earlier columns read from chosen_/sign_). */
  void t_append(int q, int k, int s) {
    t_memo(k);
    const VecZ& v = pool_[k];
    for (std::size_t t = 0; t < tbasis_.size(); ++t) {
      auto& e = tentries_[t];
      for (int j = 0; j < q; ++j) {
        const VecR& bv = tb_pool_[chosen_[order_[j]]][t];
        Rat g = 0;
        for (int i = 0; i < d_; ++i) g += bv[i] * Rat(v[i]);
        e.push_back(g * (s * sign_[order_[j]]));
      }
      const VecR& bvk = tb_pool_[k][t];
      Rat diag = 0;
      for (int i = 0; i < d_; ++i) diag += bvk[i] * Rat(v[i]);
      e.push_back(std::move(diag));
    }
  }

  /** Entry blocks are materialized lazily: depths whose functional list is
   * empty cost nothing until a constrained depth catches the bookkeeping up. */
  bool t_check(int depth, int k, int s) {
    for (int q = tlen_; q < depth; ++q) t_append(q, chosen_[order_[q]], sign_[order_[q]]);
    t_append(depth, k, s);
    tlen_ = depth + 1;
    for (const VecR& f : tfun_[depth + 1]) {
      for (const auto& e : tentries_) {
        Rat acc = 0;
        for (std::size_t i = 0; i < f.size(); ++i)
          if (f[i] != 0) acc += f[i] * e[i];
        if (acc != 0) {
          t_trim(depth);
          return false;
        }
      }
    }
    return true;
  }

  void t_trim(int depth) {
    if (tlen_ <= depth) return;
    const std::size_t len = static_cast<std::size_t>(depth) * (depth + 1) / 2;
    for (auto& e : tentries_) e.resize(len);
    tlen_ = depth;
  }

  const QuadForm& a_;
  const QuadForm& b_;
  int d_;
  const CoordMap* chart_;
  std::vector<VecZ> pool_;
  std::vector<VecR> pool_av_;
  std::vector<Rat> pool_val_;
  std::vector<std::vector<int>> cand_;
  std::vector<int> order_;
  std::vector<int> chosen_;
  std::vector<int> sign_;
  std::vector<Mat> tbasis_;
  std::vector<std::vector<VecR>> tb_pool_;  // memo: tb_pool_[k][t] = tbasis_[t] * pool_[k]
  std::vector<char> tb_ready_;
  std::vector<VecR> tentries_;              // flat partial entries of U^t tbasis_[t] U
  std::vector<std::vector<VecR>> tfun_;     // complement functionals per depth
  int tlen_ = 0;                            // placement depths materialized in tentries_
  const std::function<bool(const Mat&)>* sink_ = nullptr;
  bool stop_ = false;
};

/** Gram keys are an equivalence invariant and O(pairs^2) to build, so callers
 * on the enumeration path precompute them once per form. */
inline bool isometry_prefilter(const QuadForm& a, const MinData& ma, const QuadForm& b,
                               const MinData& mb, const std::vector<Rat>* key_a = nullptr,
                               const std::vector<Rat>* key_b = nullptr) {
  if (a.dim() != b.dim()) return false;
  if (determinant(a) != determinant(b)) return false;
  if (ma.min_value != mb.min_value) return false;
  if (ma.vectors.size() != mb.vectors.size()) return false;
  std::vector<Rat> ka, kb;
  if (!key_a) ka = gram_key(a, ma);
  if (!key_b) kb = gram_key(b, mb);
  return (key_a ? *key_a : ka) == (key_b ? *key_b : kb);
}

/** Core search shared by the public entry points; T restricts accepted witnesses. */
inline std::optional<Mat> isometry_search(const QuadForm& a, const MinData& ma, const QuadForm& b,
                                          const MinData& mb, const CoordMap* t_chart,
                                          const std::vector<Rat>* key_a = nullptr,
                                          const std::vector<Rat>* key_b = nullptr) {
  if (!isometry_prefilter(a, ma, b, mb, key_a, key_b)) return std::nullopt;
  IsomSearch search(a, b, t_chart);
  if (!search.prepare()) return std::nullopt;
  std::optional<Mat> found;
  search.run([&](const Mat& u) {
    // One-time sanity check on the accepted witness (the search stops here);
    // T-preservation needs none: the full-depth functional test is exact.
    if (u.transposed() * a.mat() * u != b.mat())
      throw InternalErrorException("search produced a non-witness");
    found = u;
    return false;
  });
  return found;
}

}  // namespace detail

/** Witness U with U^t Q U = Q', or nullopt when the forms are inequivalent. */
inline std::optional<Mat> find_isometry(const QuadForm& q, const QuadForm& qp) {
  if (q.dim() != qp.dim()) return std::nullopt;
  if (!is_positive_definite(q) || !is_positive_definite(qp)) throw NotPositiveDefiniteException();
  return detail::isometry_search(q, minimum(q), qp, minimum(qp), nullptr);
}

inline bool are_equivalent(const QuadForm& q, const QuadForm& qp) {
  return find_isometry(q, qp).has_value();
}

/**
 * All U in GL_d(Z) with U^t Q U = Q. The order is reported when the full
 * enumeration finishes within `order_budget` elements; otherwise the order is
 * absent and `generators` holds the elements found so far. At most 128
 * elements are retained either way, which is a generating set whenever the
 * group has at most 128 elements; the order is always authoritative.
 */
inline IsometryGroup automorphism_group(const QuadForm& q, long long order_budget = 1000000) {
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const MinData md = minimum(q);
  detail::IsomSearch search(q, q);
  IsometryGroup g;
  if (!search.prepare()) return g;  // cannot happen: identity always matches
  long long count = 0;
  bool exhausted = true;
  search.run([&](const Mat& u) {
    count += 2;  // the first-column sign restriction hides -U
    if (g.generators.size() < 128) {
      g.generators.push_back(u);
      g.generators.push_back(u.scaled(Rat(-1)));
    }
    if (count >= order_budget) {
      exhausted = false;
      return false;
    }
    return true;
  });
  if (exhausted) g.order = count;
  return g;
}

/**
 * T-restricted equivalence: streams isometries U with U^t Q U = Q' and accepts
 * the first one mapping every basis element of T into span(T) (then automatically
 * U^t T U = T). Returns nullopt when no isometry preserves T.
 */
inline std::optional<Mat> t_equivalent(const QuadForm& q, const QuadForm& qp, const TSpace& t) {
  if (q.dim() != qp.dim() || q.dim() != t.dim_ambient) return std::nullopt;
  if (!is_positive_definite(q) || !is_positive_definite(qp)) throw NotPositiveDefiniteException();
  const CoordMap chart = t.chart();
  if (!chart.contains(q.mat()) || !chart.contains(qp.mat()))
    throw NotInSubspaceException("both forms must lie in T");
  return detail::isometry_search(q, minimum(q), qp, minimum(qp), &chart);
}

}  // namespace voroform
