#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "quadform.hpp"

namespace voroform {

/** Certified arithmetical minimum lambda(Q) together with Min Q (one vector per +-pair). */
struct MinData {
  Rat min_value;
  std::vector<VecZ> vectors;  // sign-normalized (first nonzero > 0), lexicographically sorted
};

namespace detail {

struct ShortVecEnum {
  long long cap;  // 0 = unlimited
  int n;
  // The level-i test "outer_i (t - center_i)^2 <= budget" is run with every
  // quantity scaled by K = G^3 den(c), G = lcm of the expansion denominators:
  // centers carry a factor G, outer coefficients G den(c), budgets K. The
  // scale is positive and fixed, so the accepted coordinate ranges -- and
  // hence the output -- are exactly those of the rational test, but the
  // recursion works in integers and avoids per-operation gcd normalization.
  VecZ outer_s;            // outer_i * G * den(c)
  std::vector<Int> inner_s;  // alpha_ij * G, flattened at i*n+j (i < j)
  Int scale;               // G
  Int kscale;              // K = G^3 den(c)
  Int budget0;             // K * c = G^3 num(c)
  VecZ x;
  std::vector<VecZ> out;
  std::vector<Int> vals;  // K * Q[x] parallel to out, kept when collect_values
  bool collect_values = false;
  bool overflow = false;

  ShortVecEnum(const LagrangeExpansion& ee, const Rat& c, long long cp)
      : cap(cp), n(static_cast<int>(ee.outer.size())), x(n, Int(0)) {
    Int g = 1;
    for (int i = 0; i < n; ++i) {
      g = lcm_int(g, denominator(ee.outer[i]));
      for (int j = i + 1; j < n; ++j) g = lcm_int(g, denominator(ee.inner(i, j)));
    }
    scale = g;
    const Int dc = denominator(c);
    outer_s.resize(n);
    for (int i = 0; i < n; ++i)
      outer_s[i] = numerator(ee.outer[i]) * (g / denominator(ee.outer[i])) * dc;
    inner_s.assign(static_cast<std::size_t>(n) * n, Int(0));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        inner_s[static_cast<std::size_t>(i) * n + j] =
            numerator(ee.inner(i, j)) * (g / denominator(ee.inner(i, j)));
    kscale = g * g * g * dc;
    budget0 = g * g * g * numerator(c);
  }

  // Enumerate level i (coordinates x_{i+1}..x_{n-1} already fixed); zero_above
  // restricts x_i >= 0 to emit one representative per antipodal pair.
  void level(int i, const Int& budget, bool zero_above) {
    if (overflow) return;
    Int center = 0;  // G * (true center)
    if (!zero_above)
      for (int j = i + 1; j < n; ++j)
        if (x[j] != 0) center += inner_s[static_cast<std::size_t>(i) * n + j] * x[j];
    Int t0 = center / scale;  // floor(center / G); division truncates toward zero
    if (center < 0 && t0 * scale != center) --t0;
    auto fits = [&](const Int& t) {
      const Int dev = t * scale - center;
      return outer_s[i] * dev * dev <= budget;
    };
    auto step = [&](const Int& t) {
      const Int dev = t * scale - center;
      const Int rem = budget - outer_s[i] * dev * dev;
      x[i] = t;
      if (i == 0)
        emit(zero_above && t == 0, rem);
      else
        level(i - 1, rem, zero_above && t == 0);
      x[i] = 0;
    };
    if (zero_above) {
      for (Int t = 0; fits(t) && !overflow; ++t) step(t);
    } else {
      for (Int t = t0; fits(t) && !overflow; --t) step(t);
      for (Int t = t0 + 1; fits(t) && !overflow; ++t) step(t);
    }
  }

  void emit(bool is_zero, const Int& rem) {
    if (is_zero) return;  // the zero vector is excluded
    VecZ v = x;
    canonicalize_sign(v);
    out.push_back(std::move(v));
    if (collect_values) vals.push_back(budget0 - rem);  // = K * Q[x]
    if (cap > 0 && static_cast<long long>(out.size()) > cap) overflow = true;
  }
};

}  // namespace detail

/**
 * All x in Z^d \ {0} with Q[x] <= C, one representative per antipodal pair,
 * sign-normalized and lexicographically sorted. Coordinate ranges follow the
 * Lagrange expansion with all bounds compared as exact squares. When `cap` is
 * positive and more than `cap` pairs exist, nullopt is returned instead.
 */
inline std::optional<std::vector<VecZ>> vectors_below_capped(const QuadForm& q, const Rat& c,
                                                             long long cap) {
  if (c <= 0) throw NonpositiveBoundException();
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const LagrangeExpansion e = lagrange_expansion(q);
  detail::ShortVecEnum en(e, c, cap);
  en.level(q.dim() - 1, en.budget0, true);
  if (en.overflow) return std::nullopt;
  std::sort(en.out.begin(), en.out.end(), lex_less);
  return std::move(en.out);
}

inline std::vector<VecZ> vectors_below(const QuadForm& q, const Rat& c) {
  return *vectors_below_capped(q, c, 0);
}

/**
 * Smallest value of Q on Z^d \ {0} plus all pairs attaining it; certified by
 * enumerating below C = min_i q_ii, which some unit vector attains.
 */
inline MinData minimum(const QuadForm& q) {
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  Rat c = q(0, 0);
  for (int i = 1; i < q.dim(); ++i) c = std::min(c, q(i, i));
  const LagrangeExpansion e = lagrange_expansion(q);
  detail::ShortVecEnum en(e, c, 0);
  en.collect_values = true;
  en.level(q.dim() - 1, en.budget0, true);
  // Some unit vector attains c, so the enumeration is never empty; the scaled
  // values decide the minimum and its attaining set without re-evaluating Q.
  std::size_t arg = 0;
  for (std::size_t k = 1; k < en.vals.size(); ++k)
    if (en.vals[k] < en.vals[arg]) arg = k;
  MinData m;
  m.min_value = Rat(en.vals[arg]) / Rat(en.kscale);
  for (std::size_t k = 0; k < en.vals.size(); ++k)
    if (en.vals[k] == en.vals[arg]) m.vectors.push_back(std::move(en.out[k]));
  std::sort(m.vectors.begin(), m.vectors.end(), lex_less);
  return m;
}

/**
 * min(lambda(Q), bound_probe) helper for the neighbor step: returns the smallest
 * form value at most `limit` (nullopt when no nonzero vector reaches `limit`,
 * i.e. lambda(Q) > limit). `cap` as in vectors_below_capped; overflow reports
 * "more than cap pairs at or below limit" via the second flag.
 */
struct BoundedMin {
  std::optional<Rat> value;  // nullopt: lambda > limit
  bool overflow = false;
};

inline BoundedMin min_below(const QuadForm& q, const Rat& limit, long long cap = 0) {
  if (limit <= 0) throw NonpositiveBoundException();
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const LagrangeExpansion e = lagrange_expansion(q);
  detail::ShortVecEnum en(e, limit, cap);
  en.collect_values = true;
  en.level(q.dim() - 1, en.budget0, true);
  BoundedMin r;
  if (en.overflow) {
    r.overflow = true;
    return r;
  }
  if (!en.vals.empty()) {
    std::size_t arg = 0;
    for (std::size_t k = 1; k < en.vals.size(); ++k)
      if (en.vals[k] < en.vals[arg]) arg = k;
    r.value = Rat(en.vals[arg]) / Rat(en.kscale);
  }
  return r;
}

}  // namespace voroform
