#pragma once

#include <map>
#include <optional>

#include "cone.hpp"
#include "simplex.hpp"

namespace voroform {

/**
 * Outcome of the eutaxy test. Weights are per minimal vector, keyed by the
 * antipodal pair representative (x and -x share the weight), and are present
 * exactly when the form is eutactic; then sum over all +-x of alpha_x xx^t
 * equals Q^{-1} and every alpha_x >= objective > 0.
 */
struct EutaxyCertificate {
  enum class Status { eutactic, not_eutactic };
  Status status = Status::not_eutactic;
  std::optional<std::map<VecZ, Rat>> weights;
  Rat objective = 0;  // best achievable min weight; 0 when Q^{-1} is outside the affine span
};

/** Exact inverse form; the inverse of a symmetric matrix is symmetric. */
inline QuadForm inverse(const QuadForm& q) { return QuadForm(inverse(q.mat())); }

/**
 * Decides whether Q^{-1} lies in the relative interior of the Voronoi domain
 * cone{xx^t : x in Min Q}: maximize the smallest weight alpha_min subject to
 * alpha_x >= alpha_min and sum alpha_x xx^t = Q^{-1}. Eutactic iff the optimum
 * is positive. One LP variable per antipodal pair; the pair {+-x} contributes
 * 2 alpha_x xx^t to the sum.
 */
inline EutaxyCertificate is_eutactic(const QuadForm& q, const MinData& m) {
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const int d = q.dim();
  const std::size_t pairs = m.vectors.size();
  const std::size_t rows = static_cast<std::size_t>(d) * (d + 1) / 2;
  const QuadForm qinv = inverse(q);

  // Variables: slack s_p = alpha_p - alpha_min (one per pair), then u, v with
  // alpha_min = u - v. Equality system in the flat symmetric-matrix coordinates.
  Mat a(rows, pairs + 2);
  std::vector<VecR> cols(pairs);
  for (std::size_t p = 0; p < pairs; ++p) {
    Mat xxt(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) xxt(i, j) = Rat(2) * Rat(m.vectors[p][i]) * Rat(m.vectors[p][j]);
    cols[p] = CoordMap::full_coords(xxt);
  }
  for (std::size_t r = 0; r < rows; ++r) {
    Rat total = 0;
    for (std::size_t p = 0; p < pairs; ++p) {
      a(r, p) = cols[p][r];
      total += cols[p][r];
    }
    a(r, pairs) = total;
    a(r, pairs + 1) = -total;
  }
  const VecR b = CoordMap::full_coords(qinv.mat());
  VecR c(pairs + 2, Rat(0));
  c[pairs] = 1;
  c[pairs + 1] = -1;

  const LpResult lp = solve_lp_max(a, b, c);
  EutaxyCertificate cert;
  if (lp.status == LpResult::Status::infeasible) return cert;
  if (lp.status == LpResult::Status::unbounded)
    throw InternalErrorException("eutaxy LP unbounded despite the trace bound");

  cert.objective = lp.objective;
  if (lp.objective <= 0) return cert;

  // Certificate checks: exact re-substitution and the trace identity
  // <Q, Q^{-1}> = d, which pins the weight sum to d / (2 lambda).
  std::map<VecZ, Rat> w;
  Mat acc(d, d);
  Rat wsum = 0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const Rat alpha = lp.solution[p] + lp.objective;
    if (alpha < lp.objective) throw InternalErrorException("negative eutaxy slack");
    w.emplace(m.vectors[p], alpha);
    wsum += alpha;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        acc(i, j) += Rat(2) * alpha * Rat(m.vectors[p][i]) * Rat(m.vectors[p][j]);
  }
  if (acc != qinv.mat()) throw InternalErrorException("eutaxy weights fail re-substitution");
  if (wsum * 2 * m.min_value != d) throw InternalErrorException("eutaxy weights violate trace identity");

  cert.status = EutaxyCertificate::Status::eutactic;
  cert.weights = std::move(w);
  return cert;
}

enum class ExtremeClass { extreme, perfect_not_extreme, not_perfect };

/**
 * A form is a strict local maximum of the Hermite invariant iff it is both
 * perfect (support cone pointed, i.e. the xx^t span all of S^d) and eutactic.
 */
inline ExtremeClass classify_extreme(const QuadForm& q) {
  if (!is_positive_definite(q)) throw NotPositiveDefiniteException();
  const MinData md = minimum(q);
  const Cone pc = support_cone(md, CoordMap::full_space(q.dim()));
  if (!lineality_space(pc).empty()) return ExtremeClass::not_perfect;
  return is_eutactic(q, md).status == EutaxyCertificate::Status::eutactic
             ? ExtremeClass::extreme
             : ExtremeClass::perfect_not_extreme;
}

}  // namespace voroform
