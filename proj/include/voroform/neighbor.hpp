#pragma once

#include "cone.hpp"
#include "shortvec.hpp"

namespace voroform {

struct NeighborResult {
  Rat rho;      // edge length: smallest rho > 0 with new minimal vectors
  QuadForm qn;  // Q + rho R, the contiguous form along the ray
};

/**
 * Neighbor determination along a ray. Given Q with lambda(Q) = lam and a
 * direction R with R[x] >= 0 on Min Q that is not positive semidefinite,
 * returns the unique rho > 0 with lambda(Q + rho R) = lam and
 * Min(Q + rho R) not contained in Min Q.
 *
 * Phase I follows the doubling/halving bracket: grow u while Q + uR stays
 * positive definite with unchanged minimum, halve toward the last good value
 * when definiteness fails. Phase II replaces plain bisection (which need not
 * terminate exactly) with the closed-form critical value: once some u gives a
 * positive definite form with lambda(Q + uR) < lam, every vector v that will
 * ever drop below lam satisfies (Q + uR)[v] <= lam already, because form values
 * are linear in u and only vectors with R[v] < 0 can decrease. Hence
 *     rho = min { (lam - Q[v]) / R[v] : (Q + uR)[v] <= lam, R[v] < 0 }
 * exactly. If that enumeration is too large (u deep inside the unstable range),
 * the bracket is tightened by exact bisection first; near rho the vector count
 * collapses to |Min(Q + rho R)|, so the loop terminates.
 */
inline NeighborResult neighbor(const QuadForm& q, const Mat& r, const Rat& lam,
                               long long enum_cap = 100000, int max_iter = 2000) {
  if (r.rows() != q.dim() || r.cols() != q.dim() || r != r.transposed())
    throw DimensionMismatchException("ray must be a symmetric d x d matrix");
  const QuadForm rform{r};
  if (is_positive_semidefinite(rform)) throw RayPsdException();

  Rat l = 0, u = 1;
  // Phase I: find u with Q + uR positive definite and lambda(Q + uR) < lam.
  int iter = 0;
  for (;; ++iter) {
    if (iter > max_iter) throw InternalErrorException("neighbor bracket did not converge");
    const QuadForm qu = q.plus(u, r);
    if (!is_positive_definite(qu)) {
      u = (l + u) / 2;
      continue;
    }
    const BoundedMin bm = min_below(qu, lam, enum_cap);
    if (bm.overflow) break;  // many vectors at or below lam: minimum dropped
    if (!bm.value || *bm.value == lam) {
      l = u;
      u = 2 * u;
      continue;
    }
    if (*bm.value > lam)
      throw InternalErrorException("minimum increased along ray; R[x] < 0 on Min Q?");
    break;
  }

  // Phase II: shrink the bracket until the candidate set fits, then take the
  // exact minimum of the per-vector critical values.
  for (;; ++iter) {
    if (iter > max_iter) throw InternalErrorException("neighbor refinement did not converge");
    const QuadForm qu = q.plus(u, r);
    const auto vecs = vectors_below_capped(qu, lam, enum_cap);
    if (!vecs) {
      const Rat g = (l + u) / 2;
      const BoundedMin bm = min_below(q.plus(g, r), lam, enum_cap);
      if (bm.overflow || (bm.value && *bm.value < lam))
        u = g;
      else
        l = g;
      continue;
    }
    Rat rho = -1;
    for (const auto& v : *vecs) {
      const Rat rv = evaluate(rform, v);
      if (rv >= 0) continue;
      const Rat cand = (lam - evaluate(q, v)) / rv;
      if (rho < 0 || cand < rho) rho = cand;
    }
    if (rho < 0)
      throw InternalErrorException("no decreasing vector although minimum dropped");
    if (rho == 0)
      throw RayPsdException("ray decreases a minimal vector of Q; not a feasible direction");
    return {rho, q.plus(rho, r)};
  }
}

}  // namespace voroform
