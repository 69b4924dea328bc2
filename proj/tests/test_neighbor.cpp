#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "helpers.hpp"

using namespace voroform;

namespace {

bool in_min(const MinData& md, const VecZ& v) {
  return std::find(md.vectors.begin(), md.vectors.end(), v) != md.vectors.end();
}

// Check every contract of the neighbor step for one ray, with the critical
// value re-derived by an independent scan of the candidate vectors.
void check_edge(const QuadForm& q, const MinData& md, const Mat& r, const Rat& lam) {
  const NeighborResult res = neighbor(q, r, lam);
  REQUIRE(res.rho > 0);
  REQUIRE(res.qn.mat() == q.mat() + r.scaled(res.rho));

  // Minimum preserved exactly.
  const MinData mn = minimum(res.qn);
  REQUIRE(mn.min_value == lam);

  // Min grows: some new minimal vector not minimal for q.
  bool grew = false;
  for (const auto& v : mn.vectors)
    if (!in_min(md, v)) grew = true;
  REQUIRE(grew);

  // Candidate scan: every vector that can reach lam before rho satisfies
  // (Q + rho R)[v] <= lam, so enumerating those at rho and minimizing the
  // per-vector critical value recomputes rho.
  const QuadForm rform{r};
  Rat oracle = -1;
  for (const auto& v : vectors_below(res.qn, lam)) {
    const Rat rv = evaluate(rform, v);
    if (rv >= 0) continue;
    const Rat cand = (lam - evaluate(q, v)) / rv;
    REQUIRE(cand >= res.rho);  // nothing dips below lam earlier
    if (oracle < 0 || cand < oracle) oracle = cand;
  }
  REQUIRE(oracle == res.rho);

  // Strictly inside the edge the minimum is still lam and the minimal
  // vectors are exactly the old ones annihilated by the ray.
  const QuadForm mid = q.plus(res.rho / 2, r);
  const MinData mm = minimum(mid);
  REQUIRE(mm.min_value == lam);
  for (const auto& v : mm.vectors) {
    REQUIRE(in_min(md, v));
    REQUIRE(evaluate(rform, v) == 0);
  }
}

void check_all_rays(const QuadForm& q) {
  const MinData md = minimum(q);
  const CoordMap chart = CoordMap::full_space(q.dim());
  for (const auto& ray : extreme_rays(support_cone(md, chart))) {
    const Mat r = chart.to_matrix(ray);
    if (is_positive_semidefinite(QuadForm(r))) continue;
    check_edge(q, md, r, md.min_value);
  }
}

}  // namespace

TEST_CASE("neighbor contracts on the hexagonal form", "[neighbor]") {
  check_all_rays(vtest::a_root(2));
}

TEST_CASE("neighbor contracts in dimension 3", "[neighbor]") {
  check_all_rays(vtest::a_root(3));
}

TEST_CASE("neighbor contracts in dimension 4", "[neighbor]") {
  check_all_rays(vtest::a_root(4));
  check_all_rays(vtest::d4_root());
}

TEST_CASE("a positive semidefinite ray is rejected", "[neighbor]") {
  const QuadForm a2 = vtest::a_root(2);
  REQUIRE_THROWS_AS(neighbor(a2, Mat::identity(2), Rat(2)), RayPsdException);
}

TEST_CASE("a ray that lowers a current minimal vector is rejected", "[neighbor]") {
  const QuadForm a2 = vtest::a_root(2);
  const VecZ x{Int(1), Int(0)};
  const Mat r = QuadForm::rank_one(x).mat().scaled(Rat(-1));
  REQUIRE_THROWS_AS(neighbor(a2, r, Rat(2)), RayPsdException);
}

TEST_CASE("tight enumeration caps fall back to bisection with the same result", "[neighbor]") {
  const QuadForm a3 = vtest::a_root(3);
  const MinData md = minimum(a3);
  const CoordMap chart = CoordMap::full_space(3);
  for (const auto& ray : extreme_rays(support_cone(md, chart))) {
    const Mat r = chart.to_matrix(ray);
    if (is_positive_semidefinite(QuadForm(r))) continue;
    const NeighborResult fast = neighbor(a3, r, Rat(2));
    const NeighborResult slow = neighbor(a3, r, Rat(2), /*enum_cap=*/40);
    REQUIRE(fast.rho == slow.rho);
    REQUIRE(fast.qn == slow.qn);
  }
}

TEST_CASE("asymmetric ray matrices are rejected", "[neighbor]") {
  Mat r(2, 2);
  r(0, 1) = 1;
  REQUIRE_THROWS_AS(neighbor(vtest::a_root(2), r, Rat(2)), DimensionMismatchException);
}
