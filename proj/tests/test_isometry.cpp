#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace voroform;
using vtest::Rng;

namespace {

bool is_witness(const QuadForm& a, const QuadForm& b, const Mat& u) {
  if (!u.is_integer()) return false;
  const Rat dv = det(u);
  if (dv != 1 && dv != -1) return false;
  return u.transposed() * a.mat() * u == b.mat();
}

// All integer matrices with entries in {-1, 0, 1}, streamed to a callback.
// Used as a brute-force equivalence oracle in dimension 2.
template <typename F>
void for_small_matrices(int d, F&& f) {
  const int cells = d * d;
  std::vector<int> e(cells, -1);
  while (true) {
    Mat u(d, d);
    for (int i = 0; i < cells; ++i) u(i / d, i % d) = e[i];
    if (!f(u)) return;
    int i = 0;
    while (i < cells && e[i] == 1) e[i++] = -1;
    if (i == cells) return;
    ++e[i];
  }
}

}  // namespace

TEST_CASE("equivalence witnesses on 100 random pairs", "[isometry]") {
  Rng rng(601);
  for (int it = 0; it < 100; ++it) {
    const int d = vtest::rand_int(rng, 2, 5);
    const QuadForm q = vtest::random_pd_form(rng, d);
    const Mat u = vtest::random_unimodular(rng, d);
    const QuadForm qt = q.transformed(u);
    const auto w = find_isometry(q, qt);
    REQUIRE(w.has_value());
    REQUIRE(is_witness(q, qt, *w));
    // And the reverse direction.
    const auto wr = find_isometry(qt, q);
    REQUIRE(wr.has_value());
    REQUIRE(is_witness(qt, q, *wr));
  }
}

TEST_CASE("determinant mismatch implies inequivalence", "[isometry]") {
  Rng rng(602);
  for (int it = 0; it < 30; ++it) {
    const int d = vtest::rand_int(rng, 2, 4);
    const QuadForm q = vtest::random_pd_form(rng, d);
    QuadForm q2 = q.scaled(Rat(4));  // same shape, different determinant
    REQUIRE_FALSE(are_equivalent(q, q2));
    REQUIRE_FALSE(find_isometry(q, q2).has_value());
  }
  REQUIRE_FALSE(are_equivalent(vtest::a_root(4), vtest::d4_root()));  // det 5 vs 4
}

TEST_CASE("brute-force oracle agreement in dimension 2", "[isometry]") {
  Rng rng(603);
  for (int it = 0; it < 50; ++it) {
    const QuadForm a = vtest::random_pd_form(rng, 2);
    const QuadForm b = vtest::random_pd_form(rng, 2);
    bool small_witness = false;
    for_small_matrices(2, [&](const Mat& u) {
      if (is_witness(a, b, u)) {
        small_witness = true;
        return false;
      }
      return true;
    });
    // The search is complete, so whenever the brute force finds any witness
    // the search must succeed as well (it may return a different one).
    if (small_witness) {
      const auto w = find_isometry(a, b);
      REQUIRE(w.has_value());
      REQUIRE(is_witness(a, b, *w));
    }
  }
}

TEST_CASE("equivalence is invariant under rescaling both sides", "[isometry]") {
  const QuadForm a2 = vtest::a_root(2);
  QuadForm twisted = a2.transformed(Mat::identity(2));
  REQUIRE(are_equivalent(a2.scaled(Rat(3, 7)), twisted.scaled(Rat(3, 7))));
}

TEST_CASE("automorphism groups of root lattices", "[isometry]") {
  const IsometryGroup a2 = automorphism_group(vtest::a_root(2));
  REQUIRE(a2.order == 12);
  const IsometryGroup z2 = automorphism_group(QuadForm::identity(2));
  REQUIRE(z2.order == 8);
  const IsometryGroup a3 = automorphism_group(vtest::a_root(3));
  REQUIRE(a3.order == 48);
  const IsometryGroup d4 = automorphism_group(vtest::d4_root());
  REQUIRE(d4.order == 1152);
  // Every stored element preserves the form.
  const QuadForm q = vtest::d4_root();
  REQUIRE_FALSE(d4.generators.empty());
  for (const auto& g : d4.generators) REQUIRE(is_witness(q, q, g));
}

TEST_CASE("automorphism order is invariant under basis change", "[isometry]") {
  Rng rng(604);
  const QuadForm a3 = vtest::a_root(3);
  for (int it = 0; it < 5; ++it) {
    const Mat u = vtest::random_unimodular(rng, 3);
    REQUIRE(automorphism_group(a3.transformed(u)).order == 48);
  }
}

TEST_CASE("exhausted budget leaves the order unknown", "[isometry]") {
  const IsometryGroup g = automorphism_group(vtest::d4_root(), 10);
  REQUIRE_FALSE(g.order.has_value());
  REQUIRE_FALSE(g.generators.empty());  // partial elements still reported
}

TEST_CASE("subspace-restricted equivalence", "[isometry]") {
  const TSpace t = invariant_space(eisenstein_group(2), 10000, "eisenstein");
  const QuadForm w(t.pd_witness);
  // Scale to minimum 2 for a clean fixture.
  const MinData md = minimum(w);
  const QuadForm q = w.scaled(Rat(2) / md.min_value);

  const auto self = t_equivalent(q, q, t);
  REQUIRE(self.has_value());
  REQUIRE(is_witness(q, q, *self));

  // A form outside the subspace is rejected outright.
  REQUIRE_THROWS_AS(t_equivalent(q, QuadForm::identity(2).scaled(Rat(2)), t),
                    NotInSubspaceException);
}

TEST_CASE("subspace witness conjugates the chart into itself", "[isometry]") {
  // Gaussian structure in dimension 4: witness must commute with the chart,
  // i.e. U^t B U stays in the span of the invariant basis for each basis form.
  const TSpace t = invariant_space(gaussian_group(4), 10000, "gaussian");
  const QuadForm w(t.pd_witness);
  const MinData md = minimum(w);
  const QuadForm q = w.scaled(Rat(2) / md.min_value);
  const auto u = t_equivalent(q, q, t);
  REQUIRE(u.has_value());
  const CoordMap chart = t.chart();
  for (const auto& b : t.basis) {
    const Mat image = u->transposed() * b * *u;
    REQUIRE(chart.contains(image));
  }
}
