#pragma once

// Shared generators for the property tests: deterministic RNG, random
// positive definite forms, random unimodular matrices.

#include <random>

#include <voroform.hpp>

namespace vtest {

using namespace voroform;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

/** Random integer positive definite form: B^t B + I with small random B. */
inline QuadForm random_pd_form(Rng& rng, int d, int entry_range = 2) {
  Mat b(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b(i, j) = rand_int(rng, -entry_range, entry_range);
  Mat g = b.transposed() * b + Mat::identity(d);
  return QuadForm(std::move(g));
}

/** Random unimodular matrix: product of `steps` elementary shears and swaps. */
inline Mat random_unimodular(Rng& rng, int d, int steps = 6) {
  Mat u = Mat::identity(d);
  for (int s = 0; s < steps; ++s) {
    const int kind = rand_int(rng, 0, 3);
    Mat e = Mat::identity(d);
    if (kind <= 1) {  // shear: row i += c * row j
      int i = rand_int(rng, 0, d - 1);
      int j = rand_int(rng, 0, d - 1);
      if (i == j) continue;
      e(i, j) = rand_int(rng, -2, 2);
    } else if (kind == 2) {  // swap two rows (det -1, still unimodular)
      int i = rand_int(rng, 0, d - 1);
      int j = rand_int(rng, 0, d - 1);
      if (i == j) continue;
      e(i, i) = e(j, j) = 0;
      e(i, j) = e(j, i) = 1;
    } else {  // flip a sign
      int i = rand_int(rng, 0, d - 1);
      e(i, i) = -1;
    }
    u = u * e;
  }
  return u;
}

/** Random integer vector with entries in [-r, r], not all zero. */
inline VecZ random_vec(Rng& rng, int d, int r = 3) {
  VecZ x(d, Int(0));
  bool nonzero = false;
  while (!nonzero) {
    for (int i = 0; i < d; ++i) {
      x[i] = rand_int(rng, -r, r);
      if (x[i] != 0) nonzero = true;
    }
  }
  return x;
}

/** Gram matrices of the standard root lattices used as fixtures. */
inline QuadForm a_root(int d) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = 2;
    if (i + 1 < d) m(i, i + 1) = m(i + 1, i) = -1;
  }
  return QuadForm(std::move(m));
}

inline QuadForm d4_root() {
  Mat m(4, 4);
  for (int i = 0; i < 4; ++i) m(i, i) = 2;
  m(0, 1) = m(1, 0) = -1;
  m(1, 2) = m(2, 1) = -1;
  m(1, 3) = m(3, 1) = -1;
  return QuadForm(std::move(m));
}

inline QuadForm e6_root() {
  // Chain 0-2-3-4-5 with node 1 attached to node 3.
  Mat m(6, 6);
  for (int i = 0; i < 6; ++i) m(i, i) = 2;
  auto link = [&m](int i, int j) { m(i, j) = m(j, i) = -1; };
  link(0, 2);
  link(1, 3);
  link(2, 3);
  link(3, 4);
  link(4, 5);
  return QuadForm(std::move(m));
}

}  // namespace vtest
