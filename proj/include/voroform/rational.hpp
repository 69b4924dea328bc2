#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <string>
#include <vector>

#include "errors.hpp"

namespace voroform {

using Int = boost::multiprecision::mpz_int;
using Rat = boost::multiprecision::mpq_rational;

using VecZ = std::vector<Int>;  // integer vector (lattice point)
using VecR = std::vector<Rat>;  // rational vector (coordinates, normals, rays)

/** Parse "p" or "p/q" with an optional leading minus sign; denominator must be positive. */
inline Rat parse_rational(const std::string& s) {
  if (s.empty()) throw ParseException("empty rational literal");
  const auto slash = s.find('/');
  const std::string num = slash == std::string::npos ? s : s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto valid_int = [](const std::string& t, bool allow_sign) {
    if (t.empty()) return false;
    std::size_t i = allow_sign && (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  if (!valid_int(num, true) || !valid_int(den, false))
    throw ParseException("bad rational literal '" + s + "'");
  Int d(den);
  if (d == 0) throw ParseException("zero denominator in '" + s + "'");
  return Rat(Int(num), d);
}

/** Canonical text form: "p" when the denominator is 1, else "p/q". */
inline std::string rational_to_string(const Rat& r) { return r.str(); }

/** Largest integer not exceeding r. */
inline Int floor_rat(const Rat& r) {
  Int q = numerator(r) / denominator(r);  // truncates toward zero
  if (r < 0 && q * denominator(r) != numerator(r)) --q;
  return q;
}

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }

/** Flip sign so the first nonzero entry is positive; zero vectors are left alone. */
template <typename Vec>
inline void canonicalize_sign(Vec& v) {
  for (const auto& x : v) {
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      return;
    }
  }
}

inline bool lex_less(const VecZ& a, const VecZ& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

inline bool lex_less_rat(const VecR& a, const VecR& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return a.size() < b.size();
}

/** Scale a rational vector by a positive factor so entries become coprime integers. */
inline VecR primitive_integer_vector(const VecR& v) {
  Int l = 1;
  for (const auto& x : v) l = lcm_int(l, denominator(x));
  Int g = 0;
  VecR w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    w[i] = v[i] * l;
    g = gcd_int(g, numerator(w[i]));
  }
  if (g > 1)
    for (auto& x : w) x /= g;
  return w;
}

}  // namespace voroform
