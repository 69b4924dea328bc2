#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tspace.hpp"

namespace voroform {

/**
 * Form text format: the dimension d on the first line, then d rows of d
 * rationals ("p" or "p/q") separated by whitespace.
 */
inline QuadForm parse_form(std::istream& in) {
  long long d = 0;
  if (!(in >> d)) throw ParseException("expected the form dimension");
  if (d < 1 || d > 64) throw ParseException("form dimension out of range");
  Mat m(static_cast<int>(d), static_cast<int>(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      std::string tok;
      if (!(in >> tok)) throw ParseException("expected " + std::to_string(d * d) + " form entries");
      m(i, j) = parse_rational(tok);
    }
  try {
    return QuadForm(std::move(m));
  } catch (const DimensionMismatchException& e) {
    throw ParseException(e.what());
  }
}

inline QuadForm parse_form_text(const std::string& text) {
  std::istringstream in(text);
  return parse_form(in);
}

inline QuadForm read_form(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseException("cannot open form file: " + path);
  return parse_form(in);
}

inline void write_form(std::ostream& os, const QuadForm& q) {
  os << q.dim() << "\n";
  for (int i = 0; i < q.dim(); ++i) {
    for (int j = 0; j < q.dim(); ++j) os << (j ? " " : "") << rational_to_string(q(i, j));
    os << "\n";
  }
}

inline std::string form_to_text(const QuadForm& q) {
  std::ostringstream os;
  write_form(os, q);
  return os.str();
}

inline void write_form_file(const std::string& path, const QuadForm& q) {
  std::ofstream os(path);
  if (!os) throw ParseException("cannot write form file: " + path);
  write_form(os, q);
}

/**
 * Subspace file format: the ambient dimension d, then the number of basis
 * elements k, then k symmetric matrices each in the form text format (their
 * own leading dimension must repeat d). The basis is canonicalized and a
 * positive definite witness searched on load.
 */
inline TSpace parse_tspace(std::istream& in, long long witness_budget = 20000) {
  long long d = 0, k = 0;
  if (!(in >> d)) throw ParseException("expected the ambient dimension");
  if (d < 1 || d > 64) throw ParseException("ambient dimension out of range");
  if (!(in >> k)) throw ParseException("expected the number of basis matrices");
  if (k < 1 || k > d * (d + 1) / 2) throw ParseException("basis size out of range");
  std::vector<Mat> basis;
  basis.reserve(static_cast<std::size_t>(k));
  for (long long i = 0; i < k; ++i) {
    const QuadForm q = parse_form(in);
    if (q.dim() != d)
      throw ParseException("basis matrix " + std::to_string(i) + " has dimension " +
                           std::to_string(q.dim()) + ", expected " + std::to_string(d));
    basis.push_back(q.mat());
  }
  return tspace_from_basis(static_cast<int>(d), basis, witness_budget);
}

inline TSpace read_tspace(const std::string& path, long long witness_budget = 20000) {
  std::ifstream in(path);
  if (!in) throw ParseException("cannot open subspace file: " + path);
  return parse_tspace(in, witness_budget);
}

inline void write_tspace(std::ostream& os, const TSpace& t) {
  os << t.dim_ambient << "\n" << t.dim() << "\n";
  for (const Mat& b : t.basis) write_form(os, QuadForm(b));
}

}  // namespace voroform
