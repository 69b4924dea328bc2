#pragma once

#include <stdexcept>
#include <string>

namespace voroform {

class ParseException : public std::runtime_error {
 public:
  explicit ParseException(const std::string& what = "parse error") : std::runtime_error(what) {}
};

class DimensionMismatchException : public std::runtime_error {
 public:
  explicit DimensionMismatchException(const std::string& what = "dimension mismatch")
      : std::runtime_error(what) {}
};

class SingularMatrixException : public std::runtime_error {
 public:
  explicit SingularMatrixException(const std::string& what = "singular matrix")
      : std::runtime_error(what) {}
};

class NotPositiveDefiniteException : public std::runtime_error {
 public:
  explicit NotPositiveDefiniteException(const std::string& what = "form is not positive definite")
      : std::runtime_error(what) {}
};

class NonpositiveBoundException : public std::runtime_error {
 public:
  explicit NonpositiveBoundException(const std::string& what = "enumeration bound must be positive")
      : std::runtime_error(what) {}
};

class NotPointedException : public std::runtime_error {
 public:
  explicit NotPointedException(const std::string& what = "cone has a nontrivial lineality space")
      : std::runtime_error(what) {}
};

class NoHRepException : public std::runtime_error {
 public:
  explicit NoHRepException(const std::string& what = "cone carries no inequality description")
      : std::runtime_error(what) {}
};

class RayPsdException : public std::runtime_error {
 public:
  explicit RayPsdException(const std::string& what = "direction is positive semidefinite")
      : std::runtime_error(what) {}
};

class BudgetExceededException : public std::runtime_error {
 public:
  explicit BudgetExceededException(const std::string& what = "computation budget exceeded")
      : std::runtime_error(what) {}
};

class ClosureBudgetExceededException : public std::runtime_error {
 public:
  explicit ClosureBudgetExceededException(const std::string& what = "group closure budget exceeded")
      : std::runtime_error(what) {}
};

class EmptyPositivePartException : public std::runtime_error {
 public:
  explicit EmptyPositivePartException(const std::string& what =
                                          "no positive definite element found in subspace")
      : std::runtime_error(what) {}
};

class OddDimensionException : public std::runtime_error {
 public:
  explicit OddDimensionException(const std::string& what = "dimension must be even")
      : std::runtime_error(what) {}
};

class NotMultipleOf4Exception : public std::runtime_error {
 public:
  explicit NotMultipleOf4Exception(const std::string& what = "dimension must be a multiple of 4")
      : std::runtime_error(what) {}
};

class NoIndefiniteDirectionException : public std::runtime_error {
 public:
  explicit NoIndefiniteDirectionException(const std::string& what =
                                              "no indefinite direction in lineality space")
      : std::runtime_error(what) {}
};

class NotInSubspaceException : public std::runtime_error {
 public:
  explicit NotInSubspaceException(const std::string& what = "matrix is not in the subspace")
      : std::runtime_error(what) {}
};

class InternalErrorException : public std::runtime_error {
 public:
  explicit InternalErrorException(const std::string& what = "internal invariant violated")
      : std::runtime_error(what) {}
};

}  // namespace voroform
