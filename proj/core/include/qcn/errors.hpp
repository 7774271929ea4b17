#ifndef QCN_ERRORS_HPP
#define QCN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Incompatible matrix/subsystem dimensions.
class DimensionError : public Error {
public:
  explicit DimensionError(const std::string &msg) : Error(msg) {}
};

/// An input violated a documented precondition (e.g. non-Hermitian matrix
/// passed to a Hermitian-only routine).
class ContractViolation : public Error {
public:
  explicit ContractViolation(const std::string &msg) : Error(msg) {}
};

/// Matrix inversion failed; carries the condition estimate that triggered
/// the rejection (+inf when a pivot vanished outright).
class SingularMatrixError : public Error {
public:
  SingularMatrixError(const std::string &msg, double condition_estimate)
      : Error(msg), condition_estimate(condition_estimate) {}
  double condition_estimate;
};

} // namespace qcn

#endif
