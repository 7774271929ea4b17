#ifndef QCN_COMPLEX_MATRIX_HPP
#define QCN_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <vector>

#include "qcn/errors.hpp"

namespace qcn {

using Complex = std::complex<double>;

/// Default tolerance for structural predicates (Hermitian, unitary, PSD, ...).
inline constexpr double kDefaultTol = 1e-9;

/// Dense square complex matrix, row-major storage.
///
/// This is the substrate for states, unitaries and Choi operators. All
/// operations return new values; nothing mutates shared data.
class ComplexMatrix {
public:
  ComplexMatrix() : dim_(0) {}
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static ComplexMatrix zero(std::size_t dim) { return ComplexMatrix(dim); }
  static ComplexMatrix identity(std::size_t dim);
  /// Builds from nested row lists; all rows must share the outer size.
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size(); }

  Complex &operator()(std::size_t r, std::size_t c) {
    return data_[r * dim_ + c];
  }
  const Complex &operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }

  const std::vector<Complex> &data() const { return data_; }
  std::vector<Complex> &data() { return data_; }

  ComplexMatrix operator+(const ComplexMatrix &other) const;
  ComplexMatrix operator-(const ComplexMatrix &other) const;
  ComplexMatrix operator*(const ComplexMatrix &other) const;
  ComplexMatrix &operator+=(const ComplexMatrix &other);
  ComplexMatrix &operator-=(const ComplexMatrix &other);
  friend ComplexMatrix operator*(Complex scalar, const ComplexMatrix &m);
  friend ComplexMatrix operator*(double scalar, const ComplexMatrix &m);

  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  ComplexMatrix adjoint() const;

  Complex trace() const;
  double frobenius_norm() const;
  /// Largest entry magnitude.
  double max_abs() const;
  /// Matrix 1-norm (maximum absolute column sum); used for condition
  /// estimates.
  double one_norm() const;

  bool is_hermitian(double tol = kDefaultTol) const;
  bool is_unitary(double tol = kDefaultTol) const;
  /// Positive semidefinite within tol: requires Hermitian and smallest
  /// eigenvalue >= -tol.
  bool is_psd(double tol = kDefaultTol) const;

private:
  std::size_t dim_;
  std::vector<Complex> data_;

  void require_same_dim(const ComplexMatrix &other) const;
};

/// Entrywise comparison: max |a_ij - b_ij| <= tol.
bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b,
                  double tol = kDefaultTol);

/// max |a_ij - b_ij| (infinity when dims differ).
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

/// Compact row-per-line "a+bi" dump; meant for debugging, not parsing.
std::ostream &operator<<(std::ostream &os, const ComplexMatrix &m);

} // namespace qcn

#endif
