#include "qcn/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qcn/linalg.hpp"

namespace qcn {

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t dim = rows.size();
  ComplexMatrix m(dim);
  std::size_t r = 0;
  for (const auto &row : rows) {
    if (row.size() != dim)
      throw DimensionError("from_rows: ragged row in square matrix literal");
    std::size_t c = 0;
    for (const auto &v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

void ComplexMatrix::require_same_dim(const ComplexMatrix &other) const {
  if (dim_ != other.dim_)
    throw DimensionError("matrix dimension mismatch: " +
                         std::to_string(dim_) + " vs " +
                         std::to_string(other.dim_));
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix &other) const {
  require_same_dim(other);
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = data_[i] + other.data_[i];
  return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix &other) const {
  require_same_dim(other);
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = data_[i] - other.data_[i];
  return out;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
  require_same_dim(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
  require_same_dim(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix &other) const {
  require_same_dim(other);
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t k = 0; k < dim_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < dim_; ++c) out(r, c) += a * other(k, c);
    }
  }
  return out;
}

ComplexMatrix operator*(Complex scalar, const ComplexMatrix &m) {
  ComplexMatrix out(m.dim_);
  for (std::size_t i = 0; i < m.data_.size(); ++i)
    out.data_[i] = scalar * m.data_[i];
  return out;
}

ComplexMatrix operator*(double scalar, const ComplexMatrix &m) {
  return Complex(scalar, 0.0) * m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out.data_[i] = std::conj(data_[i]);
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto &v : data_) s += std::norm(v);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto &v : data_) m = std::max(m, std::abs(v));
  return m;
}

double ComplexMatrix::one_norm() const {
  double best = 0.0;
  for (std::size_t c = 0; c < dim_; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) s += std::abs((*this)(r, c));
    best = std::max(best, s);
  }
  return best;
}

bool ComplexMatrix::is_hermitian(double tol) const {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c)
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol)
        return false;
  return true;
}

bool ComplexMatrix::is_unitary(double tol) const {
  return max_abs_diff(adjoint() * (*this), identity(dim_)) <= tol;
}

bool ComplexMatrix::is_psd(double tol) const {
  if (!is_hermitian(tol)) return false;
  const auto evals = hermitian_eigenvalues(*this);
  return evals.empty() || evals.front() >= -tol;
}

bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
  return a.dim() == b.dim() && max_abs_diff(a, b) <= tol;
}

std::ostream &operator<<(std::ostream &os, const ComplexMatrix &m) {
  char buf[64];
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      const Complex v = m(r, c);
      std::snprintf(buf, sizeof(buf), "%s%10.4g%+.4gi", c ? "  " : "",
                    v.real(), v.imag());
      os << buf;
    }
    os << '\n';
  }
  return os;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

} // namespace qcn
