#ifndef QCN_LINALG_HPP
#define QCN_LINALG_HPP

#include <cstddef>
#include <vector>

#include "qcn/complex_matrix.hpp"

namespace qcn {

/// Tensor factorization of a square matrix: an ordered list of subsystem
/// dimensions whose product equals the matrix dimension. Subsystem 0 is the
/// most significant tensor factor, matching the |i1 i2 ... in> basis order.
class Factorization {
public:
  explicit Factorization(std::vector<std::size_t> dims);
  static Factorization qubits(std::size_t n);
  static Factorization single(std::size_t dim);

  std::size_t total_dim() const { return total_; }
  std::size_t count() const { return dims_.size(); }
  std::size_t operator[](std::size_t i) const { return dims_[i]; }
  const std::vector<std::size_t> &dims() const { return dims_; }

  /// Concatenation: factors of *this followed by factors of other.
  Factorization concat(const Factorization &other) const;

  /// Throws DimensionError unless total_dim() == m.dim().
  void require_matches(const ComplexMatrix &m) const;

  bool operator==(const Factorization &other) const {
    return dims_ == other.dims_;
  }

private:
  std::vector<std::size_t> dims_;
  std::size_t total_;
};

/// Kronecker product; subsystems of `a` become the most significant factors.
ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b);

/// Traces out every subsystem not listed in `keep` (indices into f, strictly
/// ascending). The result lives on the kept subsystems in their original
/// order; the full trace is preserved.
ComplexMatrix partial_trace(const ComplexMatrix &m, const Factorization &f,
                            const std::vector<std::size_t> &keep);

/// Transposes the single subsystem `which`; an involution.
ComplexMatrix partial_transpose(const ComplexMatrix &m, const Factorization &f,
                                std::size_t which);

/// Transposes every subsystem with index >= cut (the "B side").
ComplexMatrix partial_transpose_from(const ComplexMatrix &m,
                                     const Factorization &f, std::size_t cut);

/// Reorders tensor factors: new subsystem i is old subsystem perm[i].
ComplexMatrix permute_subsystems(const ComplexMatrix &m, const Factorization &f,
                                 const std::vector<std::size_t> &perm);

struct EigResult {
  std::vector<double> values; // ascending
  ComplexMatrix vectors;      // column k pairs with values[k]
};

/// Eigenvalues of a Hermitian matrix, ascending. Cyclic complex Jacobi;
/// convergence on the off-diagonal Frobenius norm. Throws ContractViolation
/// for non-Hermitian input (checked against hermitian_tol).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix &m,
                                          double convergence_tol = 1e-12,
                                          double hermitian_tol = kDefaultTol);

/// Same solver, also accumulating the eigenvector unitary.
EigResult hermitian_eig(const ComplexMatrix &m, double convergence_tol = 1e-12,
                        double hermitian_tol = kDefaultTol);

/// Trace norm of a Hermitian matrix (sum of |eigenvalues|). Non-Hermitian
/// inputs are rejected; nothing in this library needs the general SVD path.
double trace_norm(const ComplexMatrix &m, double hermitian_tol = kDefaultTol);

/// Dense inverse via Gauss-Jordan with partial pivoting. Throws
/// SingularMatrixError when a pivot vanishes or the 1-norm condition
/// estimate exceeds `condition_threshold`.
ComplexMatrix invert(const ComplexMatrix &m,
                     double condition_threshold = 1e12);

} // namespace qcn

#endif
