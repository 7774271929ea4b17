#ifndef QCN_PAULI_HPP
#define QCN_PAULI_HPP

#include <cstddef>
#include <vector>

#include "qcn/complex_matrix.hpp"

namespace qcn {

/// Single-qubit Pauli matrix; axis 0 = I, 1 = X, 2 = Y, 3 = Z.
ComplexMatrix pauli(int axis);

/// Tensor product of single-qubit Paulis; axes[0] is the most significant
/// factor (qubit 0).
ComplexMatrix pauli_string(const std::vector<int> &axes);

/// All 4^n axis strings in base-4 counting order (identity first). Index s
/// encodes axes via s = sum_k axes[k] * 4^(n-1-k), matching the Bloch-vector
/// component order.
std::vector<std::vector<int>> all_pauli_axes(std::size_t n);

/// Axis strings restricted to {0, 3} on every site, 2^n of them, identity
/// first.
std::vector<std::vector<int>> diagonal_pauli_axes(std::size_t n);

/// Maximally entangled n-qubit state vector (n even) across the half cut,
/// with mirrored pairing: qubit k is paired with qubit n-1-k, so the state
/// is a product of Bell pairs between the two halves. For n = 2 this is the
/// standard Bell state (|00> + |11>)/sqrt(2).
std::vector<Complex> max_entangled_state(std::size_t n);

/// |+...+> on n qubits.
std::vector<Complex> plus_state(std::size_t n);

/// Rank-1 projector |v><v| (v need not be normalized; it is used as given).
ComplexMatrix projector(const std::vector<Complex> &v);

} // namespace qcn

#endif
