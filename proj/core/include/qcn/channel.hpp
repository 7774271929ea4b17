#ifndef QCN_CHANNEL_HPP
#define QCN_CHANNEL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcn/complex_matrix.hpp"
#include "qcn/linalg.hpp"

namespace qcn {

/// Choi operator of a linear map on a d-dimensional system, stored as the
/// d^2 x d^2 matrix over (sigma ⊗ tau) composite indices with sigma
/// block-major:
///
///   <i_sigma k_tau| L |j_sigma l_tau> = <k| N(|i><j|) |l>
///
/// so that applying the map is a literal partial trace over sigma. The
/// system factorization is kept for bipartite operations (partial transpose
/// of maps, separability checks).
class ChoiOperator {
public:
  ChoiOperator(ComplexMatrix matrix, Factorization system);

  std::size_t system_dim() const { return system_.total_dim(); }
  const ComplexMatrix &matrix() const { return matrix_; }
  const Factorization &system() const { return system_; }

  /// Factorization of the Choi matrix itself: sigma factors then tau factors.
  Factorization full_factorization() const { return system_.concat(system_); }

private:
  ComplexMatrix matrix_;
  Factorization system_;
};

/// Operator-sum representation: a nonempty list of Kraus operators on a
/// common dimension.
class KrausChannel {
public:
  explicit KrausChannel(std::vector<ComplexMatrix> ops);

  const std::vector<ComplexMatrix> &ops() const { return ops_; }
  std::size_t dim() const { return ops_.front().dim(); }

  /// Completeness sum_i E_i^dag E_i = I within tol (the TP condition).
  bool is_complete(double tol = kDefaultTol) const;

private:
  std::vector<ComplexMatrix> ops_;
};

struct MixedUnitaryTerm {
  double weight;
  ComplexMatrix unitary;
};

/// Signed-weight list of unitaries {(q_i, U_i)} representing
/// N(rho) = sum_i q_i U_i rho U_i^dag. Weights must sum to 1 (TP); they may
/// be negative, in which case the map is HPTP but not a channel.
class MixedUnitaryDecomposition {
public:
  explicit MixedUnitaryDecomposition(std::vector<MixedUnitaryTerm> terms,
                                     double tol = kDefaultTol);

  const std::vector<MixedUnitaryTerm> &terms() const { return terms_; }
  std::size_t dim() const { return terms_.front().unitary.dim(); }
  std::size_t size() const { return terms_.size(); }

  double weight_sum() const;
  double abs_weight_sum() const;
  double squared_weight_sum() const;
  std::vector<double> weights() const;

  /// Mutual orthogonality Tr[U_i^dag U_j] = d delta_ij within tol*d.
  bool is_orthogonal(double tol = kDefaultTol) const;

private:
  std::vector<MixedUnitaryTerm> terms_;
};

/// Hermitian unit-trace operator with subsystem structure. `physical()` is a
/// PSD verdict at tolerance 1e-9: eigenvalues in [-1e-9, 0) count as zero
/// for the flag, but the stored matrix is never clamped.
class StateOperator {
public:
  StateOperator(ComplexMatrix matrix, Factorization factorization,
                double tol = kDefaultTol);

  /// Projector onto the given amplitude vector (normalized here).
  static StateOperator pure(const std::vector<Complex> &amplitudes,
                            Factorization factorization);
  static StateOperator maximally_mixed(Factorization factorization);

  const ComplexMatrix &matrix() const { return matrix_; }
  const Factorization &factorization() const { return fact_; }
  std::size_t dim() const { return matrix_.dim(); }
  bool physical() const { return physical_; }

private:
  ComplexMatrix matrix_;
  Factorization fact_;
  bool physical_;
};

/// One term of a signed decomposition into product channels
/// q * (T_A ⊗ T_B).
struct ProductChannelTerm {
  double weight;
  ChoiOperator factor_a;
  ChoiOperator factor_b;
};

// --- construction -----------------------------------------------------------

ChoiOperator choi_from_kraus(const KrausChannel &k, Factorization system);
ChoiOperator choi_from_mixed_unitary(const MixedUnitaryDecomposition &m,
                                     Factorization system);
ChoiOperator identity_channel(Factorization system);
/// Conjugation by a single unitary.
ChoiOperator unitary_channel(const ComplexMatrix &u, Factorization system);

// --- action and algebra -----------------------------------------------------

/// N(rho) = Tr_sigma[(rho^T ⊗ I_tau) Lambda] on a raw matrix.
ComplexMatrix apply(const ChoiOperator &c, const ComplexMatrix &rho);
/// Same, preserving state metadata; the physical flag of the output is
/// recomputed.
StateOperator apply(const ChoiOperator &c, const StateOperator &s);

/// Composition a after b.
ChoiOperator compose(const ChoiOperator &a, const ChoiOperator &b);

/// Tensor of two maps; sigma indices of both factors group before tau
/// indices, so the result acts on the concatenated system.
ChoiOperator tensor(const ChoiOperator &a, const ChoiOperator &b);

/// Inverse map via the transfer-matrix route. Throws SingularMatrixError for
/// non-invertible channels.
ChoiOperator inverse(const ChoiOperator &c, double condition_threshold = 1e12);

/// Transfer (superoperator) matrix over row-major vectorization:
/// vec(N(rho)) = S vec(rho) with S[(k,l),(i,j)] = Lambda[(i,k),(j,l)].
ComplexMatrix choi_to_transfer(const ChoiOperator &c);
ChoiOperator transfer_to_choi(const ComplexMatrix &s, Factorization system);

// --- predicates -------------------------------------------------------------

bool is_hp(const ChoiOperator &c, double tol = kDefaultTol);
bool is_tp(const ChoiOperator &c, double tol = kDefaultTol);
bool is_cp(const ChoiOperator &c, double tol = kDefaultTol);

// --- bipartite structure ----------------------------------------------------

/// Partial transpose of the map: transposes system subsystem `which` on both
/// the sigma and tau copies of the Choi matrix.
ChoiOperator map_partial_transpose(const ChoiOperator &c, std::size_t which);

/// Transposes every system subsystem with index >= cut ("the B side").
ChoiOperator map_partial_transpose_from(const ChoiOperator &c,
                                        std::size_t cut);

// --- serialization ----------------------------------------------------------

/// JSON layout: {"d": int, "factorization": [int...],
///               "matrix": [[re, im] x d^4]} with row-major entries over the
/// (sigma ⊗ tau) composite index.
std::string choi_to_json_string(const ChoiOperator &c, int indent = 2);
ChoiOperator choi_from_json_string(const std::string &text);
ChoiOperator load_choi_file(const std::string &path);
void save_choi_file(const std::string &path, const ChoiOperator &c);

} // namespace qcn

#endif
