#ifndef QCN_NOISE_HPP
#define QCN_NOISE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcn/channel.hpp"

namespace qcn {

enum class NoiseKind { PauliString, Depolarizing, Dephasing, AmplitudeDamping };

std::string to_string(NoiseKind kind);

/// Parametric noise descriptor. epsilon must stay strictly below the
/// family's inversion pole: 1/2 for Pauli strings, 1 for the others.
struct NoiseFamily {
  NoiseKind kind;
  std::size_t n = 1;
  double epsilon = 0.0;
  std::vector<int> axes; // PauliString only; one axis in {1,2,3} per qubit

  static NoiseFamily pauli_string(std::vector<int> axes, double epsilon);
  static NoiseFamily depolarizing(std::size_t n, double epsilon);
  static NoiseFamily dephasing(std::size_t n, double epsilon);
  static NoiseFamily amplitude_damping(std::size_t n, double epsilon);

  double epsilon_max() const {
    return kind == NoiseKind::PauliString ? 0.5 : 1.0;
  }
  std::size_t dim() const { return std::size_t{1} << n; }
  std::string label() const;

  /// Throws ContractViolation when the descriptor is out of range.
  void validate() const;
};

/// A built channel: its Choi operator, plus the signed mixed-unitary
/// decomposition when the family has one (all kinds except amplitude
/// damping, whose inverse is obtained numerically).
struct NoiseChannel {
  ChoiOperator choi;
  std::optional<MixedUnitaryDecomposition> decomposition;
};

NoiseChannel build_channel(const NoiseFamily &f);
NoiseChannel build_inverse(const NoiseFamily &f);

/// Signed weight list backing the inverse: the mixed-unitary weights for
/// Pauli/depolarizing/dephasing, and the tensored per-qubit quasi-probability
/// pair {1/(1-eps), -eps/(1-eps)} for amplitude damping.
std::vector<double> inverse_weights(const NoiseFamily &f);

/// Physical implementability of the inverse, closed form, in bits.
double nu_inverse(const NoiseFamily &f);

/// Root-mean-square estimator log2 sqrt(sum q_i^2) of the inverse weights.
double mu_inverse(const NoiseFamily &f);

/// Closed-form change of logarithmic negativity on the maximally entangled
/// state across the half cut (n even); always <= 0.
double max_entangled_delta(const NoiseFamily &f);

/// Decomposition of the inverse into product channels across the cut
/// (A = qubits [0, cut), B = the rest); the weight sum witnesses the eta
/// upper bound. For amplitude damping each qubit contributes the pair
/// {phase damping, reset-to-|0>} with weights {1/(1-eps), -eps/(1-eps)}.
std::vector<ProductChannelTerm> inverse_product_decomposition(
    const NoiseFamily &f, std::size_t cut);

} // namespace qcn

#endif
