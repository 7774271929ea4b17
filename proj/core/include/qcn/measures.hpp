#ifndef QCN_MEASURES_HPP
#define QCN_MEASURES_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "qcn/channel.hpp"

namespace qcn {

/// Expectation values over the non-identity Pauli strings, base-4 counting
/// order. Purity reconstructs as (1 + |r|^2) / d.
struct BlochVector {
  std::vector<double> components;
  double norm_squared() const;
  double norm() const;
};

/// Tr[rho^2].
double purity(const StateOperator &s);

/// Pauli-string expectation vector; qubit systems only.
BlochVector bloch_vector(const StateOperator &s);

/// E_N = log2 || rho^{T_B} ||_1 with B = subsystems [cut, end).
double log_negativity(const StateOperator &s, std::size_t cut);

/// Physical implementability of a map given as a mutually orthogonal
/// mixed-unitary decomposition: log2 sum|q_i|, cross-checked against the
/// trace-norm form log2(||Lambda||_1 / d). Refuses non-orthogonal
/// decompositions and decompositions that do not reproduce `c`.
double nu_orthogonal(const ChoiOperator &c,
                     const MixedUnitaryDecomposition &dec,
                     double tol = kDefaultTol);

/// Eigenvalue-based implementability bounds, all in bits. Lower bounds whose
/// linear-scale argument is non-positive carry no information and come out
/// as -infinity. The min-eigenvalue upper bound uses min(lambda_min, 0), so
/// a CP map gets the exact value 0.
struct ImplementabilityBounds {
  double lower_trace;   // log2(||Lambda||_1 / d)
  double upper_trace;   // log2 ||Lambda||_1
  double lower_max_eig; // log2(2 lambda_max / d - 1)
  double lower_min_eig; // log2(1 - 2 lambda_min / d)
  double upper_min_eig; // log2(1 - 2 min(lambda_min, 0) d)

  double best_lower() const;
  double best_upper() const;
};

ImplementabilityBounds nu_bounds(const ChoiOperator &c,
                                 double tol = kDefaultTol);

/// Upper bound on eta from a supplied decomposition into product channels:
/// validates every factor is CPTP and that the terms reproduce `target`,
/// then returns log2 sum|q_i|.
double eta_upper(const ChoiOperator &target,
                 const std::vector<ProductChannelTerm> &decomposition,
                 double tol = kDefaultTol);

/// log2 sqrt(sum q_i^2).
double mu_from_weights(const std::vector<double> &weights);

struct SeparabilityWitness {
  std::size_t i, j, k, l; // sigma indices of the offending block
  char side;              // 'A' or 'B': which partial trace failed to vanish
  double violation;
};

struct SeparabilityReport {
  bool satisfied;
  double max_violation;
  std::optional<SeparabilityWitness> witness; // present when violated
};

/// Necessary condition for a bipartite HPTP map to be separable: every
/// off-diagonal sigma block of the Choi operator must have vanishing partial
/// trace over the matching tau factor. A = subsystems [0, cut) of the
/// system.
SeparabilityReport separability_necessary(const ChoiOperator &c,
                                          std::size_t cut,
                                          double tol = kDefaultTol);

} // namespace qcn

#endif
