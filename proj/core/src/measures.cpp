#include "qcn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qcn/pauli.hpp"

namespace qcn {

namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2_or_neg_inf(double x) {
  return x > 0.0 ? std::log(x) * kLog2e : kNegInf;
}

} // namespace

double BlochVector::norm_squared() const {
  double s = 0.0;
  for (double v : components) s += v * v;
  return s;
}

double BlochVector::norm() const { return std::sqrt(norm_squared()); }

double purity(const StateOperator &s) {
  // Tr[rho^2] = ||rho||_F^2 for Hermitian rho.
  const double f = s.matrix().frobenius_norm();
  return f * f;
}

BlochVector bloch_vector(const StateOperator &s) {
  for (std::size_t dim : s.factorization().dims())
    if (dim != 2)
      throw ContractViolation("bloch_vector: qubit systems only");
  const std::size_t n = s.factorization().count();
  const auto axes_set = all_pauli_axes(n);
  BlochVector r;
  r.components.reserve(axes_set.size() - 1);
  for (std::size_t idx = 1; idx < axes_set.size(); ++idx) {
    const ComplexMatrix op = pauli_string(axes_set[idx]);
    Complex expectation{};
    // Tr[rho O] without forming the product matrix.
    for (std::size_t a = 0; a < op.dim(); ++a)
      for (std::size_t b = 0; b < op.dim(); ++b)
        expectation += s.matrix()(a, b) * op(b, a);
    r.components.push_back(expectation.real());
  }
  return r;
}

double log_negativity(const StateOperator &s, std::size_t cut) {
  const Factorization &f = s.factorization();
  if (cut == 0 || cut >= f.count())
    throw ContractViolation("log_negativity: cut must split the subsystems");
  const ComplexMatrix pt = partial_transpose_from(s.matrix(), f, cut);
  return std::log(trace_norm(pt)) * kLog2e;
}

double nu_orthogonal(const ChoiOperator &c,
                     const MixedUnitaryDecomposition &dec, double tol) {
  if (!dec.is_orthogonal(tol))
    throw ContractViolation(
        "nu_orthogonal: decomposition is not mutually orthogonal; "
        "use nu_bounds instead");
  const ChoiOperator rebuilt = choi_from_mixed_unitary(dec, c.system());
  const double scale = std::max(1.0, c.matrix().max_abs());
  if (max_abs_diff(rebuilt.matrix(), c.matrix()) > tol * scale)
    throw ContractViolation(
        "nu_orthogonal: decomposition does not reproduce the map");

  const double from_weights = std::log(dec.abs_weight_sum()) * kLog2e;
  const double from_norm =
      std::log(trace_norm(c.matrix()) /
               static_cast<double>(c.system_dim())) *
      kLog2e;
  if (std::abs(from_weights - from_norm) > 1e-9)
    throw Error("nu_orthogonal: weight sum and trace norm disagree (" +
                std::to_string(from_weights) + " vs " +
                std::to_string(from_norm) + ")");
  return from_weights;
}

double ImplementabilityBounds::best_lower() const {
  return std::max({lower_trace, lower_max_eig, lower_min_eig});
}

double ImplementabilityBounds::best_upper() const {
  return std::min(upper_trace, upper_min_eig);
}

ImplementabilityBounds nu_bounds(const ChoiOperator &c, double tol) {
  if (!is_hp(c, tol))
    throw ContractViolation("nu_bounds: map is not Hermitian-preserving");
  const double d = static_cast<double>(c.system_dim());
  const auto evals = hermitian_eigenvalues(c.matrix());
  double norm1 = 0.0;
  for (double v : evals) norm1 += std::abs(v);
  const double lmin = evals.front();
  const double lmax = evals.back();

  ImplementabilityBounds b{};
  b.lower_trace = log2_or_neg_inf(norm1 / d);
  b.upper_trace = log2_or_neg_inf(norm1);
  b.lower_max_eig = log2_or_neg_inf(2.0 * lmax / d - 1.0);
  b.lower_min_eig = log2_or_neg_inf(1.0 - 2.0 * lmin / d);
  b.upper_min_eig = log2_or_neg_inf(1.0 - 2.0 * std::min(lmin, 0.0) * d);
  return b;
}

double eta_upper(const ChoiOperator &target,
                 const std::vector<ProductChannelTerm> &decomposition,
                 double tol) {
  if (decomposition.empty())
    throw ContractViolation("eta_upper: empty decomposition");

  ComplexMatrix sum(target.matrix().dim());
  double abs_weights = 0.0;
  for (const auto &term : decomposition) {
    if (!is_cp(term.factor_a, tol) || !is_tp(term.factor_a, tol) ||
        !is_cp(term.factor_b, tol) || !is_tp(term.factor_b, tol))
      throw ContractViolation("eta_upper: non-CPTP factor in decomposition");
    const ChoiOperator product = tensor(term.factor_a, term.factor_b);
    if (product.system_dim() != target.system_dim())
      throw DimensionError("eta_upper: factor dims do not match target");
    sum += term.weight * product.matrix();
    abs_weights += std::abs(term.weight);
  }
  const double scale = std::max(1.0, target.matrix().max_abs());
  if (max_abs_diff(sum, target.matrix()) > tol * scale)
    throw ContractViolation(
        "eta_upper: decomposition does not reproduce the target map");
  return std::log(abs_weights) * kLog2e;
}

double mu_from_weights(const std::vector<double> &weights) {
  if (weights.empty())
    throw ContractViolation("mu_from_weights: empty weight list");
  double s = 0.0;
  for (double q : weights) s += q * q;
  return 0.5 * std::log(s) * kLog2e;
}

SeparabilityReport separability_necessary(const ChoiOperator &c,
                                          std::size_t cut, double tol) {
  const Factorization &sys = c.system();
  if (sys.count() < 2 || cut == 0 || cut >= sys.count())
    throw ContractViolation(
        "separability_necessary: need a bipartite factorization");

  std::size_t da = 1, db = 1;
  for (std::size_t i = 0; i < sys.count(); ++i)
    (i < cut ? da : db) *= sys[i];
  const std::size_t d = da * db;
  const ComplexMatrix &lambda = c.matrix();
  const auto entry = [&](std::size_t si, std::size_t sk, std::size_t ta,
                         std::size_t tb, std::size_t sj, std::size_t sl,
                         std::size_t tc, std::size_t te) {
    const std::size_t row = (si * db + sk) * d + (ta * db + tb);
    const std::size_t col = (sj * db + sl) * d + (tc * db + te);
    return lambda(row, col);
  };

  SeparabilityReport report{true, 0.0, std::nullopt};
  const auto record = [&](double violation, std::size_t i, std::size_t j,
                          std::size_t k, std::size_t l, char side) {
    if (violation > report.max_violation) {
      report.max_violation = violation;
      report.witness = SeparabilityWitness{i, j, k, l, side, violation};
    }
  };

  // Condition on A: for i != j, Tr_{A tau}[O_{ijkl}] must vanish.
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          double block_max = 0.0;
          for (std::size_t b = 0; b < db; ++b)
            for (std::size_t e = 0; e < db; ++e) {
              Complex sum{};
              for (std::size_t a = 0; a < da; ++a)
                sum += entry(i, k, a, b, j, l, a, e);
              block_max = std::max(block_max, std::abs(sum));
            }
          record(block_max, i, j, k, l, 'A');
        }
    }

  // Condition on B: for k != l, Tr_{B tau}[O_{ijkl}] must vanish.
  for (std::size_t k = 0; k < db; ++k)
    for (std::size_t l = 0; l < db; ++l) {
      if (k == l) continue;
      for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
          double block_max = 0.0;
          for (std::size_t a = 0; a < da; ++a)
            for (std::size_t cc = 0; cc < da; ++cc) {
              Complex sum{};
              for (std::size_t b = 0; b < db; ++b)
                sum += entry(i, k, a, b, j, l, cc, b);
              block_max = std::max(block_max, std::abs(sum));
            }
          record(block_max, i, j, k, l, 'B');
        }
    }

  report.satisfied = report.max_violation <= tol;
  if (report.satisfied) report.witness.reset();
  return report;
}

} // namespace qcn
