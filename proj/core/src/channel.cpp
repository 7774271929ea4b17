#include "qcn/channel.hpp"

#include <cmath>
#include <string>

namespace qcn {

namespace {

// Lambda[(i,k),(j,l)] += w * E[k,i] * conj(E[l,j])
void accumulate_kraus_term(ComplexMatrix &lambda, const ComplexMatrix &e,
                           double weight) {
  const std::size_t d = e.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Complex left = e(k, i);
      if (left == Complex{}) continue;
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l)
          lambda(i * d + k, j * d + l) +=
              weight * left * std::conj(e(l, j));
    }
}

} // namespace

ChoiOperator::ChoiOperator(ComplexMatrix matrix, Factorization system)
    : matrix_(std::move(matrix)), system_(std::move(system)) {
  const std::size_t d = system_.total_dim();
  if (matrix_.dim() != d * d)
    throw DimensionError("ChoiOperator: matrix dim " +
                         std::to_string(matrix_.dim()) +
                         " is not the square of system dim " +
                         std::to_string(d));
}

KrausChannel::KrausChannel(std::vector<ComplexMatrix> ops)
    : ops_(std::move(ops)) {
  if (ops_.empty()) throw DimensionError("KrausChannel: empty operator list");
  for (const auto &op : ops_)
    if (op.dim() != ops_.front().dim())
      throw DimensionError("KrausChannel: inconsistent Kraus dimensions");
}

bool KrausChannel::is_complete(double tol) const {
  ComplexMatrix sum(dim());
  for (const auto &op : ops_) sum += op.adjoint() * op;
  return approx_equal(sum, ComplexMatrix::identity(dim()), tol);
}

MixedUnitaryDecomposition::MixedUnitaryDecomposition(
    std::vector<MixedUnitaryTerm> terms, double tol)
    : terms_(std::move(terms)) {
  if (terms_.empty())
    throw DimensionError("MixedUnitaryDecomposition: empty term list");
  for (const auto &t : terms_) {
    if (t.unitary.dim() != terms_.front().unitary.dim())
      throw DimensionError(
          "MixedUnitaryDecomposition: inconsistent dimensions");
    if (!t.unitary.is_unitary(tol))
      throw ContractViolation(
          "MixedUnitaryDecomposition: non-unitary term");
  }
  if (std::abs(weight_sum() - 1.0) > tol)
    throw ContractViolation(
        "MixedUnitaryDecomposition: weights must sum to 1 (got " +
        std::to_string(weight_sum()) + ")");
}

double MixedUnitaryDecomposition::weight_sum() const {
  double s = 0.0;
  for (const auto &t : terms_) s += t.weight;
  return s;
}

double MixedUnitaryDecomposition::abs_weight_sum() const {
  double s = 0.0;
  for (const auto &t : terms_) s += std::abs(t.weight);
  return s;
}

double MixedUnitaryDecomposition::squared_weight_sum() const {
  double s = 0.0;
  for (const auto &t : terms_) s += t.weight * t.weight;
  return s;
}

std::vector<double> MixedUnitaryDecomposition::weights() const {
  std::vector<double> w;
  w.reserve(terms_.size());
  for (const auto &t : terms_) w.push_back(t.weight);
  return w;
}

bool MixedUnitaryDecomposition::is_orthogonal(double tol) const {
  const double d = static_cast<double>(dim());
  for (std::size_t i = 0; i < terms_.size(); ++i)
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      const Complex overlap =
          (terms_[i].unitary.adjoint() * terms_[j].unitary).trace();
      if (std::abs(overlap) > tol * d) return false;
    }
  return true;
}

StateOperator::StateOperator(ComplexMatrix matrix, Factorization factorization,
                             double tol)
    : matrix_(std::move(matrix)), fact_(std::move(factorization)) {
  fact_.require_matches(matrix_);
  if (!matrix_.is_hermitian(tol))
    throw ContractViolation("StateOperator: matrix is not Hermitian");
  if (std::abs(matrix_.trace() - Complex(1.0, 0.0)) > tol)
    throw ContractViolation("StateOperator: trace must be 1");
  physical_ = matrix_.is_psd(1e-9);
}

StateOperator StateOperator::pure(const std::vector<Complex> &amplitudes,
                                  Factorization factorization) {
  double norm2 = 0.0;
  for (const auto &a : amplitudes) norm2 += std::norm(a);
  if (norm2 <= 0.0)
    throw ContractViolation("StateOperator::pure: zero amplitude vector");
  std::vector<Complex> v = amplitudes;
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto &a : v) a *= inv;

  ComplexMatrix rho(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      rho(r, c) = v[r] * std::conj(v[c]);
  return StateOperator(std::move(rho), std::move(factorization));
}

StateOperator StateOperator::maximally_mixed(Factorization factorization) {
  const std::size_t d = factorization.total_dim();
  ComplexMatrix rho = (1.0 / static_cast<double>(d)) *
                      ComplexMatrix::identity(d);
  return StateOperator(std::move(rho), std::move(factorization));
}

ChoiOperator choi_from_kraus(const KrausChannel &k, Factorization system) {
  if (k.dim() != system.total_dim())
    throw DimensionError("choi_from_kraus: Kraus dim does not match system");
  ComplexMatrix lambda(k.dim() * k.dim());
  for (const auto &op : k.ops()) accumulate_kraus_term(lambda, op, 1.0);
  return ChoiOperator(std::move(lambda), std::move(system));
}

ChoiOperator choi_from_mixed_unitary(const MixedUnitaryDecomposition &m,
                                     Factorization system) {
  if (m.dim() != system.total_dim())
    throw DimensionError(
        "choi_from_mixed_unitary: term dim does not match system");
  ComplexMatrix lambda(m.dim() * m.dim());
  for (const auto &t : m.terms())
    accumulate_kraus_term(lambda, t.unitary, t.weight);
  return ChoiOperator(std::move(lambda), std::move(system));
}

ChoiOperator identity_channel(Factorization system) {
  const std::size_t d = system.total_dim();
  ComplexMatrix lambda(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) lambda(i * d + i, j * d + j) = 1.0;
  return ChoiOperator(std::move(lambda), std::move(system));
}

ChoiOperator unitary_channel(const ComplexMatrix &u, Factorization system) {
  if (!u.is_unitary(kDefaultTol))
    throw ContractViolation("unitary_channel: matrix is not unitary");
  return choi_from_kraus(KrausChannel({u}), std::move(system));
}

ComplexMatrix apply(const ChoiOperator &c, const ComplexMatrix &rho) {
  const std::size_t d = c.system_dim();
  if (rho.dim() != d)
    throw DimensionError("apply: state dim does not match channel dim");
  const ComplexMatrix &lambda = c.matrix();
  ComplexMatrix out(d);
  for (std::size_t ip = 0; ip < d; ++ip)
    for (std::size_t i = 0; i < d; ++i) {
      const Complex r = rho(ip, i);
      if (r == Complex{}) continue;
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l)
          out(k, l) += r * lambda(ip * d + k, i * d + l);
    }
  return out;
}

StateOperator apply(const ChoiOperator &c, const StateOperator &s) {
  return StateOperator(apply(c, s.matrix()), s.factorization());
}

ComplexMatrix choi_to_transfer(const ChoiOperator &c) {
  const std::size_t d = c.system_dim();
  const ComplexMatrix &lambda = c.matrix();
  ComplexMatrix s(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l)
          s(k * d + l, i * d + j) = lambda(i * d + k, j * d + l);
  return s;
}

ChoiOperator transfer_to_choi(const ComplexMatrix &s, Factorization system) {
  const std::size_t d = system.total_dim();
  if (s.dim() != d * d)
    throw DimensionError("transfer_to_choi: matrix dim mismatch");
  ComplexMatrix lambda(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l)
          lambda(i * d + k, j * d + l) = s(k * d + l, i * d + j);
  return ChoiOperator(std::move(lambda), std::move(system));
}

ChoiOperator compose(const ChoiOperator &a, const ChoiOperator &b) {
  if (a.system_dim() != b.system_dim())
    throw DimensionError("compose: channel dims differ");
  return transfer_to_choi(choi_to_transfer(a) * choi_to_transfer(b),
                          a.system());
}

ChoiOperator tensor(const ChoiOperator &a, const ChoiOperator &b) {
  const std::size_t da = a.system_dim(), db = b.system_dim();
  ComplexMatrix kron = tensor_product(a.matrix(), b.matrix());
  // kron index order is (sigma_A, tau_A, sigma_B, tau_B); regroup the sigma
  // blocks before the tau blocks.
  Factorization blocks({da, da, db, db});
  ComplexMatrix grouped = permute_subsystems(kron, blocks, {0, 2, 1, 3});
  return ChoiOperator(std::move(grouped), a.system().concat(b.system()));
}

ChoiOperator inverse(const ChoiOperator &c, double condition_threshold) {
  return transfer_to_choi(invert(choi_to_transfer(c), condition_threshold),
                          c.system());
}

bool is_hp(const ChoiOperator &c, double tol) {
  return c.matrix().is_hermitian(tol);
}

bool is_tp(const ChoiOperator &c, double tol) {
  const std::size_t d = c.system_dim();
  const ComplexMatrix reduced =
      partial_trace(c.matrix(), Factorization({d, d}), {0});
  return approx_equal(reduced, ComplexMatrix::identity(d), tol);
}

bool is_cp(const ChoiOperator &c, double tol) {
  if (!c.matrix().is_hermitian(tol)) return false;
  const auto evals = hermitian_eigenvalues(c.matrix());
  return evals.front() >= -tol;
}

ChoiOperator map_partial_transpose(const ChoiOperator &c, std::size_t which) {
  const std::size_t m = c.system().count();
  if (which >= m)
    throw DimensionError("map_partial_transpose: subsystem out of range");
  const Factorization full = c.full_factorization();
  ComplexMatrix out = partial_transpose(c.matrix(), full, which);
  out = partial_transpose(out, full, which + m);
  return ChoiOperator(std::move(out), c.system());
}

ChoiOperator map_partial_transpose_from(const ChoiOperator &c,
                                        std::size_t cut) {
  const std::size_t m = c.system().count();
  if (cut > m)
    throw DimensionError("map_partial_transpose_from: cut out of range");
  ChoiOperator out = c;
  for (std::size_t i = cut; i < m; ++i) out = map_partial_transpose(out, i);
  return out;
}

} // namespace qcn
