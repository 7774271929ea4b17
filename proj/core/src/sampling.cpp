#include "qcn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qcn/pauli.hpp"

namespace qcn {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

} // namespace

SplitMix64 SplitMix64::substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(mix64(seed ^ mix64((index + 1) * kGolden)));
}

std::uint64_t SplitMix64::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SplitMix64::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  cached_ = r * std::sin(kTwoPi * u2);
  has_cached_ = true;
  return r * std::cos(kTwoPi * u2);
}

std::string to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::HaarPure: return "haar-pure";
    case EnsembleKind::SignedMixture: return "signed-mixture";
    case EnsembleKind::PhysicalMixture: return "physical-mixture";
  }
  return "?";
}

std::vector<Complex> haar_state_vector(std::size_t dim, SplitMix64 &rng) {
  std::vector<Complex> v(dim);
  double norm2 = 0.0;
  for (auto &a : v) {
    const double re = rng.next_gaussian();
    const double im = rng.next_gaussian();
    a = Complex(re, im);
    norm2 += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto &a : v) a *= inv;
  return v;
}

EnsembleStream::EnsembleStream(EnsembleSpec spec) : spec_(spec) {
  if (spec_.n == 0) throw ContractViolation("EnsembleSpec: n must be >= 1");
  if (spec_.count == 0)
    throw ContractViolation("EnsembleSpec: count must be >= 1");
}

StateOperator EnsembleStream::at(std::size_t index) const {
  if (index >= spec_.count)
    throw ContractViolation("EnsembleStream: index out of range");
  SplitMix64 rng = SplitMix64::substream(spec_.seed, index);
  const std::size_t dim = std::size_t{1} << spec_.n;
  const Factorization fact = Factorization::qubits(spec_.n);

  if (spec_.kind == EnsembleKind::HaarPure)
    return StateOperator::pure(haar_state_vector(dim, rng), fact);

  // Two-state mixture: orthonormalize a second Haar vector against the
  // first, then mix with lambda_1 + lambda_2 = 1.
  const std::vector<Complex> psi1 = haar_state_vector(dim, rng);
  std::vector<Complex> psi2;
  for (;;) {
    psi2 = haar_state_vector(dim, rng);
    Complex overlap{};
    for (std::size_t a = 0; a < dim; ++a)
      overlap += std::conj(psi1[a]) * psi2[a];
    double norm2 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      psi2[a] -= overlap * psi1[a];
      norm2 += std::norm(psi2[a]);
    }
    if (norm2 > 1e-24) {
      const double inv = 1.0 / std::sqrt(norm2);
      for (auto &x : psi2) x *= inv;
      break;
    }
  }

  const double u = rng.next_double();
  const double lambda1 =
      spec_.kind == EnsembleKind::SignedMixture ? -1.0 + 2.0 * u : u;
  const double lambda2 = 1.0 - lambda1;

  ComplexMatrix rho(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      rho(r, c) = lambda1 * psi1[r] * std::conj(psi1[c]) +
                  lambda2 * psi2[r] * std::conj(psi2[c]);
  return StateOperator(std::move(rho), fact);
}

EnsembleStream haar_pure(const EnsembleSpec &spec) {
  if (spec.kind != EnsembleKind::HaarPure)
    throw ContractViolation("haar_pure: spec kind mismatch");
  return EnsembleStream(spec);
}

EnsembleStream two_state_mixture(const EnsembleSpec &spec) {
  if (spec.kind == EnsembleKind::HaarPure)
    throw ContractViolation("two_state_mixture: spec kind mismatch");
  return EnsembleStream(spec);
}

ComplexMatrix haar_unitary(std::size_t dim, SplitMix64 &rng) {
  ComplexMatrix u(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    for (;;) {
      for (std::size_t r = 0; r < dim; ++r)
        u(r, col) = Complex(rng.next_gaussian(), rng.next_gaussian());
      // modified Gram-Schmidt against earlier columns
      for (std::size_t prev = 0; prev < col; ++prev) {
        Complex overlap{};
        for (std::size_t r = 0; r < dim; ++r)
          overlap += std::conj(u(r, prev)) * u(r, col);
        for (std::size_t r = 0; r < dim; ++r)
          u(r, col) -= overlap * u(r, prev);
      }
      double norm2 = 0.0;
      for (std::size_t r = 0; r < dim; ++r) norm2 += std::norm(u(r, col));
      if (norm2 > 1e-24) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < dim; ++r) u(r, col) *= inv;
        break;
      }
    }
  }
  return u;
}

KrausChannel random_cptp(std::size_t dim, std::size_t n_kraus,
                         SplitMix64 &rng) {
  if (n_kraus == 0) throw ContractViolation("random_cptp: need >= 1 Kraus op");
  for (;;) {
    std::vector<ComplexMatrix> g(n_kraus, ComplexMatrix(dim));
    ComplexMatrix s(dim);
    for (auto &m : g) {
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
          m(r, c) = Complex(rng.next_gaussian(), rng.next_gaussian());
      s += m.adjoint() * m;
    }
    const EigResult eig = hermitian_eig(s);
    if (eig.values.front() < 1e-12) continue;
    // S^{-1/2} = V diag(1/sqrt(lambda)) V^dag
    ComplexMatrix inv_sqrt(dim);
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        Complex sum{};
        for (std::size_t k = 0; k < dim; ++k)
          sum += eig.vectors(r, k) * std::conj(eig.vectors(c, k)) /
                 std::sqrt(eig.values[k]);
        inv_sqrt(r, c) = sum;
      }
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(n_kraus);
    for (const auto &m : g) kraus.push_back(m * inv_sqrt);
    return KrausChannel(std::move(kraus));
  }
}

MixedUnitaryDecomposition random_orthogonal_pauli_map(std::size_t n,
                                                      std::size_t n_terms,
                                                      SplitMix64 &rng) {
  const auto axes_set = all_pauli_axes(n);
  if (n_terms < 1 || n_terms > axes_set.size())
    throw ContractViolation("random_orthogonal_pauli_map: bad term count");

  // Partial Fisher-Yates over the non-identity strings; identity is always
  // term 0 so the map stays a perturbation of the identity.
  std::vector<std::size_t> pool(axes_set.size() - 1);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<std::size_t> picked{0};
  for (std::size_t t = 1; t < n_terms; ++t) {
    const std::size_t r =
        t - 1 + static_cast<std::size_t>(rng.next_double() *
                                         double(pool.size() - (t - 1)));
    std::swap(pool[t - 1], pool[std::min(r, pool.size() - 1)]);
    picked.push_back(pool[t - 1]);
  }

  for (;;) {
    std::vector<double> raw(n_terms);
    double sum = 0.0;
    for (auto &w : raw) {
      w = -0.25 + 1.25 * rng.next_double();
      sum += w;
    }
    if (std::abs(sum) < 0.1) continue;
    std::vector<MixedUnitaryTerm> terms;
    terms.reserve(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t)
      terms.push_back({raw[t] / sum, pauli_string(axes_set[picked[t]])});
    return MixedUnitaryDecomposition(std::move(terms));
  }
}

} // namespace qcn
