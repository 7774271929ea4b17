#ifndef QCN_SAMPLING_HPP
#define QCN_SAMPLING_HPP

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "qcn/channel.hpp"

namespace qcn {

/// SplitMix64: a counter-based generator (Steele et al.); the state walks a
/// fixed increment and each output is a finalizer of the state alone, so a
/// stream is a pure function of its starting state. Gaussians come from the
/// plain Box-Muller transform, pair-cached per generator.
///
/// Substream derivation for per-sample determinism:
///   state0(seed, index) = mix(seed XOR mix((index + 1) * GOLDEN))
/// where mix is the SplitMix64 finalizer and GOLDEN = 0x9E3779B97F4A7C15.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform in [0, 1), 53-bit resolution.
  double next_double();
  /// Standard normal via Box-Muller.
  double next_gaussian();

private:
  std::uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// Name recorded in output metadata so result files identify their stream.
inline const char *rng_description() { return "splitmix64+box-muller"; }

enum class EnsembleKind { HaarPure, SignedMixture, PhysicalMixture };

std::string to_string(EnsembleKind kind);

struct EnsembleSpec {
  EnsembleKind kind;
  std::size_t n;      // qubits
  std::size_t count;  // samples
  std::uint64_t seed;
};

/// Deterministic random-state ensemble; sample i is a pure function of
/// (kind, n, seed, i), so consumers may evaluate indices in parallel.
class EnsembleStream {
public:
  explicit EnsembleStream(EnsembleSpec spec);
  const EnsembleSpec &spec() const { return spec_; }
  std::size_t size() const { return spec_.count; }
  StateOperator at(std::size_t index) const;

private:
  EnsembleSpec spec_;
};

/// Validated constructors per ensemble kind.
EnsembleStream haar_pure(const EnsembleSpec &spec);
EnsembleStream two_state_mixture(const EnsembleSpec &spec);

/// Normalized Haar-random state vector (independent complex Gaussians).
std::vector<Complex> haar_state_vector(std::size_t dim, SplitMix64 &rng);

/// Haar-random unitary: Gaussian matrix orthonormalized column by column.
ComplexMatrix haar_unitary(std::size_t dim, SplitMix64 &rng);

/// Random CPTP channel: Gaussian Kraus candidates normalized through
/// S^{-1/2} with S = sum G_i^dag G_i.
KrausChannel random_cptp(std::size_t dim, std::size_t n_kraus,
                         SplitMix64 &rng);

/// Random HPTP map: signed weights (summing to 1) over distinct Pauli
/// strings, always including the identity string. Mutually orthogonal by
/// construction.
MixedUnitaryDecomposition random_orthogonal_pauli_map(std::size_t n,
                                                      std::size_t n_terms,
                                                      SplitMix64 &rng);

} // namespace qcn

#endif
