#include "qcn/noise.hpp"

#include <cmath>

#include "qcn/pauli.hpp"

namespace qcn {

namespace {

constexpr double kLog2e = 1.4426950408889634; // 1/ln(2)

double log2_checked(double x) {
  if (x <= 0.0)
    throw ContractViolation("noise: closed form evaluated outside its domain");
  return std::log(x) * kLog2e;
}

std::vector<int> zero_axes(std::size_t n) { return std::vector<int>(n, 0); }

// Signed mixed-unitary decomposition over a fixed set of Pauli strings:
// weight_identity on the all-identity string, weight_rest on every other.
MixedUnitaryDecomposition pauli_mixture(
    const std::vector<std::vector<int>> &axes_set, double weight_identity,
    double weight_rest) {
  std::vector<MixedUnitaryTerm> terms;
  terms.reserve(axes_set.size());
  bool first = true;
  for (const auto &axes : axes_set) {
    terms.push_back({first ? weight_identity : weight_rest,
                     pauli_string(axes)});
    first = false;
  }
  return MixedUnitaryDecomposition(std::move(terms));
}

KrausChannel amplitude_damping_kraus(std::size_t n, double epsilon) {
  const ComplexMatrix e0 = ComplexMatrix::from_rows(
      {{1.0, 0.0}, {0.0, std::sqrt(1.0 - epsilon)}});
  const ComplexMatrix e1 =
      ComplexMatrix::from_rows({{0.0, std::sqrt(epsilon)}, {0.0, 0.0}});
  std::vector<ComplexMatrix> current{ComplexMatrix::from_rows({{1.0}})};
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<ComplexMatrix> next;
    next.reserve(current.size() * 2);
    for (const auto &m : current) {
      next.push_back(tensor_product(m, e0));
      next.push_back(tensor_product(m, e1));
    }
    current = std::move(next);
  }
  return KrausChannel(std::move(current));
}

// Single-qubit phase damping: Kraus {diag(1, sqrt(1-eps)), diag(0, sqrt(eps))}.
ChoiOperator phase_damping_choi(double epsilon) {
  const ComplexMatrix k0 = ComplexMatrix::from_rows(
      {{1.0, 0.0}, {0.0, std::sqrt(1.0 - epsilon)}});
  const ComplexMatrix k1 =
      ComplexMatrix::from_rows({{0.0, 0.0}, {0.0, std::sqrt(epsilon)}});
  return choi_from_kraus(KrausChannel({k0, k1}), Factorization::qubits(1));
}

// Reset-to-|0>: Kraus {|0><0|, |0><1|}.
ChoiOperator reset_choi() {
  const ComplexMatrix k0 =
      ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, 0.0}});
  const ComplexMatrix k1 =
      ComplexMatrix::from_rows({{0.0, 1.0}, {0.0, 0.0}});
  return choi_from_kraus(KrausChannel({k0, k1}), Factorization::qubits(1));
}

ChoiOperator tensor_over(const std::vector<const ChoiOperator *> &parts) {
  ChoiOperator out = *parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = tensor(out, *parts[i]);
  return out;
}

} // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::PauliString: return "pauli";
    case NoiseKind::Depolarizing: return "depolarizing";
    case NoiseKind::Dephasing: return "dephasing";
    case NoiseKind::AmplitudeDamping: return "amplitude-damping";
  }
  return "?";
}

NoiseFamily NoiseFamily::pauli_string(std::vector<int> axes, double epsilon) {
  NoiseFamily f{NoiseKind::PauliString, axes.size(), epsilon, std::move(axes)};
  f.validate();
  return f;
}

NoiseFamily NoiseFamily::depolarizing(std::size_t n, double epsilon) {
  NoiseFamily f{NoiseKind::Depolarizing, n, epsilon, {}};
  f.validate();
  return f;
}

NoiseFamily NoiseFamily::dephasing(std::size_t n, double epsilon) {
  NoiseFamily f{NoiseKind::Dephasing, n, epsilon, {}};
  f.validate();
  return f;
}

NoiseFamily NoiseFamily::amplitude_damping(std::size_t n, double epsilon) {
  NoiseFamily f{NoiseKind::AmplitudeDamping, n, epsilon, {}};
  f.validate();
  return f;
}

void NoiseFamily::validate() const {
  if (n == 0) throw ContractViolation("NoiseFamily: n must be >= 1");
  if (!(epsilon >= 0.0) || epsilon >= epsilon_max())
    throw ContractViolation("NoiseFamily: epsilon " + std::to_string(epsilon) +
                            " outside [0, " + std::to_string(epsilon_max()) +
                            ") for " + to_string(kind));
  if (kind == NoiseKind::PauliString) {
    if (axes.size() != n)
      throw ContractViolation("NoiseFamily: axes length must equal n");
    for (int a : axes)
      if (a < 1 || a > 3)
        throw ContractViolation("NoiseFamily: Pauli axes must be in {1,2,3}");
  } else if (!axes.empty()) {
    throw ContractViolation("NoiseFamily: axes only apply to Pauli strings");
  }
}

std::string NoiseFamily::label() const {
  std::string s = to_string(kind);
  if (kind == NoiseKind::PauliString) {
    s += "(";
    for (int a : axes) s += "ixyz"[a];
    s += ")";
  }
  return s;
}

NoiseChannel build_channel(const NoiseFamily &f) {
  f.validate();
  const Factorization sys = Factorization::qubits(f.n);
  switch (f.kind) {
    case NoiseKind::PauliString: {
      std::vector<MixedUnitaryTerm> terms;
      terms.push_back({1.0 - f.epsilon, pauli_string(zero_axes(f.n))});
      terms.push_back({f.epsilon, pauli_string(f.axes)});
      MixedUnitaryDecomposition dec(std::move(terms));
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::Depolarizing: {
      const double cell = f.epsilon / std::pow(4.0, double(f.n));
      MixedUnitaryDecomposition dec =
          pauli_mixture(all_pauli_axes(f.n), (1.0 - f.epsilon) + cell, cell);
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::Dephasing: {
      const double cell = f.epsilon / std::pow(2.0, double(f.n));
      MixedUnitaryDecomposition dec = pauli_mixture(
          diagonal_pauli_axes(f.n), (1.0 - f.epsilon) + cell, cell);
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::AmplitudeDamping: {
      return {choi_from_kraus(amplitude_damping_kraus(f.n, f.epsilon), sys),
              std::nullopt};
    }
  }
  throw Error("build_channel: unreachable");
}

NoiseChannel build_inverse(const NoiseFamily &f) {
  f.validate();
  const Factorization sys = Factorization::qubits(f.n);
  const double eps = f.epsilon;
  switch (f.kind) {
    case NoiseKind::PauliString: {
      std::vector<MixedUnitaryTerm> terms;
      terms.push_back(
          {(1.0 - eps) / (1.0 - 2.0 * eps), pauli_string(zero_axes(f.n))});
      terms.push_back({-eps / (1.0 - 2.0 * eps), pauli_string(f.axes)});
      MixedUnitaryDecomposition dec(std::move(terms));
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::Depolarizing: {
      const double cell = -eps / ((1.0 - eps) * std::pow(4.0, double(f.n)));
      MixedUnitaryDecomposition dec = pauli_mixture(
          all_pauli_axes(f.n), 1.0 / (1.0 - eps) + cell, cell);
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::Dephasing: {
      const double cell = -eps / ((1.0 - eps) * std::pow(2.0, double(f.n)));
      MixedUnitaryDecomposition dec = pauli_mixture(
          diagonal_pauli_axes(f.n), 1.0 / (1.0 - eps) + cell, cell);
      return {choi_from_mixed_unitary(dec, sys), std::move(dec)};
    }
    case NoiseKind::AmplitudeDamping: {
      // No mixed-unitary form exists; invert the channel numerically.
      return {inverse(build_channel(f).choi), std::nullopt};
    }
  }
  throw Error("build_inverse: unreachable");
}

std::vector<double> inverse_weights(const NoiseFamily &f) {
  f.validate();
  const double eps = f.epsilon;
  switch (f.kind) {
    case NoiseKind::PauliString:
      return {(1.0 - eps) / (1.0 - 2.0 * eps), -eps / (1.0 - 2.0 * eps)};
    case NoiseKind::Depolarizing: {
      const std::size_t total = std::size_t{1} << (2 * f.n);
      const double cell = -eps / ((1.0 - eps) * double(total));
      std::vector<double> w(total, cell);
      w[0] = 1.0 / (1.0 - eps) + cell;
      return w;
    }
    case NoiseKind::Dephasing: {
      const std::size_t total = std::size_t{1} << f.n;
      const double cell = -eps / ((1.0 - eps) * double(total));
      std::vector<double> w(total, cell);
      w[0] = 1.0 / (1.0 - eps) + cell;
      return w;
    }
    case NoiseKind::AmplitudeDamping: {
      const double plus = 1.0 / (1.0 - eps);
      const double minus = -eps / (1.0 - eps);
      std::vector<double> w{1.0};
      for (std::size_t q = 0; q < f.n; ++q) {
        std::vector<double> next;
        next.reserve(w.size() * 2);
        for (double v : w) {
          next.push_back(v * plus);
          next.push_back(v * minus);
        }
        w = std::move(next);
      }
      return w;
    }
  }
  throw Error("inverse_weights: unreachable");
}

double nu_inverse(const NoiseFamily &f) {
  f.validate();
  const double eps = f.epsilon;
  const double nq = static_cast<double>(f.n);
  switch (f.kind) {
    case NoiseKind::PauliString:
      return log2_checked(1.0 / (1.0 - 2.0 * eps));
    case NoiseKind::Depolarizing:
      return log2_checked(
          (1.0 + (1.0 - 2.0 / std::pow(4.0, nq)) * eps) / (1.0 - eps));
    case NoiseKind::Dephasing:
      return log2_checked(
          (1.0 + (1.0 - 2.0 / std::pow(2.0, nq)) * eps) / (1.0 - eps));
    case NoiseKind::AmplitudeDamping:
      return nq * log2_checked((1.0 + eps) / (1.0 - eps));
  }
  throw Error("nu_inverse: unreachable");
}

double mu_inverse(const NoiseFamily &f) {
  const auto w = inverse_weights(f);
  double s = 0.0;
  for (double q : w) s += q * q;
  return 0.5 * log2_checked(s);
}

double max_entangled_delta(const NoiseFamily &f) {
  f.validate();
  if (f.n % 2 != 0)
    throw ContractViolation("max_entangled_delta: n must be even");
  const double eps = f.epsilon;
  const double ds = std::pow(2.0, double(f.n) / 2.0);
  switch (f.kind) {
    case NoiseKind::PauliString: {
      // With the mirrored Bell pairing, the string acts trivially on the
      // maximally entangled state iff axes[k] == axes[n-1-k] on every pair;
      // otherwise the output is a two-term Bell mixture.
      bool mirrored = true;
      for (std::size_t k = 0; k < f.n; ++k)
        if (f.axes[k] != f.axes[f.n - 1 - k]) {
          mirrored = false;
          break;
        }
      return mirrored ? 0.0 : log2_checked(1.0 - eps);
    }
    case NoiseKind::Depolarizing:
      return log2_checked(1.0 - (1.0 - 1.0 / (ds * ds)) * eps);
    case NoiseKind::Dephasing:
      return log2_checked(1.0 - (1.0 - 1.0 / ds) * eps);
    case NoiseKind::AmplitudeDamping:
      return (double(f.n) / 2.0) *
             log2_checked(1.0 - eps + eps * eps / 2.0);
  }
  throw Error("max_entangled_delta: unreachable");
}

std::vector<ProductChannelTerm> inverse_product_decomposition(
    const NoiseFamily &f, std::size_t cut) {
  f.validate();
  if (cut == 0 || cut >= f.n)
    throw ContractViolation(
        "inverse_product_decomposition: cut must split the qubits");
  const Factorization fa = Factorization::qubits(cut);
  const Factorization fb = Factorization::qubits(f.n - cut);

  std::vector<ProductChannelTerm> out;
  if (f.kind == NoiseKind::AmplitudeDamping) {
    const double eps = f.epsilon;
    const double weight[2] = {1.0 / (1.0 - eps), -eps / (1.0 - eps)};
    const ChoiOperator part[2] = {phase_damping_choi(eps), reset_choi()};
    const std::size_t combos = std::size_t{1} << f.n;
    for (std::size_t mask = 0; mask < combos; ++mask) {
      double q = 1.0;
      std::vector<const ChoiOperator *> a_parts, b_parts;
      for (std::size_t k = 0; k < f.n; ++k) {
        const std::size_t pick = (mask >> (f.n - 1 - k)) & 1u;
        q *= weight[pick];
        (k < cut ? a_parts : b_parts).push_back(&part[pick]);
      }
      out.push_back({q, tensor_over(a_parts), tensor_over(b_parts)});
    }
    return out;
  }

  const auto built = build_inverse(f);
  const auto axes_set = f.kind == NoiseKind::PauliString
                            ? std::vector<std::vector<int>>{zero_axes(f.n),
                                                            f.axes}
                        : f.kind == NoiseKind::Depolarizing
                            ? all_pauli_axes(f.n)
                            : diagonal_pauli_axes(f.n);
  const auto &terms = built.decomposition->terms();
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::vector<int> &axes = axes_set[t];
    const std::vector<int> a_axes(axes.begin(), axes.begin() + cut);
    const std::vector<int> b_axes(axes.begin() + cut, axes.end());
    out.push_back({terms[t].weight, unitary_channel(pauli_string(a_axes), fa),
                   unitary_channel(pauli_string(b_axes), fb)});
  }
  return out;
}

} // namespace qcn
