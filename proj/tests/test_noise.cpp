#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcn/measures.hpp"
#include "qcn/noise.hpp"
#include "qcn/pauli.hpp"
#include "test_support.hpp"

using namespace qcn;

namespace {
const Factorization kQ1 = Factorization::qubits(1);
const Factorization kQ2 = Factorization::qubits(2);
}

TEST_CASE("family validation") {
  CHECK_THROWS_AS(NoiseFamily::pauli_string({3}, 0.5), ContractViolation);
  CHECK_THROWS_AS(NoiseFamily::pauli_string({0, 3}, 0.1), ContractViolation);
  CHECK_THROWS_AS(NoiseFamily::depolarizing(2, 1.0), ContractViolation);
  CHECK_THROWS_AS(NoiseFamily::depolarizing(0, 0.1), ContractViolation);
  CHECK(NoiseFamily::pauli_string({1, 2, 3}, 0.49).label() == "pauli(xyz)");
  CHECK(NoiseFamily::amplitude_damping(2, 0.99).epsilon_max() == 1.0);
}

TEST_CASE("depolarizing acts as (1-eps) rho + eps/2^n I") {
  SplitMix64 rng(41);
  for (double eps : {0.1, 0.4}) {
    const auto ch = build_channel(NoiseFamily::depolarizing(1, eps));
    const auto rho = qcn::test::random_physical_state(1, rng);
    const ComplexMatrix want = (1.0 - eps) * rho.matrix() +
                               (eps / 2.0) * ComplexMatrix::identity(2);
    CHECK(max_abs_diff(apply(ch.choi, rho.matrix()), want) < 1e-13);
  }
}

TEST_CASE("zz phase flip leaves the Bell state unchanged") {
  const StateOperator bell = StateOperator::pure(max_entangled_state(2), kQ2);
  const auto ch = build_channel(NoiseFamily::pauli_string({3, 3}, 0.37));
  CHECK(max_abs_diff(apply(ch.choi, bell).matrix(), bell.matrix()) < 1e-14);
}

TEST_CASE("every family at eps=0 is the identity channel") {
  const ChoiOperator id1 = identity_channel(kQ1);
  const ChoiOperator id2 = identity_channel(kQ2);
  CHECK(max_abs_diff(build_channel(NoiseFamily::pauli_string({2}, 0.0)).choi.matrix(),
                     id1.matrix()) < 1e-15);
  CHECK(max_abs_diff(build_channel(NoiseFamily::depolarizing(2, 0.0)).choi.matrix(),
                     id2.matrix()) < 1e-15);
  CHECK(max_abs_diff(build_channel(NoiseFamily::dephasing(1, 0.0)).choi.matrix(),
                     id1.matrix()) < 1e-15);
  CHECK(max_abs_diff(
            build_channel(NoiseFamily::amplitude_damping(2, 0.0)).choi.matrix(),
            id2.matrix()) < 1e-15);
}

TEST_CASE("channel decompositions are orthogonal where defined") {
  for (const auto &f :
       {NoiseFamily::pauli_string({3, 3}, 0.2), NoiseFamily::depolarizing(2, 0.2),
        NoiseFamily::dephasing(2, 0.2)}) {
    const auto ch = build_channel(f);
    REQUIRE(ch.decomposition.has_value());
    CHECK(ch.decomposition->is_orthogonal());
    CHECK(ch.decomposition->weight_sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_FALSE(build_channel(NoiseFamily::amplitude_damping(1, 0.2))
                  .decomposition.has_value());
  CHECK_FALSE(build_inverse(NoiseFamily::amplitude_damping(1, 0.2))
                  .decomposition.has_value());
}

TEST_CASE("dephasing inverse coefficients match the solved closed form") {
  const double eps = 0.2;
  const auto inv = build_inverse(NoiseFamily::dephasing(1, eps));
  REQUIRE(inv.decomposition.has_value());
  const double a = 1.0 / (1.0 - eps);        // 1.25
  const double b = eps / ((1.0 - eps) * 2.0); // 0.125
  const auto w = inv.decomposition->weights();
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(a - b).epsilon(1e-14));
  CHECK(w[1] == doctest::Approx(-b).epsilon(1e-14));
}

TEST_CASE("pauli inverse weights sum to one") {
  for (double eps : {0.05, 0.2, 0.45}) {
    const auto inv = build_inverse(NoiseFamily::pauli_string({1, 3}, eps));
    CHECK(inv.decomposition->weight_sum() ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inv.decomposition->abs_weight_sum() ==
          doctest::Approx(1.0 / (1.0 - 2.0 * eps)).epsilon(1e-12));
  }
}

TEST_CASE("inverse composes to the identity across the grid") {
  for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
    const ChoiOperator id = identity_channel(Factorization::qubits(n));
    for (double eps : {0.05, 0.15, 0.25, 0.35, 0.45}) {
      std::vector<NoiseFamily> fams = {
          NoiseFamily::pauli_string(std::vector<int>(n, 3), eps),
          NoiseFamily::depolarizing(n, eps), NoiseFamily::dephasing(n, eps),
          NoiseFamily::amplitude_damping(n, eps)};
      for (const auto &f : fams) {
        const auto comp =
            compose(build_inverse(f).choi, build_channel(f).choi);
        CHECK((comp.matrix() - id.matrix()).frobenius_norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("nu closed forms") {
  CHECK(nu_inverse(NoiseFamily::pauli_string({3}, 0.0)) == 0.0);
  CHECK(nu_inverse(NoiseFamily::depolarizing(2, 0.0)) == 0.0);
  CHECK(nu_inverse(NoiseFamily::amplitude_damping(1, 0.0)) == 0.0);

  // depolarizing n=2 eps=0.1: log2(1.0875 / 0.9), cross-checked against the
  // trace-norm path
  const NoiseFamily dep = NoiseFamily::depolarizing(2, 0.1);
  CHECK(nu_inverse(dep) ==
        doctest::Approx(std::log2(1.0875 / 0.9)).epsilon(1e-14));
  const double oracle =
      std::log2(trace_norm(build_inverse(dep).choi.matrix()) / 4.0);
  CHECK(nu_inverse(dep) == doctest::Approx(oracle).epsilon(1e-11));

  // amplitude damping n=2 eps=0.5: 2 log2 3
  CHECK(nu_inverse(NoiseFamily::amplitude_damping(2, 0.5)) ==
        doctest::Approx(2.0 * std::log2(3.0)).epsilon(1e-13));

  // monotone in eps, nonnegative
  for (const auto &mk : {+[](double e) { return NoiseFamily::pauli_string({3}, e); },
                         +[](double e) { return NoiseFamily::depolarizing(2, e); },
                         +[](double e) { return NoiseFamily::dephasing(2, e); },
                         +[](double e) { return NoiseFamily::amplitude_damping(2, e); }}) {
    double prev = 0.0;
    for (double eps = 0.0; eps < 0.45; eps += 0.05) {
      const double nu = nu_inverse(mk(eps));
      CHECK(nu >= prev - 1e-14);
      prev = nu;
    }
  }
}

TEST_CASE("nu matches the Eq.5 path on a dense grid") {
  for (std::size_t n : {std::size_t{1}, std::size_t{2}}) {
    for (double eps = 0.01; eps < 0.46; eps += 0.02) {
      std::vector<NoiseFamily> fams = {
          NoiseFamily::pauli_string(std::vector<int>(n, 3), eps),
          NoiseFamily::depolarizing(n, eps), NoiseFamily::dephasing(n, eps)};
      for (const auto &f : fams) {
        const double tn = std::log2(
            trace_norm(build_inverse(f).choi.matrix()) / double(f.dim()));
        CHECK(std::abs(nu_inverse(f) - tn) < 1e-10);
      }
    }
  }
}

TEST_CASE("mu closed forms and the nu/2 relation") {
  CHECK(mu_inverse(NoiseFamily::pauli_string({3}, 0.0)) == 0.0);

  const double eps = 0.2;
  const double expect = 0.5 * std::log2(((1 - eps) * (1 - eps) + eps * eps) /
                                        ((1 - 2 * eps) * (1 - 2 * eps)));
  CHECK(mu_inverse(NoiseFamily::pauli_string({3}, eps)) ==
        doctest::Approx(expect).epsilon(1e-13));

  // dephasing n=2 eps=0.05: direct weight-list arithmetic oracle
  {
    const double e = 0.05;
    const double a = 1.0 / (1.0 - e);
    const double b = e / ((1.0 - e) * 4.0);
    double sum_sq = (a - b) * (a - b) + 3.0 * b * b;
    CHECK(mu_inverse(NoiseFamily::dephasing(2, e)) ==
          doctest::Approx(0.5 * std::log2(sum_sq)).epsilon(1e-13));
    CHECK(mu_inverse(NoiseFamily::dephasing(2, e)) ==
          doctest::Approx(mu_from_weights(
              inverse_weights(NoiseFamily::dephasing(2, e))))
              .epsilon(1e-14));
  }

  // |mu - nu/2| < 5 eps^2 for all four families at small eps
  for (double e : {0.01, 0.03, 0.05}) {
    std::vector<NoiseFamily> fams = {
        NoiseFamily::pauli_string({3, 3}, e), NoiseFamily::depolarizing(2, e),
        NoiseFamily::dephasing(2, e), NoiseFamily::amplitude_damping(2, e)};
    for (const auto &f : fams)
      CHECK(std::abs(mu_inverse(f) - 0.5 * nu_inverse(f)) < 5.0 * e * e);
  }

  // mu <= nu always (rms vs absolute sum)
  for (double e : {0.1, 0.3}) {
    for (const auto &f :
         {NoiseFamily::depolarizing(2, e), NoiseFamily::dephasing(2, e),
          NoiseFamily::amplitude_damping(2, e)})
      CHECK(mu_inverse(f) <= nu_inverse(f) + 1e-14);
  }
}

TEST_CASE("maximally entangled delta closed forms") {
  CHECK(max_entangled_delta(NoiseFamily::pauli_string({3, 3}, 0.33)) == 0.0);
  CHECK(max_entangled_delta(NoiseFamily::depolarizing(2, 0.01)) ==
        doctest::Approx(std::log2(1.0 - 0.75 * 0.01)).epsilon(1e-14));
  CHECK(max_entangled_delta(NoiseFamily::amplitude_damping(2, 0.1)) ==
        doctest::Approx(std::log2(1.0 - 0.1 + 0.005)).epsilon(1e-14));
  CHECK_THROWS_AS(max_entangled_delta(NoiseFamily::depolarizing(3, 0.1)),
                  ContractViolation);
}

TEST_CASE("maximally entangled delta matches full simulation") {
  const StateOperator bell = StateOperator::pure(max_entangled_state(2), kQ2);
  const double en0 = log_negativity(bell, 1);
  for (double eps : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3}) {
    std::vector<NoiseFamily> fams = {
        NoiseFamily::pauli_string({3, 3}, eps),
        NoiseFamily::pauli_string({1, 1}, eps),
        NoiseFamily::pauli_string({1, 2}, eps), // non-mirrored string
        NoiseFamily::pauli_string({3, 1}, eps),
        NoiseFamily::depolarizing(2, eps),
        NoiseFamily::dephasing(2, eps),
        NoiseFamily::amplitude_damping(2, eps)};
    for (const auto &f : fams) {
      const StateOperator out = apply(build_channel(f).choi, bell);
      const double sim = log_negativity(out, 1) - en0;
      CHECK(std::abs(sim - max_entangled_delta(f)) < 1e-10);
      CHECK(max_entangled_delta(f) <= 0.0);
    }
  }
}

TEST_CASE("mirrored pairing on four qubits") {
  // axes (x,z,z,x) pair up under k <-> n-1-k, so the Bell-pair product is
  // preserved; (x,z,z,y) does not.
  const StateOperator max4 = StateOperator::pure(max_entangled_state(4),
                                                 Factorization::qubits(4));
  const double en0 = log_negativity(max4, 2);
  CHECK(en0 == doctest::Approx(2.0).epsilon(1e-12));
  for (double eps : {0.1, 0.3}) {
    const NoiseFamily mirrored = NoiseFamily::pauli_string({1, 3, 3, 1}, eps);
    const NoiseFamily skew = NoiseFamily::pauli_string({1, 3, 3, 2}, eps);
    for (const auto &f : {mirrored, skew}) {
      const StateOperator out = apply(build_channel(f).choi, max4);
      const double sim = log_negativity(out, 2) - en0;
      CHECK(std::abs(sim - max_entangled_delta(f)) < 1e-10);
    }
    CHECK(max_entangled_delta(mirrored) == 0.0);
    CHECK(max_entangled_delta(skew) ==
          doctest::Approx(std::log2(1.0 - eps)).epsilon(1e-13));
  }
}

TEST_CASE("channels are CP, inverses are not (eps > 0)") {
  for (double eps : {0.05, 0.25, 0.45}) {
    std::vector<NoiseFamily> fams = {
        NoiseFamily::pauli_string({3, 3}, eps), NoiseFamily::depolarizing(2, eps),
        NoiseFamily::dephasing(2, eps), NoiseFamily::amplitude_damping(2, eps)};
    for (const auto &f : fams) {
      CHECK(is_cp(build_channel(f).choi));
      const auto inv = build_inverse(f);
      CHECK_FALSE(is_cp(inv.choi));
      CHECK(hermitian_eigenvalues(inv.choi.matrix()).front() < -1e-9);
      CHECK(is_hp(inv.choi));
      CHECK(is_tp(inv.choi));
    }
  }
}

TEST_CASE("depolarizing spectrum shift law") {
  SplitMix64 rng(42);
  for (double eps : {0.05, 0.2}) {
    const auto ch = build_channel(NoiseFamily::depolarizing(2, eps));
    for (int t = 0; t < 20; ++t) {
      const auto rho = qcn::test::random_physical_state(2, rng);
      const auto in_pt = hermitian_eigenvalues(
          partial_transpose_from(rho.matrix(), rho.factorization(), 1));
      const auto out_pt = hermitian_eigenvalues(partial_transpose_from(
          apply(ch.choi, rho.matrix()), rho.factorization(), 1));
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(out_pt[k] -
                       ((1.0 - eps) * in_pt[k] + eps / 4.0)) < 1e-10);
    }
  }
}

TEST_CASE("dephasing preserves diagonal Pauli expectations and scales the rest") {
  SplitMix64 rng(43);
  const double eps = 0.3;
  const auto ch = build_channel(NoiseFamily::dephasing(2, eps));
  const auto axes_set = all_pauli_axes(2);
  for (int t = 0; t < 10; ++t) {
    const auto rho = qcn::test::random_physical_state(2, rng);
    const auto out = apply(ch.choi, rho);
    const BlochVector r_in = bloch_vector(rho);
    const BlochVector r_out = bloch_vector(out);
    for (std::size_t idx = 1; idx < axes_set.size(); ++idx) {
      bool diag = true;
      for (int a : axes_set[idx])
        if (a == 1 || a == 2) diag = false;
      const double want = diag ? r_in.components[idx - 1]
                               : (1.0 - eps) * r_in.components[idx - 1];
      CHECK(std::abs(r_out.components[idx - 1] - want) < 1e-12);
    }
    if (r_in.norm() > 1e-9) {
      const double ratio = r_out.norm() / r_in.norm();
      CHECK(ratio >= 1.0 - eps - 1e-12);
      CHECK(ratio <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("inverse product decomposition reproduces the inverse map") {
  for (const auto &f :
       {NoiseFamily::pauli_string({1, 3}, 0.2), NoiseFamily::depolarizing(2, 0.3),
        NoiseFamily::dephasing(2, 0.3), NoiseFamily::amplitude_damping(2, 0.3)}) {
    const auto terms = inverse_product_decomposition(f, 1);
    const ChoiOperator target = build_inverse(f).choi;
    ComplexMatrix sum(target.matrix().dim());
    for (const auto &t : terms)
      sum += t.weight * tensor(t.factor_a, t.factor_b).matrix();
    CHECK(max_abs_diff(sum, target.matrix()) < 1e-12);
  }
  CHECK_THROWS_AS(
      inverse_product_decomposition(NoiseFamily::depolarizing(2, 0.1), 0),
      ContractViolation);
}
