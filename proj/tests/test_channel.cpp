#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcn/channel.hpp"
#include "qcn/noise.hpp"
#include "qcn/pauli.hpp"
#include "test_support.hpp"

using namespace qcn;

namespace {

const Factorization kQ1 = Factorization::qubits(1);
const Factorization kQ2 = Factorization::qubits(2);

KrausChannel amplitude_damping_q1(double eps) {
  return KrausChannel({ComplexMatrix::from_rows(
                           {{1.0, 0.0}, {0.0, std::sqrt(1.0 - eps)}}),
                       ComplexMatrix::from_rows(
                           {{0.0, std::sqrt(eps)}, {0.0, 0.0}})});
}

} // namespace

TEST_CASE("choi of the identity channel is d|Phi><Phi|") {
  const ChoiOperator id = identity_channel(kQ2);
  const ComplexMatrix want = 4.0 * projector(max_entangled_state(2));
  // the ancilla-system pairing of the Choi definition uses matched indices,
  // i.e. the straight (not mirrored) maximally entangled vector
  ComplexMatrix phi(16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) phi(i * 4 + i, j * 4 + j) = 1.0;
  CHECK(max_abs_diff(id.matrix(), phi) == 0.0);
  CHECK(is_hp(id));
  CHECK(is_tp(id));
  CHECK(is_cp(id));
}

TEST_CASE("choi matrix elements follow <k|T(|i><j|)|l>") {
  // amplitude damping: input |1><1| to output |0><0| has weight eps
  const double eps = 0.37;
  const ChoiOperator c = choi_from_kraus(amplitude_damping_q1(eps), kQ1);
  // row (i=1, k=0), column (j=1, l=0)
  CHECK(c.matrix()(1 * 2 + 0, 1 * 2 + 0).real() ==
        doctest::Approx(eps).epsilon(1e-14));
  CHECK(is_cp(c));
  CHECK(is_tp(c));
}

TEST_CASE("completely depolarizing channel built from d^2 Kraus operators") {
  // E_ij = |i><j| / sqrt(d): Choi must be I_{d^2} / d entrywise
  const std::size_t d = 4;
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      ComplexMatrix e(d);
      e(i, j) = 1.0 / std::sqrt(double(d));
      kraus.push_back(std::move(e));
    }
  const ChoiOperator c = choi_from_kraus(KrausChannel(kraus), kQ2);
  const ComplexMatrix want = (1.0 / double(d)) * ComplexMatrix::identity(d * d);
  CHECK(max_abs_diff(c.matrix(), want) < 1e-15);
  CHECK(is_tp(c));
}

TEST_CASE("mixed-unitary choi agrees with the Kraus path for phase flip") {
  const double eps = 0.23;
  const MixedUnitaryDecomposition dec(
      {{1.0 - eps, pauli(0)}, {eps, pauli(3)}});
  const ChoiOperator via_mixture = choi_from_mixed_unitary(dec, kQ1);
  const KrausChannel kraus({std::sqrt(1.0 - eps) * pauli(0),
                            std::sqrt(eps) * pauli(3)});
  const ChoiOperator via_kraus = choi_from_kraus(kraus, kQ1);
  CHECK(max_abs_diff(via_mixture.matrix(), via_kraus.matrix()) < 1e-14);
  CHECK(is_cp(via_mixture));
}

TEST_CASE("signed mixed-unitary map is HPTP but not CP") {
  const double eps = 0.2;
  const MixedUnitaryDecomposition dec(
      {{(1.0 - eps) / (1.0 - 2.0 * eps), pauli(0)},
       {-eps / (1.0 - 2.0 * eps), pauli(3)}});
  const ChoiOperator c = choi_from_mixed_unitary(dec, kQ1);
  CHECK(is_hp(c));
  CHECK(is_tp(c));
  CHECK_FALSE(is_cp(c));

  // {(1, I)} is the identity channel
  const MixedUnitaryDecomposition trivial({{1.0, pauli(0)}});
  CHECK(max_abs_diff(choi_from_mixed_unitary(trivial, kQ1).matrix(),
                     identity_channel(kQ1).matrix()) == 0.0);
}

TEST_CASE("decomposition validation") {
  CHECK_THROWS_AS(MixedUnitaryDecomposition(
                      {{1.0, ComplexMatrix::from_rows({{1, 1}, {0, 1}})}}),
                  ContractViolation);
  CHECK_THROWS_AS(MixedUnitaryDecomposition(
                      {{0.7, pauli(0)}, {0.7, pauli(3)}}),
                  ContractViolation);
  const MixedUnitaryDecomposition ortho({{0.5, pauli(0)}, {0.5, pauli(1)}});
  CHECK(ortho.is_orthogonal());
  ComplexMatrix phased = pauli(0);
  phased(0, 0) = Complex(0.0, 1.0);
  phased(1, 1) = Complex(0.0, 1.0); // i*I: unitary but not orthogonal to I
  const MixedUnitaryDecomposition not_ortho({{0.5, pauli(0)}, {0.5, phased}});
  CHECK_FALSE(not_ortho.is_orthogonal());
}

TEST_CASE("kraus completeness check") {
  CHECK(amplitude_damping_q1(0.3).is_complete());
  const KrausChannel broken({0.5 * pauli(0)});
  CHECK_FALSE(broken.is_complete());
  CHECK_THROWS_AS(KrausChannel({pauli(0), ComplexMatrix::identity(4)}),
                  DimensionError);
}

TEST_CASE("apply: identity, depolarizing on Bell, amplitude damping") {
  SplitMix64 rng(31);
  const auto rho = qcn::test::random_physical_state(2, rng);
  CHECK(max_abs_diff(apply(identity_channel(kQ2), rho).matrix(),
                     rho.matrix()) < 1e-15);

  // 2-qubit depolarizing on the Bell state: (1-eps) rho_max + eps/4 I
  const double eps = 0.17;
  const StateOperator bell = StateOperator::pure(max_entangled_state(2), kQ2);
  const auto depol = build_channel(NoiseFamily::depolarizing(2, eps));
  const ComplexMatrix want =
      (1.0 - eps) * bell.matrix() + (eps / 4.0) * ComplexMatrix::identity(4);
  CHECK(max_abs_diff(apply(depol.choi, bell).matrix(), want) < 1e-13);

  // amplitude damping on |1><1| vs the operator-sum oracle
  const KrausChannel ad = amplitude_damping_q1(0.4);
  ComplexMatrix one(2);
  one(1, 1) = 1.0;
  ComplexMatrix oracle(2);
  for (const auto &e : ad.ops()) oracle += e * one * e.adjoint();
  const ChoiOperator ad_choi = choi_from_kraus(ad, kQ1);
  CHECK(max_abs_diff(apply(ad_choi, one), oracle) < 1e-14);
  CHECK(oracle(0, 0).real() == doctest::Approx(0.4));
  CHECK(oracle(1, 1).real() == doctest::Approx(0.6));
}

TEST_CASE("apply mismatched dims is rejected") {
  const StateOperator one_qubit = StateOperator::maximally_mixed(kQ1);
  CHECK_THROWS_AS(apply(identity_channel(kQ2), one_qubit), DimensionError);
}

TEST_CASE("apply sets the physical flag honestly") {
  const double eps = 0.2;
  // the dephasing-inverse image of a pure state off the z axis is not a
  // physical state
  ComplexMatrix plus = projector(plus_state(1));
  const StateOperator in(plus, kQ1);
  const auto inv = build_inverse(NoiseFamily::dephasing(1, eps));
  const StateOperator out = apply(inv.choi, in);
  CHECK_FALSE(out.physical());
  CHECK(out.matrix().is_hermitian(1e-12));
  CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("compose: neutral element, inverses, involutions") {
  SplitMix64 rng(32);
  const auto c = choi_from_kraus(random_cptp(4, 3, rng), kQ2);
  CHECK(max_abs_diff(compose(identity_channel(kQ2), c).matrix(), c.matrix()) <
        1e-13);

  const auto deph = NoiseFamily::dephasing(1, 0.3);
  const auto comp = compose(inverse(build_channel(deph).choi),
                            build_channel(deph).choi);
  CHECK(max_abs_diff(comp.matrix(), identity_channel(kQ1).matrix()) < 1e-10);

  const ChoiOperator sx = unitary_channel(pauli(1), kQ1);
  CHECK(max_abs_diff(compose(sx, sx).matrix(),
                     identity_channel(kQ1).matrix()) < 1e-14);

  // compose agrees with sequential application on random states
  for (int t = 0; t < 5; ++t) {
    const auto a = choi_from_kraus(random_cptp(4, 2, rng), kQ2);
    const auto b = choi_from_kraus(random_cptp(4, 2, rng), kQ2);
    const auto ab = compose(a, b);
    const auto rho = qcn::test::random_physical_state(2, rng);
    CHECK(max_abs_diff(apply(ab, rho.matrix()),
                       apply(a, apply(b, rho.matrix()))) < 1e-12);
  }
}

TEST_CASE("tensor of channels") {
  CHECK(max_abs_diff(
            tensor(identity_channel(kQ1), identity_channel(kQ1)).matrix(),
            identity_channel(kQ2).matrix()) == 0.0);

  // two single-qubit amplitude-damping channels give the 2-qubit one
  const double eps = 0.21;
  const ChoiOperator ad1 = choi_from_kraus(amplitude_damping_q1(eps), kQ1);
  const ChoiOperator ad2 =
      build_channel(NoiseFamily::amplitude_damping(2, eps)).choi;
  CHECK(max_abs_diff(tensor(ad1, ad1).matrix(), ad2.matrix()) < 1e-14);

  // product-state factorization on random single-qubit channels
  SplitMix64 rng(33);
  for (int t = 0; t < 8; ++t) {
    const auto ca = choi_from_kraus(random_cptp(2, 2, rng), kQ1);
    const auto cb = choi_from_kraus(random_cptp(2, 2, rng), kQ1);
    const auto ra = qcn::test::random_physical_state(1, rng);
    const auto rb = qcn::test::random_physical_state(1, rng);
    const ComplexMatrix joint = tensor_product(ra.matrix(), rb.matrix());
    const ComplexMatrix lhs = apply(tensor(ca, cb), joint);
    const ComplexMatrix rhs =
        tensor_product(apply(ca, ra.matrix()), apply(cb, rb.matrix()));
    CHECK(max_abs_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("inverse: identity, closed forms, numeric residuals") {
  CHECK(max_abs_diff(inverse(identity_channel(kQ2)).matrix(),
                     identity_channel(kQ2).matrix()) < 1e-13);

  // depolarizing n=1 inverse must match the analytic coefficient form
  const double eps = 0.3;
  const auto num = inverse(build_channel(NoiseFamily::depolarizing(1, eps)).choi);
  const auto analytic = build_inverse(NoiseFamily::depolarizing(1, eps)).choi;
  CHECK(max_abs_diff(num.matrix(), analytic.matrix()) < 1e-12);

  const auto ad = NoiseFamily::amplitude_damping(1, 0.2);
  const auto comp = compose(build_inverse(ad).choi, build_channel(ad).choi);
  CHECK(max_abs_diff(comp.matrix(), identity_channel(kQ1).matrix()) < 1e-10);

  // completely depolarizing (eps -> 1) is not invertible
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix e(2);
      e(i, j) = 1.0 / std::sqrt(2.0);
      kraus.push_back(std::move(e));
    }
  const ChoiOperator t_i = choi_from_kraus(KrausChannel(kraus), kQ1);
  CHECK_THROWS_AS(inverse(t_i), SingularMatrixError);
}

TEST_CASE("transfer matrix: identity, unitary channels, round trip") {
  CHECK(max_abs_diff(choi_to_transfer(identity_channel(kQ2)),
                     ComplexMatrix::identity(16)) == 0.0);

  // unitary channel: transfer = U (x) U* in row-major vectorization
  SplitMix64 rng(34);
  const ComplexMatrix u = haar_unitary(2, rng);
  const ComplexMatrix s = choi_to_transfer(unitary_channel(u, kQ1));
  CHECK(max_abs_diff(s, tensor_product(u, u.conjugate())) < 1e-14);

  // and it acts correctly on vectorized states
  const auto rho = qcn::test::random_physical_state(1, rng);
  ComplexMatrix out_direct = u * rho.matrix() * u.adjoint();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      Complex acc{};
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
          acc += s(i * 2 + j, a * 2 + b) * rho.matrix()(a, b);
      CHECK(std::abs(acc - out_direct(i, j)) < 1e-13);
    }

  // bit-identical round trip on a random HPTP choi
  const auto dec = random_orthogonal_pauli_map(2, 5, rng);
  const ChoiOperator c = choi_from_mixed_unitary(dec, kQ2);
  const ChoiOperator back = transfer_to_choi(choi_to_transfer(c), kQ2);
  CHECK(max_abs_diff(back.matrix(), c.matrix()) == 0.0);
}

TEST_CASE("hp/tp/cp predicates") {
  const ChoiOperator id = identity_channel(kQ1);
  CHECK((is_hp(id) && is_tp(id) && is_cp(id)));

  const auto inv = build_inverse(NoiseFamily::pauli_string({3}, 0.2));
  CHECK(is_hp(inv.choi));
  CHECK(is_tp(inv.choi));
  CHECK_FALSE(is_cp(inv.choi));

  ComplexMatrix broken = id.matrix();
  broken(0, 0) = 2.0; // breaks Tr_tau[Lambda] = I
  const ChoiOperator bad(broken, kQ1);
  CHECK_FALSE(is_tp(bad));
}

TEST_CASE("map partial transpose commutes with the state partial transpose") {
  SplitMix64 rng(35);

  // N = identity: the relation reduces to the partial-transpose involution
  const ChoiOperator id_pt = map_partial_transpose(identity_channel(kQ2), 1);
  for (int t = 0; t < 5; ++t) {
    const auto rho = qcn::test::random_physical_state(2, rng);
    const ComplexMatrix pt =
        partial_transpose_from(rho.matrix(), rho.factorization(), 1);
    CHECK(max_abs_diff(apply(id_pt, pt),
                       partial_transpose_from(rho.matrix(),
                                              rho.factorization(), 1)) <
          1e-13);
  }

  // dephasing n=2 on 100 random states
  const auto deph = build_channel(NoiseFamily::dephasing(2, 0.25));
  const auto deph_pt = map_partial_transpose_from(deph.choi, 1);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto rho = qcn::test::random_physical_state(2, rng);
    const auto lhs = partial_transpose_from(apply(deph.choi, rho.matrix()),
                                            rho.factorization(), 1);
    const auto rhs = apply(
        deph_pt, partial_transpose_from(rho.matrix(), rho.factorization(), 1));
    worst = std::max(worst, max_abs_diff(lhs, rhs));
  }
  CHECK(worst < 1e-10);

  // random mixed-unitary HPTP maps
  for (int t = 0; t < 20; ++t) {
    const auto dec = random_orthogonal_pauli_map(2, 4, rng);
    const ChoiOperator c = choi_from_mixed_unitary(dec, kQ2);
    const ChoiOperator c_pt = map_partial_transpose_from(c, 1);
    const auto rho = qcn::test::random_physical_state(2, rng);
    const auto lhs = partial_transpose_from(apply(c, rho.matrix()),
                                            rho.factorization(), 1);
    const auto rhs = apply(
        c_pt, partial_transpose_from(rho.matrix(), rho.factorization(), 1));
    CHECK(max_abs_diff(lhs, rhs) < 1e-11);
  }

  CHECK_THROWS_AS(map_partial_transpose(identity_channel(kQ2), 2),
                  DimensionError);
}

TEST_CASE("choi JSON serialization round trip") {
  SplitMix64 rng(36);
  const auto dec = random_orthogonal_pauli_map(2, 3, rng);
  const ChoiOperator c = choi_from_mixed_unitary(dec, kQ2);
  const ChoiOperator back = choi_from_json_string(choi_to_json_string(c));
  CHECK(back.system().dims() == c.system().dims());
  CHECK(max_abs_diff(back.matrix(), c.matrix()) == 0.0);

  CHECK_THROWS_AS(choi_from_json_string("{\"d\": 2}"), Error);
  CHECK_THROWS_AS(choi_from_json_string("not json"), Error);
  CHECK_THROWS_AS(
      choi_from_json_string(
          "{\"d\": 2, \"factorization\": [3], \"matrix\": []}"),
      Error);
}

TEST_CASE("state operator validation and flags") {
  CHECK(StateOperator::pure(max_entangled_state(2), kQ2).physical());
  CHECK(StateOperator::maximally_mixed(kQ2).physical());

  ComplexMatrix non_herm(2);
  non_herm(0, 1) = 1.0;
  non_herm(0, 0) = 1.0;
  CHECK_THROWS_AS(StateOperator(non_herm, kQ1), ContractViolation);

  CHECK_THROWS_AS(StateOperator(ComplexMatrix::identity(2), kQ1),
                  ContractViolation); // trace 2

  // signed two-state mixture: Hermitian, unit trace, not physical
  ComplexMatrix signed_mix(2);
  signed_mix(0, 0) = 1.4;
  signed_mix(1, 1) = -0.4;
  const StateOperator s(signed_mix, kQ1);
  CHECK_FALSE(s.physical());
}
