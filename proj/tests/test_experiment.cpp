#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qcn/experiment.hpp"
#include "qcn/pauli.hpp"
#include "qcn/verify.hpp"
#include "test_support.hpp"

using namespace qcn;

namespace {

SweepConfig base_config(NoiseFamily f, std::vector<double> eps,
                        EnsembleKind kind = EnsembleKind::HaarPure,
                        std::size_t count = 300, std::uint64_t seed = 77) {
  SweepConfig cfg{std::move(f), std::move(eps),
                  EnsembleSpec{kind, 2, count, seed}};
  cfg.threads = 2;
  return cfg;
}

} // namespace

TEST_CASE("sweep validates its configuration") {
  CHECK_THROWS_AS(
      run_sweep(base_config(NoiseFamily::depolarizing(2, 0.0), {})),
      ContractViolation);
  CHECK_THROWS_AS(
      run_sweep(base_config(NoiseFamily::pauli_string({3, 3}, 0.0), {0.6})),
      ContractViolation);
  SweepConfig bad = base_config(NoiseFamily::depolarizing(2, 0.0), {0.1});
  bad.ensemble.n = 1;
  CHECK_THROWS_AS(run_sweep(bad), ContractViolation);
  SweepConfig bad_cut = base_config(NoiseFamily::depolarizing(2, 0.0), {0.1});
  bad_cut.cut = 2;
  CHECK_THROWS_AS(run_sweep(bad_cut), ContractViolation);
}

TEST_CASE("sweep records respect the negativity band and overlays") {
  for (const auto &f : {NoiseFamily::depolarizing(2, 0.0),
                        NoiseFamily::amplitude_damping(2, 0.0)}) {
    const SweepResult res = run_sweep(base_config(f, {0.01, 0.1}));
    CHECK(res.records.size() == 2 * 300);
    CHECK(res.total_bound_violations() == 0);
    for (const auto &s : res.summaries) {
      CHECK(s.physical_count == s.samples);
      CHECK(s.max_decrease <= s.nu + 1e-9);
      CHECK(s.min_decrease >= -1e-9);
      CHECK(s.mu <= s.nu + 1e-14);
    }
    // sample 0 is the Bell pair; it reproduces the analytic curve
    for (std::size_t k = 0; k < res.summaries.size(); ++k) {
      const SweepRecord &bell = res.records[k * 300];
      CHECK(bell.sample_index == 0);
      CHECK(bell.e_n_in == doctest::Approx(1.0).epsilon(1e-11));
      CHECK(std::abs(bell.delta - res.summaries[k].max_ent_delta) < 1e-10);
    }
  }
}

TEST_CASE("sweep delta column is consistent") {
  const SweepResult res =
      run_sweep(base_config(NoiseFamily::dephasing(2, 0.0), {0.05}));
  for (const auto &r : res.records)
    CHECK(r.delta == doctest::Approx(r.e_n_out - r.e_n_in).epsilon(1e-14));
}

TEST_CASE("sweep at vanishing error rate is continuous at the identity") {
  const SweepResult res =
      run_sweep(base_config(NoiseFamily::depolarizing(2, 0.0), {1e-6},
                            EnsembleKind::HaarPure, 100));
  CHECK(res.summaries[0].mean_decrease < 1e-4);
  CHECK(res.total_bound_violations() == 0);
}

TEST_CASE("histogram integrates to one over binned samples") {
  const SweepResult res = run_sweep(base_config(
      NoiseFamily::depolarizing(2, 0.0), {0.01}, EnsembleKind::SignedMixture,
      2000, 3));
  const Histogram &h = res.summaries[0].histogram;
  double area = 0.0;
  for (double d : h.densities) area += d * h.bin_width();
  CHECK(std::abs(area - 1.0) < 1e-9);
  CHECK(h.binned + h.underflow + h.overflow == 2000);
  // the negativity-decrease band needs no positivity, so even signed
  // mixtures stay inside [0, nu]
  CHECK(h.underflow + h.overflow == 0);
}

TEST_CASE("signed-mixture depolarizing histogram peaks at log2(1/(1-eps))") {
  const double eps = 0.01;
  const SweepResult res = run_sweep(base_config(
      NoiseFamily::depolarizing(2, 0.0), {eps}, EnsembleKind::SignedMixture,
      10000, 5));
  const Histogram &h = res.summaries[0].histogram;
  const double peak = h.peak_center();
  CHECK(std::abs(peak - std::log2(1.0 / (1.0 - eps))) <= h.bin_width());
}

TEST_CASE("csv writers are deterministic and carry metadata") {
  const SweepConfig cfg = base_config(NoiseFamily::dephasing(2, 0.0), {0.1},
                                      EnsembleKind::HaarPure, 50);
  const std::string a = sweep_records_csv(run_sweep(cfg));
  const std::string b = sweep_records_csv(run_sweep(cfg));
  CHECK(a == b);
  CHECK(a.find("# qcn sweep") != std::string::npos);
  CHECK(a.find("seed=77") != std::string::npos);
  CHECK(a.find("rng=splitmix64+box-muller") != std::string::npos);
  CHECK(a.find("epsilon,sample_index,e_n_in") != std::string::npos);

  // parallel evaluation does not change the output
  SweepConfig wide = cfg;
  wide.threads = 8;
  CHECK(sweep_records_csv(run_sweep(wide)) == a);
}

TEST_CASE("purity audit: clean run, exact depolarizing ratio, refusals") {
  PurityAuditConfig cfg{NoiseFamily::depolarizing(2, 0.0),
                        {0.05, 0.2},
                        EnsembleSpec{EnsembleKind::HaarPure, 2, 200, 9}};
  cfg.threads = 2;
  const PurityAuditResult res = run_purity_audit(cfg);
  CHECK(res.total_violations() == 0);
  for (const auto &s : res.summaries) {
    CHECK(s.violation_count == 0);
    // depolarizing shrinks the Bloch vector uniformly
    CHECK(std::abs(s.min_ratio - 2.0 * std::log2(1.0 - s.epsilon)) < 1e-9);
    CHECK(std::abs(s.max_ratio - 2.0 * std::log2(1.0 - s.epsilon)) < 1e-9);
  }

  PurityAuditConfig ad = cfg;
  ad.noise = NoiseFamily::amplitude_damping(2, 0.0);
  CHECK_THROWS_WITH_AS(run_purity_audit(ad),
                       doctest::Contains("amplitude damping"),
                       ContractViolation);
}

TEST_CASE("purity audit marks maximally mixed inputs as degenerate") {
  const NoiseFamily f = NoiseFamily::dephasing(2, 0.1);
  const ChoiOperator choi = build_channel(f).choi;
  const PurityRecord degenerate = purity_audit_record(
      choi, StateOperator::maximally_mixed(Factorization::qubits(2)), 0.1,
      nu_inverse(f), f.kind, 0);
  CHECK(degenerate.degenerate);
  CHECK_FALSE(degenerate.violation);
  CHECK(degenerate.purity_in == doctest::Approx(0.25));

  SplitMix64 rng(10);
  const PurityRecord regular = purity_audit_record(
      choi, qcn::test::random_physical_state(2, rng), 0.1, nu_inverse(f),
      f.kind, 1);
  CHECK_FALSE(regular.degenerate);
  CHECK_FALSE(regular.violation);
  CHECK(regular.bloch_ratio >= 1.0 - 0.1 - 1e-9);
  CHECK(regular.bloch_ratio <= 1.0 + 1e-9);

  // mixed ensembles stay violation-free end to end
  PurityAuditConfig cfg{NoiseFamily::dephasing(2, 0.0),
                        {0.1},
                        EnsembleSpec{EnsembleKind::PhysicalMixture, 2, 150, 10}};
  cfg.threads = 1;
  CHECK(run_purity_audit(cfg).total_violations() == 0);
}

TEST_CASE("analytic table covers the families and flags odd-n blanks") {
  const auto rows = analytic_table(
      {NoiseFamily::pauli_string({3}, 0.0), NoiseFamily::depolarizing(2, 0.0)},
      {0.01, 0.1});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].family == "pauli(z)");
  CHECK(std::isnan(rows[0].max_ent_delta)); // n = 1 has no half cut
  CHECK(rows[2].nu ==
        doctest::Approx(nu_inverse(NoiseFamily::depolarizing(2, 0.01))));
  const std::string csv = analytic_csv(rows);
  CHECK(csv.find("family,qubits,epsilon,nu,mu,max_entangled_delta") !=
        std::string::npos);
}

TEST_CASE("ingest: identity, dephasing and a non-invertible channel") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qcn_ingest_test";
  fs::create_directories(dir);

  const std::string id_path = (dir / "identity.json").string();
  save_choi_file(id_path, identity_channel(Factorization::qubits(2)));
  const IngestReport id_rep = ingest_channel(id_path);
  CHECK((id_rep.hp && id_rep.tp && id_rep.cp));
  CHECK(id_rep.invertible);
  REQUIRE(id_rep.channel_bounds.has_value());
  CHECK(id_rep.channel_bounds->lower_trace == doctest::Approx(0.0));
  REQUIRE(id_rep.inverse_bounds.has_value());
  CHECK(id_rep.inverse_bounds->upper_min_eig == doctest::Approx(0.0));
  REQUIRE(id_rep.separability.has_value());
  CHECK(id_rep.separability->satisfied);

  const std::string deph_path = (dir / "dephasing.json").string();
  save_choi_file(deph_path,
                 build_channel(NoiseFamily::dephasing(2, 0.2)).choi);
  const IngestReport deph_rep = ingest_channel(deph_path);
  CHECK(deph_rep.invertible);
  REQUIRE(deph_rep.inverse_bounds.has_value());
  const double nu = nu_inverse(NoiseFamily::dephasing(2, 0.2));
  CHECK(deph_rep.inverse_bounds->best_lower() <= nu + 1e-9);
  CHECK(deph_rep.inverse_bounds->best_upper() >= nu - 1e-9);

  // completely depolarizing: not invertible, channel bounds still present
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix e(2);
      e(i, j) = 1.0 / std::sqrt(2.0);
      kraus.push_back(std::move(e));
    }
  const std::string ti_path = (dir / "t_i.json").string();
  save_choi_file(ti_path,
                 choi_from_kraus(KrausChannel(kraus), Factorization::qubits(1)));
  const IngestReport ti_rep = ingest_channel(ti_path);
  CHECK_FALSE(ti_rep.invertible);
  CHECK(ti_rep.channel_bounds.has_value());
  CHECK_FALSE(ti_rep.inverse_bounds.has_value());

  const std::string json = ingest_to_json_string(ti_rep);
  CHECK(json.find("\"invertible\": false") != std::string::npos);

  CHECK_THROWS_AS(ingest_channel((dir / "missing.json").string()), Error);
  fs::remove_all(dir);
}

TEST_CASE("verify registry runs and reports") {
  verify::Options opts;
  opts.samples = 40;
  const auto names = verify::module_names();
  CHECK(names.size() == 6);
  const auto report = verify::run_module("linalg", opts);
  CHECK(report.pass());
  CHECK_THROWS_AS(verify::run_module("nope", opts), ContractViolation);

  const std::string json = verify::reports_to_json_string({report});
  CHECK(json.find("\"module\": \"linalg\"") != std::string::npos);
  CHECK(json.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("tampered closed form fails the consistency check") {
  const NoiseFamily f = NoiseFamily::depolarizing(2, 0.15);
  CHECK(verify::nu_matches_trace_norm(f, nu_inverse(f)));
  CHECK_FALSE(verify::nu_matches_trace_norm(f, nu_inverse(f) + 0.01));
  CHECK_FALSE(verify::nu_matches_trace_norm(f, nu_inverse(f) * 1.001));
}

TEST_CASE("write_text_file creates parents and round-trips") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qcn_write_test";
  fs::remove_all(dir);
  const std::string path = (dir / "a" / "b.txt").string();
  write_text_file(path, "payload\n");
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "payload");
  fs::remove_all(dir);
}

TEST_CASE("purity audit CSV is deterministic and carries metadata") {
  PurityAuditConfig cfg{NoiseFamily::depolarizing(2, 0.0),
                        {0.1},
                        EnsembleSpec{EnsembleKind::HaarPure, 2, 60, 13}};
  cfg.threads = 2;
  const std::string a = purity_records_csv(run_purity_audit(cfg));
  const std::string b = purity_records_csv(run_purity_audit(cfg));
  CHECK(a == b);
  CHECK(a.find("# qcn purity-audit") != std::string::npos);
  CHECK(a.find("ratio_bits") != std::string::npos);
}

TEST_CASE("JSON writers emit parseable documents") {
  const SweepConfig cfg = base_config(NoiseFamily::amplitude_damping(2, 0.0),
                                      {0.05}, EnsembleKind::HaarPure, 30);
  const SweepResult res = run_sweep(cfg);
  for (const std::string &text :
       {sweep_to_json_string(res), sweep_summary_json(res)}) {
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.contains("metadata"));
    CHECK(j.at("metadata").at("seed") == 77);
    CHECK(j.at("summaries").size() == 1);
  }
  const nlohmann::json full = nlohmann::json::parse(sweep_to_json_string(res));
  CHECK(full.at("records").size() == 30);

  PurityAuditConfig pcfg{NoiseFamily::dephasing(2, 0.0),
                         {0.1},
                         EnsembleSpec{EnsembleKind::HaarPure, 2, 20, 1}};
  pcfg.threads = 1;
  const nlohmann::json pj =
      nlohmann::json::parse(purity_to_json_string(run_purity_audit(pcfg)));
  CHECK(pj.at("records").size() == 20);

  const nlohmann::json aj = nlohmann::json::parse(analytic_json(
      analytic_table({NoiseFamily::dephasing(1, 0.0)}, {0.1})));
  // odd qubit count: the half-cut closed form is reported as null
  CHECK(aj.at("rows").at(0).at("max_entangled_delta").is_null());
}

TEST_CASE("vacuous eigenvalue bounds surface as null in ingest reports") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qcn_ingest_null";
  fs::create_directories(dir);
  // state-replacement channel: serves every input the maximally mixed state;
  // its Choi is I/d with lambda_max = 1/d, so the max-eigenvalue lower bound
  // is vacuous
  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix e(2);
      e(i, j) = 1.0 / std::sqrt(2.0);
      kraus.push_back(std::move(e));
    }
  const std::string path = (dir / "replace.json").string();
  save_choi_file(path,
                 choi_from_kraus(KrausChannel(kraus), Factorization::qubits(1)));
  const nlohmann::json j =
      nlohmann::json::parse(ingest_to_json_string(ingest_channel(path)));
  CHECK(j.at("channel_bounds").at("lower_max_eig").is_null());
  CHECK(std::abs(j.at("channel_bounds").at("lower_trace").get<double>()) <
        1e-12);
  fs::remove_all(dir);
}
