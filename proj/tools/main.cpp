#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcn/experiment.hpp"
#include "qcn/verify.hpp"
#include "qcn/version.hpp"

namespace {

using qcn::ContractViolation;
using qcn::EnsembleKind;
using qcn::EnsembleSpec;
using qcn::NoiseFamily;
using qcn::NoiseKind;
using qcn::OutputFormat;

NoiseKind parse_noise_kind(const std::string &s) {
  if (s == "pauli") return NoiseKind::PauliString;
  if (s == "depolarizing") return NoiseKind::Depolarizing;
  if (s == "dephasing") return NoiseKind::Dephasing;
  if (s == "amplitude-damping" || s == "ad")
    return NoiseKind::AmplitudeDamping;
  throw ContractViolation(
      "unknown noise kind '" + s +
      "' (expected pauli|depolarizing|dephasing|amplitude-damping)");
}

std::vector<int> parse_axes(const std::string &s) {
  std::vector<int> axes;
  for (char c : s) {
    switch (c) {
      case 'x': case 'X': case '1': axes.push_back(1); break;
      case 'y': case 'Y': case '2': axes.push_back(2); break;
      case 'z': case 'Z': case '3': axes.push_back(3); break;
      default:
        throw ContractViolation("bad axis character '" + std::string(1, c) +
                                "' in --axes (use x, y, z)");
    }
  }
  return axes;
}

EnsembleKind parse_ensemble(const std::string &s) {
  if (s == "haar-pure") return EnsembleKind::HaarPure;
  if (s == "signed-mixture") return EnsembleKind::SignedMixture;
  if (s == "physical-mixture") return EnsembleKind::PhysicalMixture;
  throw ContractViolation(
      "unknown ensemble '" + s +
      "' (expected haar-pure|signed-mixture|physical-mixture)");
}

OutputFormat parse_format(const std::string &s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw ContractViolation("unknown format '" + s + "' (expected csv|json)");
}

std::vector<double> parse_epsilons(const std::string &s) {
  std::vector<double> eps;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    const std::string tok = s.substr(pos, next - pos);
    try {
      eps.push_back(std::stod(tok));
    } catch (const std::exception &) {
      throw ContractViolation("bad epsilon value '" + tok + "'");
    }
    pos = next + 1;
  }
  if (eps.empty()) throw ContractViolation("empty epsilon list");
  return eps;
}

std::vector<double> default_epsilon_grid() {
  std::vector<double> eps;
  for (int k = 1; k <= 30; ++k) eps.push_back(0.01 * k);
  return eps;
}

/// Option values shared by sweep/purity-audit/analytic; a JSON config file
/// supplies defaults, command-line flags win.
struct CommonArgs {
  std::optional<std::string> noise, axes, ensemble, format, out, epsilons;
  std::optional<std::size_t> qubits, samples, cut, threads;
  std::optional<std::uint64_t> seed;
  std::string config_path;

  void load_config() {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw ContractViolation("cannot open config " + config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception &e) {
      throw ContractViolation("config parse error: " + std::string(e.what()));
    }
    const auto take_str = [&](const char *key, std::optional<std::string> &t) {
      if (!t && j.contains(key)) t = j.at(key).get<std::string>();
    };
    const auto take_size = [&](const char *key, std::optional<std::size_t> &t) {
      if (!t && j.contains(key)) t = j.at(key).get<std::size_t>();
    };
    take_str("noise", noise);
    take_str("axes", axes);
    take_str("ensemble", ensemble);
    take_str("format", format);
    take_str("out", out);
    if (!epsilons && j.contains("epsilons")) {
      if (j.at("epsilons").is_array()) {
        std::string s;
        for (const auto &v : j.at("epsilons")) {
          if (!s.empty()) s += ",";
          s += qcn::format_double(v.get<double>());
        }
        epsilons = s;
      } else {
        epsilons = j.at("epsilons").get<std::string>();
      }
    }
    take_size("qubits", qubits);
    take_size("samples", samples);
    take_size("cut", cut);
    take_size("threads", threads);
    if (!seed && j.contains("seed")) seed = j.at("seed").get<std::uint64_t>();
  }

  NoiseFamily resolve_noise() const {
    const std::string kind_s = noise.value_or("depolarizing");
    const NoiseKind kind = parse_noise_kind(kind_s);
    if (kind == NoiseKind::PauliString) {
      const std::string ax = axes.value_or(
          std::string(qubits.value_or(2), 'z'));
      auto parsed = parse_axes(ax);
      if (qubits && *qubits != parsed.size())
        throw ContractViolation("--qubits disagrees with --axes length");
      return NoiseFamily::pauli_string(std::move(parsed), 0.0);
    }
    const std::size_t n = qubits.value_or(2);
    switch (kind) {
      case NoiseKind::Depolarizing: return NoiseFamily::depolarizing(n, 0.0);
      case NoiseKind::Dephasing: return NoiseFamily::dephasing(n, 0.0);
      default: return NoiseFamily::amplitude_damping(n, 0.0);
    }
  }

  std::vector<double> resolve_epsilons() const {
    return epsilons ? parse_epsilons(*epsilons) : default_epsilon_grid();
  }

  EnsembleSpec resolve_ensemble(std::size_t n) const {
    return EnsembleSpec{parse_ensemble(ensemble.value_or("haar-pure")), n,
                        samples.value_or(10000), seed.value_or(42)};
  }
};

void add_common_options(CLI::App *cmd, CommonArgs &args, bool with_ensemble) {
  cmd->add_option("--config", args.config_path,
                  "JSON config file; flags override its values");
  cmd->add_option("--noise", args.noise,
                  "pauli|depolarizing|dephasing|amplitude-damping");
  cmd->add_option("--axes", args.axes, "Pauli axes, e.g. zz or xy");
  cmd->add_option("--qubits", args.qubits, "qubit count");
  cmd->add_option("--epsilons", args.epsilons,
                  "comma-separated error rates (default 0.01..0.30)");
  cmd->add_option("--out", args.out, "output file path");
  cmd->add_option("--format", args.format, "csv|json (default csv)");
  if (with_ensemble) {
    cmd->add_option("--ensemble", args.ensemble,
                    "haar-pure|signed-mixture|physical-mixture");
    cmd->add_option("--samples", args.samples,
                    "samples per epsilon (default 10000)");
    cmd->add_option("--seed", args.seed, "RNG seed (default 42)");
    cmd->add_option("--threads", args.threads,
                    "worker threads (default: hardware)");
  }
}

int run_sweep_cmd(CommonArgs &args) {
  args.load_config();
  qcn::SweepConfig cfg{args.resolve_noise(), args.resolve_epsilons(),
                       EnsembleSpec{}};
  cfg.ensemble = args.resolve_ensemble(cfg.noise.n);
  cfg.cut = args.cut.value_or(0);
  cfg.format = parse_format(args.format.value_or("csv"));
  cfg.out_path = args.out.value_or("");
  cfg.threads = args.threads.value_or(0);
  cfg.validate();

  const qcn::SweepResult result = qcn::run_sweep(cfg);
  for (const auto &s : result.summaries) {
    std::printf(
        "eps=%-8.4g samples=%zu physical=%zu mean|dE|=%-11.5g max|dE|=%-11.5g "
        "nu=%-11.5g mu_cover=%.4f violations=%zu\n",
        s.epsilon, s.samples, s.physical_count, s.mean_decrease,
        s.max_decrease, s.nu, s.mu_cover_fraction, s.bound_violation_count);
  }
  if (!cfg.out_path.empty()) {
    if (cfg.format == OutputFormat::Csv) {
      qcn::write_text_file(cfg.out_path, qcn::sweep_records_csv(result));
      qcn::write_text_file(cfg.out_path + ".summary.json",
                           qcn::sweep_summary_json(result));
      std::printf("wrote %s and %s.summary.json\n", cfg.out_path.c_str(),
                  cfg.out_path.c_str());
    } else {
      qcn::write_text_file(cfg.out_path, qcn::sweep_to_json_string(result));
      std::printf("wrote %s\n", cfg.out_path.c_str());
    }
  }
  const std::size_t violations = result.total_bound_violations();
  if (violations != 0) {
    std::fprintf(stderr, "error: %zu record(s) violated the negativity bound\n",
                 violations);
    return 1;
  }
  return 0;
}

int run_purity_cmd(CommonArgs &args) {
  args.load_config();
  qcn::PurityAuditConfig cfg{args.resolve_noise(), args.resolve_epsilons(),
                             EnsembleSpec{}};
  cfg.ensemble = args.resolve_ensemble(cfg.noise.n);
  cfg.format = parse_format(args.format.value_or("csv"));
  cfg.out_path = args.out.value_or("");
  cfg.threads = args.threads.value_or(0);
  cfg.validate();

  const qcn::PurityAuditResult result = qcn::run_purity_audit(cfg);
  for (const auto &s : result.summaries) {
    std::printf(
        "eps=%-8.4g samples=%zu ratio=[%.5g, %.5g] -2nu=%-11.5g "
        "violations=%zu shrink_violations=%zu degenerate=%zu\n",
        s.epsilon, s.samples, s.min_ratio, s.max_ratio, -2.0 * s.nu,
        s.violation_count, s.shrink_violation_count, s.degenerate_count);
  }
  if (!cfg.out_path.empty()) {
    if (cfg.format == OutputFormat::Csv)
      qcn::write_text_file(cfg.out_path, qcn::purity_records_csv(result));
    else
      qcn::write_text_file(cfg.out_path,
                           qcn::purity_to_json_string(result));
    std::printf("wrote %s\n", cfg.out_path.c_str());
  }
  if (result.total_violations() != 0) {
    std::fprintf(stderr, "error: %zu purity-bound violation(s)\n",
                 result.total_violations());
    return 1;
  }
  return 0;
}

int run_analytic_cmd(CommonArgs &args) {
  args.load_config();
  std::vector<NoiseFamily> families;
  if (args.noise) {
    families.push_back(args.resolve_noise());
  } else {
    const std::size_t n = args.qubits.value_or(2);
    families = {NoiseFamily::pauli_string(std::vector<int>(n, 3), 0.0),
                NoiseFamily::depolarizing(n, 0.0),
                NoiseFamily::dephasing(n, 0.0),
                NoiseFamily::amplitude_damping(n, 0.0)};
  }
  const auto rows = qcn::analytic_table(families, args.resolve_epsilons());
  const OutputFormat format = parse_format(args.format.value_or("csv"));
  const std::string text = format == OutputFormat::Csv
                               ? qcn::analytic_csv(rows)
                               : qcn::analytic_json(rows);
  if (args.out) {
    qcn::write_text_file(*args.out, text);
    std::printf("wrote %s\n", args.out->c_str());
  } else {
    std::fputs(text.c_str(), stdout);
  }
  return 0;
}

int run_verify_cmd(const std::string &module, std::uint64_t seed,
                   std::size_t samples, const std::string &out) {
  qcn::verify::Options opts;
  opts.seed = seed;
  opts.samples = samples;
  std::vector<qcn::verify::ModuleReport> reports;
  if (module == "all")
    reports = qcn::verify::run_all(opts);
  else
    reports.push_back(qcn::verify::run_module(module, opts));

  for (const auto &r : reports)
    for (const auto &c : r.checks)
      std::fprintf(stderr, "[%s] %s/%s: %s\n", c.pass ? "PASS" : "FAIL",
                   r.module.c_str(), c.name.c_str(), c.details.c_str());

  const std::string json = qcn::verify::reports_to_json_string(reports);
  if (out.empty())
    std::fputs(json.c_str(), stdout);
  else
    qcn::write_text_file(out, json);
  return qcn::verify::all_pass(reports) ? 0 : 1;
}

int run_ingest_cmd(const std::string &path, const std::string &out) {
  const qcn::IngestReport report = qcn::ingest_channel(path);
  const std::string json = qcn::ingest_to_json_string(report);
  if (out.empty())
    std::fputs(json.c_str(), stdout);
  else
    qcn::write_text_file(out, json);
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"quantum-channel numerics: noise inverses, implementability "
               "and negativity experiments"};
  app.set_version_flag("--version", QCN_VERSION);
  app.require_subcommand(1);

  CommonArgs sweep_args, purity_args, analytic_args;
  auto *sweep = app.add_subcommand(
      "sweep", "epsilon sweep of the negativity decrease over an ensemble");
  add_common_options(sweep, sweep_args, true);
  sweep->add_option("--cut", sweep_args.cut,
                    "bipartition: qubits [0, cut) form side A (default n/2)");

  auto *purity = app.add_subcommand(
      "purity-audit", "audit the purity-ratio band over an ensemble");
  add_common_options(purity, purity_args, true);

  auto *analytic = app.add_subcommand(
      "analytic", "closed-form tables of nu, mu and the Bell-state drop");
  add_common_options(analytic, analytic_args, false);

  std::string verify_module = "all";
  std::uint64_t verify_seed = 20230917;
  std::size_t verify_samples = 200;
  std::string verify_out;
  auto *verify = app.add_subcommand(
      "verify", "run invariant suites (JSON report on stdout)");
  verify->add_option("module", verify_module,
                     "all|linalg|channel|noise|measures|sampling|experiment");
  verify->add_option("--seed", verify_seed, "property-check seed");
  verify->add_option("--samples", verify_samples, "samples per property");
  verify->add_option("--out", verify_out, "write the JSON report here");

  std::string ingest_path, ingest_out;
  auto *ingest = app.add_subcommand(
      "ingest", "audit a Choi operator from a JSON channel file");
  ingest->add_option("file", ingest_path, "channel JSON file")->required();
  ingest->add_option("--out", ingest_out, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return run_sweep_cmd(sweep_args);
    if (purity->parsed()) return run_purity_cmd(purity_args);
    if (analytic->parsed()) return run_analytic_cmd(analytic_args);
    if (verify->parsed())
      return run_verify_cmd(verify_module, verify_seed, verify_samples,
                            verify_out);
    if (ingest->parsed()) return run_ingest_cmd(ingest_path, ingest_out);
  } catch (const qcn::Error &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 2;
  }
  return 2;
}
