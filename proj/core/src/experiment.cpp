#include "qcn/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <json.hpp>

#include "qcn/pauli.hpp"
#include "qcn/version.hpp"

namespace qcn {

namespace {

constexpr double kAuditTol = 1e-9;

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)> &fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto &th : pool) th.join();
}

double percentile(const std::vector<double> &sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double rank = std::ceil(p * static_cast<double>(sorted.size()));
  const std::size_t idx = static_cast<std::size_t>(
      std::clamp(rank - 1.0, 0.0, double(sorted.size() - 1)));
  return sorted[idx];
}

struct SampleInput {
  StateOperator state;
  double e_n;
  double purity;
};

std::vector<SampleInput> prepare_inputs(const EnsembleSpec &spec,
                                        std::size_t cut, bool inject_bell,
                                        std::size_t threads) {
  EnsembleStream stream(spec);
  std::vector<std::optional<SampleInput>> slots(spec.count);
  parallel_for(spec.count, threads, [&](std::size_t i) {
    StateOperator s = (inject_bell && i == 0)
                          ? StateOperator::pure(max_entangled_state(spec.n),
                                                Factorization::qubits(spec.n))
                          : stream.at(i);
    const double en = log_negativity(s, cut);
    const double p = purity(s);
    slots[i] = SampleInput{std::move(s), en, p};
  });
  std::vector<SampleInput> out;
  out.reserve(spec.count);
  for (auto &slot : slots) out.push_back(std::move(*slot));
  return out;
}

std::string epsilons_string(const std::vector<double> &eps) {
  std::string s;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i) s += ",";
    s += format_double(eps[i]);
  }
  return s;
}

std::string metadata_block(const std::string &command, const NoiseFamily &noise,
                           const std::vector<double> &epsilons,
                           const EnsembleSpec *ensemble, std::size_t cut) {
  std::string s;
  s += "# qcn " + command + " v" QCN_VERSION "\n";
  s += "# noise=" + noise.label() + " qubits=" + std::to_string(noise.n) + "\n";
  s += "# epsilons=" + epsilons_string(epsilons) + "\n";
  if (ensemble) {
    s += "# ensemble=" + to_string(ensemble->kind) +
         " samples=" + std::to_string(ensemble->count) +
         " seed=" + std::to_string(ensemble->seed) + " rng=" +
         rng_description() + "\n";
  }
  if (cut) s += "# cut=" + std::to_string(cut) + "\n";
  return s;
}

nlohmann::json metadata_json(const std::string &command,
                             const NoiseFamily &noise,
                             const std::vector<double> &epsilons,
                             const EnsembleSpec *ensemble, std::size_t cut) {
  nlohmann::json j;
  j["command"] = command;
  j["version"] = QCN_VERSION;
  j["noise"] = noise.label();
  j["qubits"] = noise.n;
  j["epsilons"] = epsilons;
  if (ensemble) {
    j["ensemble"] = to_string(ensemble->kind);
    j["samples"] = ensemble->count;
    j["seed"] = ensemble->seed;
    j["rng"] = rng_description();
  }
  if (cut) j["cut"] = cut;
  return j;
}

nlohmann::json bounds_json(const ImplementabilityBounds &b) {
  const auto put = [](nlohmann::json &j, const char *key, double v) {
    if (std::isfinite(v))
      j[key] = v;
    else
      j[key] = nullptr; // vacuous bound (-inf)
  };
  nlohmann::json j;
  put(j, "lower_trace", b.lower_trace);
  put(j, "upper_trace", b.upper_trace);
  put(j, "lower_max_eig", b.lower_max_eig);
  put(j, "lower_min_eig", b.lower_min_eig);
  put(j, "upper_min_eig", b.upper_min_eig);
  return j;
}

} // namespace

std::string to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string &path, const std::string &text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

double Histogram::bin_width() const {
  return densities.empty() ? 0.0
                           : (edges.back() - edges.front()) /
                                 static_cast<double>(densities.size());
}

double Histogram::peak_center() const {
  if (densities.empty()) return 0.0;
  const std::size_t k = static_cast<std::size_t>(
      std::max_element(densities.begin(), densities.end()) -
      densities.begin());
  return 0.5 * (edges[k] + edges[k + 1]);
}

void SweepConfig::validate() const {
  noise.validate();
  if (epsilons.empty()) throw ContractViolation("sweep: empty epsilon grid");
  for (double e : epsilons)
    if (!(e > 0.0) || e >= noise.epsilon_max())
      throw ContractViolation("sweep: epsilon " + format_double(e) +
                              " outside (0, " +
                              format_double(noise.epsilon_max()) + ")");
  if (ensemble.n != noise.n)
    throw ContractViolation("sweep: ensemble qubit count differs from noise");
  if (noise.n < 2)
    throw ContractViolation("sweep: need >= 2 qubits for a bipartition");
  const std::size_t c = effective_cut();
  if (c == 0 || c >= noise.n) throw ContractViolation("sweep: invalid cut");
}

std::size_t SweepResult::total_bound_violations() const {
  std::size_t n = 0;
  for (const auto &s : summaries) n += s.bound_violation_count;
  return n;
}

SweepResult run_sweep(const SweepConfig &config) {
  config.validate();
  const std::size_t cut = config.effective_cut();
  const bool inject = config.inject_max_entangled && config.noise.n % 2 == 0 &&
                      cut == config.noise.n / 2;
  const auto inputs =
      prepare_inputs(config.ensemble, cut, inject, config.threads);
  const std::size_t count = inputs.size();

  SweepResult result;
  result.config = config;
  result.records.reserve(count * config.epsilons.size());

  for (double eps : config.epsilons) {
    NoiseFamily f = config.noise;
    f.epsilon = eps;
    const ChoiOperator choi = build_channel(f).choi;

    std::vector<SweepRecord> records(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
      const SampleInput &in = inputs[i];
      const StateOperator out = apply(choi, in.state);
      SweepRecord r;
      r.epsilon = eps;
      r.sample_index = i;
      r.e_n_in = in.e_n;
      r.e_n_out = log_negativity(out, cut);
      r.delta = r.e_n_out - r.e_n_in;
      r.purity_in = in.purity;
      r.purity_out = purity(out);
      r.physical_in = in.state.physical();
      records[i] = r;
    });

    EpsilonSummary s;
    s.epsilon = eps;
    s.samples = count;
    s.nu = nu_inverse(f);
    s.mu = mu_inverse(f);
    if (f.n % 2 == 0)
      s.max_ent_delta = max_entangled_delta(f);
    else
      s.max_ent_delta = std::numeric_limits<double>::quiet_NaN();

    std::vector<double> decreases(count);
    for (std::size_t i = 0; i < count; ++i) {
      const SweepRecord &r = records[i];
      decreases[i] = -r.delta;
      if (r.physical_in) {
        ++s.physical_count;
        if (-r.delta > s.nu + kAuditTol || r.delta > kAuditTol)
          ++s.bound_violation_count;
        if (-r.delta > s.mu) ++s.mu_exceed_count;
      }
    }
    s.mu_cover_fraction =
        s.physical_count == 0
            ? 0.0
            : 1.0 - double(s.mu_exceed_count) / double(s.physical_count);

    std::vector<double> sorted = decreases;
    std::sort(sorted.begin(), sorted.end());
    s.min_decrease = sorted.front();
    s.max_decrease = sorted.back();
    s.mean_decrease = 0.0;
    for (double v : sorted) s.mean_decrease += v;
    s.mean_decrease /= double(count);
    s.p05 = percentile(sorted, 0.05);
    s.p25 = percentile(sorted, 0.25);
    s.p50 = percentile(sorted, 0.50);
    s.p75 = percentile(sorted, 0.75);
    s.p95 = percentile(sorted, 0.95);

    // Histogram: 100 uniform bins over [0, nu]; density normalized to unit
    // area over the binned samples. Values outside the window (possible only
    // for non-physical inputs, up to audit tolerance) are counted aside.
    constexpr std::size_t kBins = 100;
    Histogram &h = s.histogram;
    const double width = s.nu / double(kBins);
    h.edges.resize(kBins + 1);
    for (std::size_t b = 0; b <= kBins; ++b) h.edges[b] = width * double(b);
    std::vector<std::size_t> counts(kBins, 0);
    for (double v : decreases) {
      if (v < -kAuditTol) {
        ++h.underflow;
        continue;
      }
      if (v > s.nu + kAuditTol) {
        ++h.overflow;
        continue;
      }
      const double clamped = std::clamp(v, 0.0, s.nu);
      std::size_t bin = width > 0.0
                            ? std::min(kBins - 1,
                                       static_cast<std::size_t>(clamped / width))
                            : 0;
      ++counts[bin];
      ++h.binned;
    }
    h.densities.resize(kBins);
    for (std::size_t b = 0; b < kBins; ++b)
      h.densities[b] = h.binned == 0 || width == 0.0
                           ? 0.0
                           : double(counts[b]) / (double(h.binned) * width);

    result.summaries.push_back(std::move(s));
    result.records.insert(result.records.end(), records.begin(),
                          records.end());
  }
  return result;
}

void PurityAuditConfig::validate() const {
  noise.validate();
  if (noise.kind == NoiseKind::AmplitudeDamping)
    throw ContractViolation(
        "purity-audit: amplitude damping is not a mixed-unitary channel, so "
        "the purity-ratio bound does not apply;"
        " use Pauli, depolarizing or dephasing noise");
  if (epsilons.empty())
    throw ContractViolation("purity-audit: empty epsilon grid");
  for (double e : epsilons)
    if (!(e > 0.0) || e >= noise.epsilon_max())
      throw ContractViolation("purity-audit: epsilon out of range");
  if (ensemble.n != noise.n)
    throw ContractViolation(
        "purity-audit: ensemble qubit count differs from noise");
}

std::size_t PurityAuditResult::total_violations() const {
  std::size_t n = 0;
  for (const auto &s : summaries)
    n += s.violation_count + s.shrink_violation_count;
  return n;
}

PurityRecord purity_audit_record(const ChoiOperator &channel,
                                 const StateOperator &input, double epsilon,
                                 double nu, NoiseKind kind,
                                 std::size_t sample_index) {
  const double d = static_cast<double>(input.dim());
  const StateOperator out = apply(channel, input);
  PurityRecord r{};
  r.epsilon = epsilon;
  r.sample_index = sample_index;
  r.purity_in = purity(input);
  r.purity_out = purity(out);
  r.physical_in = input.physical();
  const double r2_in = r.purity_in * d - 1.0;
  const double r2_out = r.purity_out * d - 1.0;
  if (r2_in <= 1e-12) {
    r.degenerate = true; // |r(rho0)| = 0, the ratio is 0/0
    r.ratio_bits = 0.0;
    r.bloch_ratio = 0.0;
    return r;
  }
  r.ratio_bits = std::log2(r2_out / r2_in);
  r.bloch_ratio = std::sqrt(r2_out / r2_in);
  bool bad =
      r.ratio_bits < -2.0 * nu - kAuditTol || r.ratio_bits > kAuditTol;
  if (kind == NoiseKind::Depolarizing &&
      std::abs(r.ratio_bits - 2.0 * std::log2(1.0 - epsilon)) > kAuditTol)
    bad = true;
  r.violation = bad;
  return r;
}

PurityAuditResult run_purity_audit(const PurityAuditConfig &config) {
  config.validate();

  EnsembleStream stream(config.ensemble);
  const std::size_t count = stream.size();
  std::vector<std::optional<StateOperator>> inputs(count);
  parallel_for(count, config.threads,
               [&](std::size_t i) { inputs[i] = stream.at(i); });

  PurityAuditResult result;
  result.config = config;

  for (double eps : config.epsilons) {
    NoiseFamily f = config.noise;
    f.epsilon = eps;
    const ChoiOperator choi = build_channel(f).choi;
    const double nu = nu_inverse(f);

    std::vector<PurityRecord> records(count);
    parallel_for(count, config.threads, [&](std::size_t i) {
      records[i] =
          purity_audit_record(choi, *inputs[i], eps, nu, f.kind, i);
    });

    PurityEpsilonSummary s;
    s.epsilon = eps;
    s.nu = nu;
    s.samples = count;
    bool first = true;
    for (const auto &r : records) {
      if (r.degenerate) {
        ++s.degenerate_count;
        continue;
      }
      if (r.violation) ++s.violation_count;
      if (config.noise.kind == NoiseKind::Dephasing &&
          (r.bloch_ratio < 1.0 - eps - kAuditTol ||
           r.bloch_ratio > 1.0 + kAuditTol))
        ++s.shrink_violation_count;
      if (first || r.ratio_bits < s.min_ratio) s.min_ratio = r.ratio_bits;
      if (first || r.ratio_bits > s.max_ratio) s.max_ratio = r.ratio_bits;
      first = false;
    }
    result.summaries.push_back(s);
    result.records.insert(result.records.end(), records.begin(),
                          records.end());
  }
  return result;
}

std::vector<AnalyticRow> analytic_table(
    const std::vector<NoiseFamily> &families,
    const std::vector<double> &epsilons) {
  std::vector<AnalyticRow> rows;
  for (const auto &base : families) {
    for (double eps : epsilons) {
      NoiseFamily f = base;
      f.epsilon = eps;
      f.validate();
      AnalyticRow row;
      row.family = f.label();
      row.n = f.n;
      row.epsilon = eps;
      row.nu = nu_inverse(f);
      row.mu = mu_inverse(f);
      row.max_ent_delta = f.n % 2 == 0
                              ? max_entangled_delta(f)
                              : std::numeric_limits<double>::quiet_NaN();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

IngestReport ingest_channel(const std::string &path) {
  const ChoiOperator choi = load_choi_file(path);
  IngestReport rep;
  rep.path = path;
  rep.d = choi.system_dim();
  rep.factorization = choi.system().dims();
  rep.hp = is_hp(choi);
  rep.tp = is_tp(choi);
  rep.cp = is_cp(choi);
  rep.trace = choi.matrix().trace().real();
  if (rep.hp) rep.channel_bounds = nu_bounds(choi);

  try {
    const ComplexMatrix transfer = choi_to_transfer(choi);
    const ComplexMatrix inv = invert(transfer);
    rep.condition = transfer.one_norm() * inv.one_norm();
    rep.invertible = true;
    const ChoiOperator inv_choi = transfer_to_choi(inv, choi.system());
    if (is_hp(inv_choi)) rep.inverse_bounds = nu_bounds(inv_choi);
  } catch (const SingularMatrixError &e) {
    rep.invertible = false;
    rep.condition = e.condition_estimate;
  }

  if (choi.system().count() >= 2) {
    rep.separability_cut = 1;
    rep.separability = separability_necessary(choi, rep.separability_cut);
  }
  return rep;
}

std::string sweep_records_csv(const SweepResult &result) {
  const SweepConfig &c = result.config;
  std::string s = metadata_block("sweep", c.noise, c.epsilons, &c.ensemble,
                                 c.effective_cut());
  s += "epsilon,sample_index,e_n_in,e_n_out,delta,purity_in,purity_out,"
       "physical_in\n";
  for (const auto &r : result.records) {
    s += format_double(r.epsilon);
    s += ',';
    s += std::to_string(r.sample_index);
    s += ',';
    s += format_double(r.e_n_in);
    s += ',';
    s += format_double(r.e_n_out);
    s += ',';
    s += format_double(r.delta);
    s += ',';
    s += format_double(r.purity_in);
    s += ',';
    s += format_double(r.purity_out);
    s += ',';
    s += r.physical_in ? '1' : '0';
    s += '\n';
  }
  return s;
}

namespace {

nlohmann::json summary_json(const EpsilonSummary &s) {
  nlohmann::json j;
  j["epsilon"] = s.epsilon;
  j["samples"] = s.samples;
  j["physical_count"] = s.physical_count;
  j["min"] = s.min_decrease;
  j["max"] = s.max_decrease;
  j["mean"] = s.mean_decrease;
  j["percentiles"] = {{"p05", s.p05}, {"p25", s.p25}, {"p50", s.p50},
                      {"p75", s.p75}, {"p95", s.p95}};
  j["histogram"] = {{"edges", s.histogram.edges},
                    {"densities", s.histogram.densities},
                    {"underflow", s.histogram.underflow},
                    {"overflow", s.histogram.overflow},
                    {"binned", s.histogram.binned}};
  j["overlays"] = {{"nu", s.nu},
                   {"mu", s.mu},
                   {"max_entangled_delta",
                    std::isfinite(s.max_ent_delta)
                        ? nlohmann::json(s.max_ent_delta)
                        : nlohmann::json(nullptr)}};
  j["bound_violation_count"] = s.bound_violation_count;
  j["mu_exceed_count"] = s.mu_exceed_count;
  j["mu_cover_fraction"] = s.mu_cover_fraction;
  return j;
}

} // namespace

std::string sweep_summary_json(const SweepResult &result, int indent) {
  const SweepConfig &c = result.config;
  nlohmann::json j;
  j["metadata"] = metadata_json("sweep", c.noise, c.epsilons, &c.ensemble,
                                c.effective_cut());
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &s : result.summaries) arr.push_back(summary_json(s));
  j["summaries"] = std::move(arr);
  return j.dump(indent) + "\n";
}

std::string sweep_to_json_string(const SweepResult &result, int indent) {
  const SweepConfig &c = result.config;
  nlohmann::json j;
  j["metadata"] = metadata_json("sweep", c.noise, c.epsilons, &c.ensemble,
                                c.effective_cut());
  j["record_fields"] = {"epsilon",   "sample_index", "e_n_in",
                        "e_n_out",   "delta",        "purity_in",
                        "purity_out", "physical_in"};
  nlohmann::json recs = nlohmann::json::array();
  for (const auto &r : result.records)
    recs.push_back({r.epsilon, r.sample_index, r.e_n_in, r.e_n_out, r.delta,
                    r.purity_in, r.purity_out, r.physical_in});
  j["records"] = std::move(recs);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &s : result.summaries) arr.push_back(summary_json(s));
  j["summaries"] = std::move(arr);
  return j.dump(indent) + "\n";
}

std::string purity_records_csv(const PurityAuditResult &result) {
  const PurityAuditConfig &c = result.config;
  std::string s =
      metadata_block("purity-audit", c.noise, c.epsilons, &c.ensemble, 0);
  s += "epsilon,sample_index,purity_in,purity_out,ratio_bits,bloch_ratio,"
       "physical_in,degenerate,violation\n";
  for (const auto &r : result.records) {
    s += format_double(r.epsilon);
    s += ',';
    s += std::to_string(r.sample_index);
    s += ',';
    s += format_double(r.purity_in);
    s += ',';
    s += format_double(r.purity_out);
    s += ',';
    s += format_double(r.ratio_bits);
    s += ',';
    s += format_double(r.bloch_ratio);
    s += ',';
    s += r.physical_in ? '1' : '0';
    s += ',';
    s += r.degenerate ? '1' : '0';
    s += ',';
    s += r.violation ? '1' : '0';
    s += '\n';
  }
  return s;
}

std::string purity_to_json_string(const PurityAuditResult &result,
                                  int indent) {
  const PurityAuditConfig &c = result.config;
  nlohmann::json j;
  j["metadata"] =
      metadata_json("purity-audit", c.noise, c.epsilons, &c.ensemble, 0);
  j["record_fields"] = {"epsilon",     "sample_index", "purity_in",
                        "purity_out",  "ratio_bits",   "bloch_ratio",
                        "physical_in", "degenerate",   "violation"};
  nlohmann::json recs = nlohmann::json::array();
  for (const auto &r : result.records)
    recs.push_back({r.epsilon, r.sample_index, r.purity_in, r.purity_out,
                    r.ratio_bits, r.bloch_ratio, r.physical_in, r.degenerate,
                    r.violation});
  j["records"] = std::move(recs);
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &s : result.summaries) {
    arr.push_back({{"epsilon", s.epsilon},
                   {"nu", s.nu},
                   {"samples", s.samples},
                   {"degenerate_count", s.degenerate_count},
                   {"violation_count", s.violation_count},
                   {"shrink_violation_count", s.shrink_violation_count},
                   {"min_ratio", s.min_ratio},
                   {"max_ratio", s.max_ratio}});
  }
  j["summaries"] = std::move(arr);
  return j.dump(indent) + "\n";
}

std::string analytic_csv(const std::vector<AnalyticRow> &rows) {
  std::string s = "# qcn analytic v" QCN_VERSION "\n";
  s += "family,qubits,epsilon,nu,mu,max_entangled_delta\n";
  for (const auto &r : rows) {
    s += r.family;
    s += ',';
    s += std::to_string(r.n);
    s += ',';
    s += format_double(r.epsilon);
    s += ',';
    s += format_double(r.nu);
    s += ',';
    s += format_double(r.mu);
    s += ',';
    s += format_double(r.max_ent_delta);
    s += '\n';
  }
  return s;
}

std::string analytic_json(const std::vector<AnalyticRow> &rows, int indent) {
  nlohmann::json j;
  j["command"] = "analytic";
  j["version"] = QCN_VERSION;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &r : rows) {
    arr.push_back({{"family", r.family},
                   {"qubits", r.n},
                   {"epsilon", r.epsilon},
                   {"nu", r.nu},
                   {"mu", r.mu},
                   {"max_entangled_delta",
                    std::isfinite(r.max_ent_delta)
                        ? nlohmann::json(r.max_ent_delta)
                        : nlohmann::json(nullptr)}});
  }
  j["rows"] = std::move(arr);
  return j.dump(indent) + "\n";
}

std::string ingest_to_json_string(const IngestReport &report, int indent) {
  nlohmann::json j;
  j["command"] = "ingest";
  j["version"] = QCN_VERSION;
  j["path"] = report.path;
  j["d"] = report.d;
  j["factorization"] = report.factorization;
  j["hp"] = report.hp;
  j["tp"] = report.tp;
  j["cp"] = report.cp;
  j["trace"] = report.trace;
  j["channel_bounds"] = report.channel_bounds
                            ? bounds_json(*report.channel_bounds)
                            : nlohmann::json(nullptr);
  j["invertible"] = report.invertible;
  j["condition"] = std::isfinite(report.condition)
                       ? nlohmann::json(report.condition)
                       : nlohmann::json(nullptr);
  j["inverse_bounds"] = report.inverse_bounds
                            ? bounds_json(*report.inverse_bounds)
                            : nlohmann::json(nullptr);
  if (report.separability) {
    nlohmann::json sep;
    sep["cut"] = report.separability_cut;
    sep["satisfied"] = report.separability->satisfied;
    sep["max_violation"] = report.separability->max_violation;
    if (report.separability->witness) {
      const auto &w = *report.separability->witness;
      sep["witness"] = {{"i", w.i},
                        {"j", w.j},
                        {"k", w.k},
                        {"l", w.l},
                        {"side", std::string(1, w.side)},
                        {"violation", w.violation}};
    }
    j["separability"] = std::move(sep);
  } else {
    j["separability"] = nullptr;
  }
  return j.dump(indent) + "\n";
}

} // namespace qcn
