#ifndef QCN_EXPERIMENT_HPP
#define QCN_EXPERIMENT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qcn/measures.hpp"
#include "qcn/noise.hpp"
#include "qcn/sampling.hpp"

namespace qcn {

enum class OutputFormat { Csv, Json };

std::string to_string(OutputFormat f);

/// Epsilon sweep of the negativity decrease |dE_N| over a random ensemble,
/// with analytic overlays per epsilon.
struct SweepConfig {
  NoiseFamily noise;            // epsilon field ignored; grid below applies
  std::vector<double> epsilons; // strictly inside (0, epsilon_max)
  EnsembleSpec ensemble;
  std::size_t cut = 0;          // A = qubits [0, cut); 0 means n/2
  std::string out_path;         // empty: no file output
  OutputFormat format = OutputFormat::Csv;
  std::size_t threads = 0;      // 0: hardware concurrency
  /// Sample 0 is replaced by the maximally entangled state (n even), so the
  /// analytic curve has an exact witness in every run.
  bool inject_max_entangled = true;

  void validate() const;
  std::size_t effective_cut() const { return cut == 0 ? noise.n / 2 : cut; }
};

struct SweepRecord {
  double epsilon;
  std::size_t sample_index;
  double e_n_in;
  double e_n_out;
  double delta; // e_n_out - e_n_in, bits
  double purity_in;
  double purity_out;
  bool physical_in;
};

struct Histogram {
  std::vector<double> edges;     // bin_count + 1 uniform edges over [0, nu]
  std::vector<double> densities; // unit area over the binned samples
  std::size_t underflow = 0;     // decrease < 0 (non-physical inputs only)
  std::size_t overflow = 0;      // decrease > nu (non-physical inputs only)
  std::size_t binned = 0;

  /// Center of the highest-density bin.
  double peak_center() const;
  double bin_width() const;
};

struct EpsilonSummary {
  double epsilon;
  std::size_t samples = 0;
  std::size_t physical_count = 0;
  double min_decrease = 0, max_decrease = 0, mean_decrease = 0;
  double p05 = 0, p25 = 0, p50 = 0, p75 = 0, p95 = 0;
  Histogram histogram;
  // analytic overlays
  double nu = 0;
  double mu = 0;
  double max_ent_delta = 0; // signed (<= 0); NaN when n is odd
  // audits
  std::size_t bound_violation_count = 0; // physical records outside Cor. 2
  std::size_t mu_exceed_count = 0;       // physical records with decrease > mu
  double mu_cover_fraction = 0;          // observational, reported only
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRecord> records; // epsilon-major, sample index ascending
  std::vector<EpsilonSummary> summaries;
  std::size_t total_bound_violations() const;
};

SweepResult run_sweep(const SweepConfig &config);

/// Purity-ratio audit (mixed-unitary families only; amplitude damping is
/// refused since the bound's hypothesis fails there).
struct PurityAuditConfig {
  NoiseFamily noise; // epsilon ignored
  std::vector<double> epsilons;
  EnsembleSpec ensemble;
  std::string out_path;
  OutputFormat format = OutputFormat::Csv;
  std::size_t threads = 0;

  void validate() const;
};

struct PurityRecord {
  double epsilon;
  std::size_t sample_index;
  double purity_in;
  double purity_out;
  double ratio_bits;   // log2[(P_out d - 1)/(P_in d - 1)]
  double bloch_ratio;  // |r(rho)| / |r(rho0)|
  bool physical_in;
  bool degenerate;     // |r(rho0)| = 0: ratio undefined, checks skipped
  bool violation;
};

struct PurityEpsilonSummary {
  double epsilon;
  double nu = 0;
  std::size_t samples = 0;
  std::size_t degenerate_count = 0;
  std::size_t violation_count = 0;
  std::size_t shrink_violation_count = 0; // dephasing band check
  double min_ratio = 0, max_ratio = 0;
};

struct PurityAuditResult {
  PurityAuditConfig config;
  std::vector<PurityRecord> records;
  std::vector<PurityEpsilonSummary> summaries;
  std::size_t total_violations() const;
};

PurityAuditResult run_purity_audit(const PurityAuditConfig &config);

/// One audited record; inputs with |r(rho0)| = 0 come back with the
/// degenerate sentinel set and no checks applied.
PurityRecord purity_audit_record(const ChoiOperator &channel,
                                 const StateOperator &input, double epsilon,
                                 double nu, NoiseKind kind,
                                 std::size_t sample_index);

/// Closed-form table of nu, mu and the maximally-entangled negativity drop.
struct AnalyticRow {
  std::string family;
  std::size_t n;
  double epsilon;
  double nu;
  double mu;
  double max_ent_delta; // NaN when n is odd
};

std::vector<AnalyticRow> analytic_table(const std::vector<NoiseFamily> &families,
                                        const std::vector<double> &epsilons);

/// Audit of an externally supplied Choi operator (JSON file).
struct IngestReport {
  std::string path;
  std::size_t d = 0;
  std::vector<std::size_t> factorization;
  bool hp = false, tp = false, cp = false;
  double trace = 0;
  std::optional<ImplementabilityBounds> channel_bounds; // when HP
  bool invertible = false;
  double condition = 0; // transfer-matrix condition estimate
  std::optional<ImplementabilityBounds> inverse_bounds; // when invertible & HP
  std::optional<SeparabilityReport> separability; // when factorization >= 2
  std::size_t separability_cut = 0;
};

IngestReport ingest_channel(const std::string &path);

// --- output writers ---------------------------------------------------------

std::string sweep_records_csv(const SweepResult &result);
std::string sweep_to_json_string(const SweepResult &result, int indent = 2);
std::string sweep_summary_json(const SweepResult &result, int indent = 2);

std::string purity_records_csv(const PurityAuditResult &result);
std::string purity_to_json_string(const PurityAuditResult &result,
                                  int indent = 2);

std::string analytic_csv(const std::vector<AnalyticRow> &rows);
std::string analytic_json(const std::vector<AnalyticRow> &rows,
                          int indent = 2);

std::string ingest_to_json_string(const IngestReport &report, int indent = 2);

/// Writes text to path, creating parent directories when needed.
void write_text_file(const std::string &path, const std::string &text);

/// Fixed-width round-trip decimal formatting used by every CSV writer, so
/// reruns are byte-identical.
std::string format_double(double v);

} // namespace qcn

#endif
