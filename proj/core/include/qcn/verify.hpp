#ifndef QCN_VERIFY_HPP
#define QCN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qcn/noise.hpp"

namespace qcn::verify {

struct CheckResult {
  std::string name;
  bool pass;
  std::string details;
};

struct ModuleReport {
  std::string module;
  std::vector<CheckResult> checks;
  bool pass() const;
};

struct Options {
  std::uint64_t seed = 20230917;
  std::size_t samples = 200; // per property check
};

std::vector<std::string> module_names();
ModuleReport run_module(const std::string &module, const Options &opts = {});
std::vector<ModuleReport> run_all(const Options &opts = {});
bool all_pass(const std::vector<ModuleReport> &reports);
std::string reports_to_json_string(const std::vector<ModuleReport> &reports,
                                   int indent = 2);

/// Core of the closed-form consistency check: does `claimed_nu_bits` agree
/// with log2(||Lambda_inverse||_1 / d)? Exposed so a tampered value can be
/// shown to fail.
bool nu_matches_trace_norm(const NoiseFamily &family, double claimed_nu_bits,
                           double tol = 1e-10);

} // namespace qcn::verify

#endif
