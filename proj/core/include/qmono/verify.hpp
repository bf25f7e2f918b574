#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmono::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Named suites exposed by the CLI. Each groups one or more checks below.
std::vector<std::string> suite_names();
bool is_suite(const std::string& name);
std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed, int threads);

// The full battery in fixed order (the union of all suites).
std::vector<CheckResult> run_all(std::uint64_t seed, int threads);

// Individual checks. Default seed 20240817 used by the CLI and acceptance run.
inline constexpr std::uint64_t kDefaultSeed = 20240817ull;

CheckResult check_roof_matches_closed_form(std::uint64_t seed, int threads);  // 500 two-qubit roofs
CheckResult check_tangle_w_saturation(std::uint64_t seed, int threads);       // W deficit at alpha=2
CheckResult check_tangle_haar(std::uint64_t seed, int threads);               // 1e4 pure-state deficits
CheckResult check_exponent_scan_ckw(std::uint64_t seed, int threads);         // alpha_hat = 2, W maximizer
CheckResult check_negativity_monogamy(std::uint64_t seed, int threads);       // 1e4 pure-state deficits
CheckResult check_markov(std::uint64_t seed, int threads);                    // 50 Markov specs
CheckResult check_zero_g_tail(std::uint64_t seed, int threads);               // 100 + 30 tails
CheckResult check_gmono_invariance(std::uint64_t seed, int threads);          // 30 generated states
CheckResult check_w_class_marginals(std::uint64_t seed, int threads);         // 100 + 100 states
CheckResult check_product_split(std::uint64_t seed, int threads);             // 200 + 50 states
CheckResult check_face_property(std::uint64_t seed, int threads);             // 50 support draws
CheckResult check_gamma_contract(std::uint64_t seed, int threads);            // exponent unit contract

}  // namespace qmono::verify
