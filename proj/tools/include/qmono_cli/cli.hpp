#pragma once

#include "qmono/roof.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qmono::cli {

// Shared run options; every field can come from --config (JSON, same keys) and
// is overridden by the matching command-line flag.
struct RunConfig {
  std::uint64_t seed = 20240817ull;
  double tolerance = 1e-6;
  int samples = 200;
  int restarts = 6;
  int ensemble_size = 0;  // 0 -> rank^2
  int max_iterations = 2000;
  double step_tolerance = 1e-10;
  double value_tolerance = 1e-10;
  std::string output = "json";  // json | csv
  int threads = 1;              // <= 0: hardware concurrency; QMONO_THREADS wins

  RoofConfig roof() const;
};

// Exit codes: 0 ok, 1 verification failure, 2 usage error (bad flags, bad
// files, bad specs), 3 numeric error (singular pivots, non-monogamous
// witnesses, invalid spectra).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmono::cli
