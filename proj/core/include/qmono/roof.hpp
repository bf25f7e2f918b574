#pragma once

#include "qmono/measures.hpp"
#include "qmono/types.hpp"

#include <cstdint>

namespace qmono {

struct RoofConfig {
  int ensemble_size = 0;          // 0 -> rank^2
  int restarts = 20;
  int max_iterations = 2000;      // gradient-iteration budget per restart
  double step_tolerance = 1e-10;
  double value_tolerance = 1e-10;
  std::uint64_t seed = 0;
  int threads = 1;                // restarts run in parallel, reduced by index
};

enum class RoofMode { min, max };

struct RoofResult {
  double value = 0.0;
  Decomposition decomposition;    // members in the original subsystem order
  RoofMode mode = RoofMode::min;
  bool converged = false;
  int restarts_used = 0;
};

// |y_k> = sum_j u_{kj} |w_j>; u must satisfy u^+ u = I within 1e-10.
// Preserves the reconstructed density matrix exactly.
Decomposition apply_isometry(const Decomposition& roots, const ComplexMatrix& u);

// sum_j p_j E(psi_j normalized), p_j = ||w_j||^2; members below 1e-14 skipped.
double decomposition_average(const MeasureId& m, const Decomposition& dec, const Cut& cut);

// Convex-roof extension (min: formation, max: assistance) over ensembles of
// size m generated by isometries acting on the spectral decomposition.
// First restart is the identity isometry, so the result is never worse than
// the spectral average. Deterministic given cfg.seed, independent of threads.
RoofResult roof_optimize(const DensityMatrix& rho, const MeasureId& m, const Cut& cut,
                         RoofMode mode, const RoofConfig& cfg = {});

struct InvarianceScan {
  double min_avg = 0.0;
  double max_avg = 0.0;
  double spread = 0.0;  // max - min
};

// Decomposition averages over `samples` random isometries (ensemble sizes
// cycling through [r, r^2]) plus the spectral decomposition.
InvarianceScan invariance_scan(const DensityMatrix& rho, const MeasureId& m,
                               const Cut& cut, int samples, std::uint64_t seed);

}  // namespace qmono
