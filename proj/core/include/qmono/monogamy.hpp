#pragma once

#include "qmono/measures.hpp"
#include "qmono/roof.hpp"
#include "qmono/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace qmono {

// Evaluates a bipartite mixed-state entanglement value; input dims are exactly
// [d_left, d_right].
using BipartiteEvaluator = std::function<double(const DensityMatrix&)>;

struct MeasureTriple {
  BipartiteEvaluator on_abc, on_ab, on_ac;
  std::string label;
};

// Standard evaluator dispatch for a measure family:
//   - negativity: computed directly (no roof);
//   - pure inputs: pure_measure on the cut;
//   - two-qubit inputs: Wootters closed form (concurrence = c_f,
//     g_concurrence = c_f / 2, entropy = eof(c_f));
//   - otherwise: convex roof (min mode) with cfg.
MeasureTriple make_evaluators(const MeasureId& m, const RoofConfig& cfg = {});
// Negativity has no MeasureId (it is not a pure-state Schmidt functional).
MeasureTriple make_negativity_evaluators();

struct MonogamyReport {
  double e_abc = 0.0, e_ab = 0.0, e_ac = 0.0;
  double x1 = 0.0, x2 = 0.0;            // e_ab/e_abc, e_ac/e_abc (0 if e_abc ~ 0)
  double gamma = 0.0;                   // 0 is the "holds for all gamma" sentinel
  bool gamma_defined = true;            // false when no finite exponent exists
  bool disentangling_satisfied = false; // |e_abc - e_ab| <= tol max(1, e_abc)
  bool monogamy_verdict = true;         // when satisfied: e_ac <= tol
  double tolerance = 0.0;
};

// Tripartite dims [d_A, d_B, d_C]; evaluators applied to the A|BC grouping and
// the AB / AC marginals.
MonogamyReport disentangling_check(const DensityMatrix& rho, const MeasureTriple& ev,
                                   double tolerance);

// e_abc^alpha - e_ab^alpha - e_ac^alpha; >= 0 iff the alpha-power relation
// holds for this state.
double monogamy_deficit(const DensityMatrix& rho, const MeasureTriple& ev, double alpha);

// Unique root of x1^g + x2^g = 1 for x1, x2 in (0,1), by bracket doubling and
// bisection to 1e-10. Degenerate pairs ({1,0}, {x,0} with x<1, {0,0}) return 0,
// the infimum sentinel. Throws NonMonogamousWitness when one ratio is 1 and
// the other positive, OutOfRange beyond [0,1].
double gamma_exponent(double x1, double x2);

struct ExponentScan {
  double alpha_hat = 0.0;
  PureState maximizer;
  std::string maximizer_label;     // "sample:<i>" or "special:<name>"
  std::vector<int> histogram;      // gamma counts, bins of width bin_width from 0
  double bin_width = 0.1;
  int evaluated = 0;
  int skipped = 0;                 // e_abc below 1e-8
  int witnesses = 0;               // states hitting the no-finite-gamma contract
};

// Max per-state gamma over n_samples Haar pure states on `dims` (plus, when
// include_special, a fixed roster: W for qubits, GHZ, product, biseparable
// states). Deterministic given seed, independent of threads.
ExponentScan exponent_scan(const Dims& dims, const MeasureTriple& ev, int n_samples,
                           std::uint64_t seed, bool include_special, int threads = 1);

struct MarkovBlock {
  double q = 0.0;
  DensityMatrix ab;  // dims [d_A, d_BL]
  DensityMatrix bc;  // dims [d_BR, d_C]
};

struct MarkovSpec {
  std::vector<MarkovBlock> blocks;
  int d_a = 2, d_bl = 2, d_br = 2, d_c = 2;
};

// sum_j q_j rho_j^{AB_L} (x) |j><j|^{B'} (x) rho_j^{B_R C} with B grouped as
// B_L (x) B' (x) B_R; output dims [d_A, d_BL * n * d_BR, d_C]. Saturates
// strong subadditivity by construction.
DensityMatrix markov_build(const MarkovSpec& spec);

// S(AB) + S(BC) - S(ABC) - S(B), base 2; >= 0 up to numerics.
double ssa_deficit(const DensityMatrix& rho);

// sum_j p_j |j><j|^{A'} (x) sigma_j^{AB}, dims [n, d_A, d_B].
DensityMatrix flag_state(const std::vector<std::pair<double, DensityMatrix>>& ensemble);

}  // namespace qmono
