#pragma once

#include "qmono/reshape.hpp"
#include "qmono/types.hpp"

#include <array>
#include <string>

namespace qmono {

// Pure-state entanglement functional, a function of the Schmidt spectrum only.
// Logs are base 2 throughout (ebit units).
struct MeasureId {
  enum class Kind { concurrence, g_concurrence, entropy, renyi, tsallis };

  Kind kind = Kind::concurrence;
  double param = 0.0;  // alpha for renyi, q for tsallis

  static MeasureId concurrence() { return {Kind::concurrence, 0.0}; }
  static MeasureId g_concurrence() { return {Kind::g_concurrence, 0.0}; }
  static MeasureId entropy() { return {Kind::entropy, 0.0}; }
  static MeasureId renyi(double alpha);    // alpha > 0, != 1
  static MeasureId tsallis(double q);      // q > 0, != 1

  std::string name() const;
  // "concurrence", "entropy", "renyi:2", "tsallis:0.5", ...
  static MeasureId parse(const std::string& text);
};

// Measure of the normalized state behind psi at the given cut, except
// g_concurrence, which is degree-2 homogeneous in the vector itself:
// G(c psi) = |c|^2 G(psi) = |det X|^(2/d) with no normalization applied.
// Formulas from normalized Schmidt probabilities p:
//   entropy      -sum p log2 p
//   renyi        log2(sum p^a) / (1-a)
//   tsallis      (1 - sum p^q) / (q-1)
//   concurrence  sqrt(2 (1 - sum p^2))        (= 2 g_concurrence at d=2)
double pure_measure(const MeasureId& m, const PureState& psi, const Cut& cut);

// (||rho^{T_B}||_1 - 1) / 2 across the cut; zero on PPT states.
double negativity(const DensityMatrix& rho, const Cut& cut);

// Spectrum of R = sqrt(sqrt(rho) rho_tilde sqrt(rho)) with
// rho_tilde = (sy (x) sy) conj(rho) (sy (x) sy), and the derived two-qubit
// concurrence quantities.
struct WoottersRecord {
  std::array<double, 4> lambdas{};  // descending
  double c_formation = 0.0;         // max(0, l1 - l2 - l3 - l4)
  double c_assistance = 0.0;        // l1 + l2 + l3 + l4
  int r_rank = 0;                   // # lambdas > tol::rank * l1
};

WoottersRecord wootters_analysis(const DensityMatrix& rho);

// Binary-entropy formula h((1 + sqrt(1 - c^2)) / 2); monotone on [0,1].
double eof_from_concurrence(double c);

double von_neumann_entropy(const DensityMatrix& rho);

// Normalized Schmidt probabilities (descending) and the squared norm of psi.
std::pair<RealVector, double> schmidt_probs(const PureState& psi, const Cut& cut);

}  // namespace qmono
