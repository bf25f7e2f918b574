#pragma once

#include "qmono/types.hpp"

#include <cstdint>
#include <vector>

namespace qmono {

struct NilpotentSubspace {
  int d = 0;
  std::vector<ComplexMatrix> basis;  // Hilbert-Schmidt orthonormal, all nilpotent
  ComplexMatrix conjugator;          // S with basis ⊂ S T S^-1, T strictly upper
};

// Nilpotency test. The literal check "eigenvalue moduli < tol*(1+||n||)" is
// unattainable in floating point: eigenvalues of a perturbed nilpotent scatter
// as eps^(1/d), e.g. ~1e-8 at d=2 for machine-epsilon perturbations. Uses the
// attainable pair of tests instead (both must pass):
//   ||n^d||_F <= tol * d * max(1, ||n||_F)^(d-1)
//   max |schur diag| <= (tol * (1 + ||n||_F))^(1/d)
bool is_nilpotent(const ComplexMatrix& n, double tolerance = tol::eig);

// Random subspace of S T S^-1 with T the strictly-upper-triangular space and a
// well-conditioned random conjugator S. Dimension bound: d(d-1)/2.
NilpotentSubspace nilpotent_subspace(int d, int r_minus_1, std::uint64_t seed);

struct GMonoSpec {
  ComplexMatrix x;                  // full rank d x d
  Complex c{1.0, 0.0};              // nonzero head coefficient
  std::vector<ComplexMatrix> tail;  // nilpotent Z_2..Z_r
  ComplexMatrix z1;                 // optional nilpotent head shift (empty = 0)
};

struct GMonoState {
  DensityMatrix rho;           // on C^d (x) C^d
  Decomposition decomposition; // members sqrt(weight_j / T) vec(W_j)
  double head_share = 0.0;     // weight_1 / T, T = sum_j weight_j ||W_j||_F^2
};

// Builds W_1 = c X + X Z_1, W_j = X Z_j (j >= 2), mixes with the given
// weights, and normalizes the trace. Every decomposition of the result has
// average G-concurrence |det X|^(2/d) |c|^2 * head_share.
GMonoState gmono_state(const GMonoSpec& spec, const std::vector<double>& weights);

// l1|100> + l2|010> + l3|001> + l4|000>, dims [2,2,2].
PureState w_class_state(Complex l1, Complex l2, Complex l3, Complex l4);

struct ProductSplit {
  bool is_product = false;
  double purity = 0.0;  // Tr[(rho^C)^2]
  PureState chi;        // AB factor (when is_product)
  PureState phi;        // C factor
};

// True iff rho^C is pure within tol: psi = chi^{AB} (x) phi^{C}.
ProductSplit product_split_check(const PureState& psi, double tolerance = 1e-9);

// Random density matrix supported inside supp(rho): a Ginibre-induced state on
// the span of the eigenvectors of rho.
DensityMatrix sample_in_support(const DensityMatrix& rho, std::uint64_t seed);

}  // namespace qmono
