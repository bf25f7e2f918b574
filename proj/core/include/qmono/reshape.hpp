#pragma once

#include "qmono/types.hpp"

namespace qmono {

struct BipartiteForm {
  ComplexMatrix x;      // d_A x d_B with psi = (X (x) I)|phi+>, |phi+> = sum_i |ii>
  RealVector schmidt;   // descending singular values of X
};

// Matrix form of a bipartite vector (dims must have exactly two factors).
// |phi+> is kept unnormalized, so singular values are the Schmidt coefficients
// of psi itself and their squares sum to ||psi||^2.
BipartiteForm bipartite_reshape(const PureState& psi);

// Raw reshuffles used throughout (row-major: index = i*d_b + j).
ComplexMatrix vec_to_matrix(const ComplexVector& y, int d_a, int d_b);
ComplexVector matrix_to_vec(const ComplexMatrix& x);

// Cut handling ----------------------------------------------------------------

// Checks that the cut partitions 0..n-1 and returns {left dims product,
// right dims product}. Throws BadCut.
std::pair<int, int> cut_dims(const Dims& dims, const Cut& cut);

// Regroups psi/rho so the state is bipartite [d_left, d_right] in cut order.
PureState group_cut(const PureState& psi, const Cut& cut);
DensityMatrix group_cut(const DensityMatrix& rho, const Cut& cut);

// The trivial cut {0 | 1..n-1} and the full bipartite cut {0 | 1}.
Cut head_cut(int n_subsystems);

}  // namespace qmono
