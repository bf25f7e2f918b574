#pragma once

#include "qmono/types.hpp"

#include <optional>

namespace qmono {

struct PairRotation {
  PureState w;                     // det(W) = 0 after reshape
  PureState y;                     // remainder, Gram partner of w
  std::optional<Complex> lambda0;  // root used; empty when x2 was already singular
};

// Two-term Gram rotation on C^d (x) C^d: given x1 with det(X1) != 0, finds the
// smallest-modulus root lambda0 of det(X1 + lambda X2) = 0 and returns
//   w = a x1 + b x2,  y = conj(b) x1 - conj(a) x2,
// a = 1/sqrt(1+|l0|^2), b = l0 a, so that
// |x1><x1| + |x2><x2| = |w><w| + |y><y| exactly and det(W) = 0.
// If det(X2) = 0 already, returns (w = x2, y = x1) untouched.
// Throws PivotSingular when det(X1) vanishes at tol::det (unit-Frobenius scale).
PairRotation pair_rotation(const PureState& x1, const PureState& x2);

// Decomposition of rho on C^d (x) C^d with every member after the first of
// zero determinant (zero G-concurrence tail). Starts from the spectral
// decomposition, rotates pairwise against a nonsingular pivot, and swaps in a
// fresh pivot if a remainder degenerates. Throws AllSingular when no spectral
// eigenvector has nonzero determinant.
Decomposition zero_g_tail(const DensityMatrix& rho);

}  // namespace qmono
