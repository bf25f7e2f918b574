#pragma once

#include "qmono/types.hpp"

namespace qmono {

// Kronecker product, row-major index convention: (a (x) b)[i*rb + k, j*cb + l]
// = a[i,j] * b[k,l].
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Reduced state on the kept subsystems, in their original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transpose on one tensor factor. Output is Hermitian but may be non-PSD.
ComplexMatrix partial_transpose(const DensityMatrix& rho, int subsystem);

struct HermEig {
  RealVector values;       // descending
  ComplexMatrix vectors;   // orthonormal columns, matching order
};

// Eigendecomposition of a Hermitian matrix; throws NotHermitian beyond
// tol::herm (relative to the Frobenius norm).
HermEig herm_eig(const ComplexMatrix& h);

// Square root of a PSD matrix; eigenvalues within -tol::psd clipped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& p);

double trace_norm(const ComplexMatrix& a);

// Validation helpers ---------------------------------------------------------

bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::herm);

// Throws NotHermitian / NotNormalized / NotPSD if rho fails the density-matrix
// invariants (Hermitian, unit trace, spectrum >= -tol::psd).
void validate_density(const DensityMatrix& rho);

// Subsystem permutation: `order[k]` is the old position of the new k-th factor.
PureState permute_subsystems(const PureState& psi, const std::vector<int>& order);
DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& order);

}  // namespace qmono
