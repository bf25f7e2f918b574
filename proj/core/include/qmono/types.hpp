#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmono {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<int>;

// Default tolerances for double-precision dense algebra at dims <= 64.
namespace tol {
inline constexpr double herm = 1e-9;    // Hermiticity
inline constexpr double psd = 1e-9;     // eigenvalue negativity slack
inline constexpr double trace = 1e-10;  // trace / probability sums
inline constexpr double eig = 1e-9;     // spectral reconstruction
inline constexpr double rec = 1e-9;     // decomposition reconstruction
inline constexpr double det = 1e-10;    // |det| of unit-Frobenius matrices
inline constexpr double rank = 1e-8;    // relative rank counting
}  // namespace tol

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct NotNormalized : Error { using Error::Error; };
struct NotIsometry : Error { using Error::Error; };
struct BadShape : Error { using Error::Error; };
struct BadCut : Error { using Error::Error; };
struct BadSpec : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct PivotSingular : Error { using Error::Error; };
struct AllSingular : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct NonMonogamousWitness : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct InvariantViolation : Error { using Error::Error; };

inline int dims_product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

// State vector tagged with its tensor factorization. `subnormalized` switches
// the norm contract from ||psi|| = 1 to ||psi|| <= 1 (ensemble members).
struct PureState {
  ComplexVector amplitudes;
  Dims dims;
  bool subnormalized = false;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double norm2() const { return amplitudes.squaredNorm(); }
};

struct DensityMatrix {
  ComplexMatrix matrix;
  Dims dims;

  int dim() const { return static_cast<int>(matrix.rows()); }
};

// Pure-state ensemble as subnormalized vectors; sum of outer products
// reconstructs the source density matrix.
struct Decomposition {
  std::vector<PureState> vectors;

  std::size_t size() const { return vectors.size(); }
  ComplexMatrix reconstruct() const {
    if (vectors.empty()) return ComplexMatrix();
    ComplexMatrix out = ComplexMatrix::Zero(vectors[0].dim(), vectors[0].dim());
    for (const auto& v : vectors) out += v.amplitudes * v.amplitudes.adjoint();
    return out;
  }
};

// Bipartition of subsystem indices; `left` and `right` together must cover
// 0..n-1 exactly once.
struct Cut {
  std::vector<int> left, right;
};

}  // namespace qmono
