#pragma once

#include "qmono/types.hpp"

#include <random>

namespace qmono {

// Deterministic RNG: mt19937_64 + Box-Muller on the raw 64-bit stream, so the
// same seed reproduces the same bytes regardless of platform libstdc++
// distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform();            // [0,1)
  double gaussian();           // N(0,1)
  Complex cgaussian();         // independent N(0,1) real and imaginary parts

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// splitmix64 mixing of (base, index) for independent derived streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

ComplexMatrix sample_ginibre(int rows, int cols, std::uint64_t seed);

// Haar isometry m x r (QR with R_jj > 0 phase convention).
ComplexMatrix sample_isometry(int m, int r, std::uint64_t seed);

PureState sample_haar_pure(const Dims& dims, std::uint64_t seed);

// Induced (Hilbert-Schmidt at rank = dim) measure: partial trace of a Haar
// pure state over a rank-r environment.
DensityMatrix sample_hs_density(const Dims& dims, int rank, std::uint64_t seed);

}  // namespace qmono
