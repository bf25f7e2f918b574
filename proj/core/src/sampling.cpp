#include "qmono/sampling.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace qmono {

double Rng::uniform() {
  // 53 uniform bits in [0,1)
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

Complex Rng::cgaussian() {
  const double re = gaussian();
  return {re, gaussian()};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over the combined word
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

ComplexMatrix sample_ginibre(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw BadShape("ginibre shape must be positive");
  Rng rng(seed);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.cgaussian();
  return g;
}

ComplexMatrix sample_isometry(int m, int r, std::uint64_t seed) {
  if (r < 1 || m < r) throw BadShape("isometry needs m >= r >= 1");
  ComplexMatrix g = sample_ginibre(m, r, seed);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, r);
  ComplexMatrix rm = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  // R_jj > 0 phase convention makes the sample a deterministic function of g
  for (int j = 0; j < r; ++j) {
    const Complex d = rm(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= std::conj(d) / std::abs(d);
  }
  return q;
}

PureState sample_haar_pure(const Dims& dims, std::uint64_t seed) {
  const int d = dims_product(dims);
  if (d < 1 || dims.empty()) throw BadShape("haar_pure needs nonempty dims");
  Rng rng(seed);
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.cgaussian();
  v /= v.norm();
  return {std::move(v), dims, false};
}

DensityMatrix sample_hs_density(const Dims& dims, int rank, std::uint64_t seed) {
  const int d = dims_product(dims);
  if (d < 1 || dims.empty()) throw BadShape("hs_density needs nonempty dims");
  if (rank < 1 || rank > d) throw BadShape("hs_density rank must be in [1, dim]");
  ComplexMatrix g = sample_ginibre(d, rank, seed);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {std::move(rho), dims};
}

}  // namespace qmono
