#include "qmono/charstates.hpp"

#include "qmono/linalg.hpp"
#include "qmono/reshape.hpp"
#include "qmono/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace qmono {

bool is_nilpotent(const ComplexMatrix& n, double tolerance) {
  if (n.rows() != n.cols()) throw BadShape("is_nilpotent needs a square matrix");
  const int d = static_cast<int>(n.rows());
  const double nn = n.norm();

  ComplexMatrix power = n;
  for (int k = 1; k < d; ++k) power = power * n;
  const bool power_ok =
      power.norm() <= tolerance * d * std::pow(std::max(1.0, nn), d - 1);
  if (!power_ok) return false;

  Eigen::ComplexSchur<ComplexMatrix> schur(n, false);
  const double diag_max = schur.matrixT().diagonal().cwiseAbs().maxCoeff();
  return diag_max <= std::pow(tolerance * (1.0 + nn), 1.0 / d);
}

NilpotentSubspace nilpotent_subspace(int d, int r_minus_1, std::uint64_t seed) {
  if (d < 2) throw OutOfRange("nilpotent_subspace needs d >= 2");
  if (r_minus_1 < 0) throw OutOfRange("subspace dimension must be nonnegative");
  const int cap = d * (d - 1) / 2;
  if (r_minus_1 > cap)
    throw DimensionTooLarge("nilpotent subspace dimension exceeds d(d-1)/2 = " +
                            std::to_string(cap));

  // well-conditioned conjugator: Haar unitaries around singular values in
  // [0.5, 2] keep cond(S) <= 4
  Rng rng(derive_seed(seed, 0));
  const ComplexMatrix q1 = sample_isometry(d, d, derive_seed(seed, 1));
  const ComplexMatrix q2 = sample_isometry(d, d, derive_seed(seed, 2));
  RealVector sig(d);
  for (int i = 0; i < d; ++i) sig[i] = 0.5 + 1.5 * rng.uniform();
  const ComplexMatrix s = q1 * sig.asDiagonal() * q2.adjoint();
  const ComplexMatrix s_inv = s.partialPivLu().inverse();

  NilpotentSubspace out;
  out.d = d;
  out.conjugator = s;
  int attempts = 0;
  while (static_cast<int>(out.basis.size()) < r_minus_1) {
    if (++attempts > 32 * (r_minus_1 + 1))
      throw InvariantViolation("nilpotent basis construction failed to span");
    ComplexMatrix t = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) t(i, j) = rng.cgaussian();
    ComplexMatrix cand = s * t * s_inv;
    for (const auto& b : out.basis)  // Hilbert-Schmidt Gram-Schmidt, twice
      cand -= (b.adjoint() * cand).trace() * b;
    for (const auto& b : out.basis)
      cand -= (b.adjoint() * cand).trace() * b;
    const double nm = cand.norm();
    if (nm < 1e-8) continue;
    out.basis.push_back(cand / nm);
  }
  return out;
}

GMonoState gmono_state(const GMonoSpec& spec, const std::vector<double>& weights) {
  if (spec.x.rows() != spec.x.cols() || spec.x.rows() < 2)
    throw BadShape("gmono_state needs a square X, d >= 2");
  const int d = static_cast<int>(spec.x.rows());
  const double nx = spec.x.norm();
  if (nx <= 0.0 || std::abs((spec.x / nx).determinant()) <= tol::det)
    throw PivotSingular("gmono_state needs full-rank X");
  if (std::abs(spec.c) <= 0.0) throw BadSpec("head coefficient c must be nonzero");

  ComplexMatrix z1 = spec.z1;
  if (z1.size() == 0) z1 = ComplexMatrix::Zero(d, d);
  if (z1.rows() != d || z1.cols() != d) throw BadShape("Z_1 has wrong dims");
  if (!is_nilpotent(z1)) throw BadSpec("Z_1 must be nilpotent");
  for (const auto& z : spec.tail) {
    if (z.rows() != d || z.cols() != d) throw BadShape("tail matrix has wrong dims");
    if (!is_nilpotent(z)) throw BadSpec("tail matrices must be nilpotent");
  }

  const int r = 1 + static_cast<int>(spec.tail.size());
  if (static_cast<int>(weights.size()) != r)
    throw BadSpec("need one weight per member (head + tail)");
  if (weights[0] <= 0.0) throw BadSpec("head weight must be positive");
  for (double w : weights)
    if (w < 0.0) throw BadSpec("weights must be nonnegative");

  std::vector<ComplexMatrix> members;
  members.reserve(r);
  members.push_back(spec.x * (spec.c * ComplexMatrix::Identity(d, d) + z1));
  for (const auto& z : spec.tail) members.push_back(spec.x * z);

  double total = 0.0;
  for (int j = 0; j < r; ++j) total += weights[j] * members[j].squaredNorm();
  if (total <= 0.0) throw BadSpec("state has zero trace");

  GMonoState out;
  out.head_share = weights[0] / total;
  out.rho.dims = {d, d};
  out.rho.matrix = ComplexMatrix::Zero(d * d, d * d);
  for (int j = 0; j < r; ++j) {
    PureState w;
    w.amplitudes = std::sqrt(weights[j] / total) * matrix_to_vec(members[j]);
    w.dims = {d, d};
    w.subnormalized = true;
    out.rho.matrix += w.amplitudes * w.amplitudes.adjoint();
    if (w.norm2() >= 1e-14) out.decomposition.vectors.push_back(std::move(w));
  }
  return out;
}

PureState w_class_state(Complex l1, Complex l2, Complex l3, Complex l4) {
  const double n2 = std::norm(l1) + std::norm(l2) + std::norm(l3) + std::norm(l4);
  if (std::abs(n2 - 1.0) > tol::trace)
    throw NotNormalized("w-class amplitudes must have unit norm");
  PureState psi;
  psi.dims = {2, 2, 2};
  psi.amplitudes = ComplexVector::Zero(8);
  psi.amplitudes[4] = l1;  // |100>
  psi.amplitudes[2] = l2;  // |010>
  psi.amplitudes[1] = l3;  // |001>
  psi.amplitudes[0] = l4;  // |000>
  return psi;
}

ProductSplit product_split_check(const PureState& psi, double tolerance) {
  if (psi.dims.size() < 2) throw BadShape("product_split_check needs at least two factors");
  const double n2 = psi.norm2();
  if (std::abs(n2 - 1.0) > tol::trace && !psi.subnormalized)
    throw NotNormalized("state must have unit norm");

  const int nf = static_cast<int>(psi.dims.size());
  const int dc = psi.dims[nf - 1];
  const int dab = psi.dim() / dc;
  const ComplexMatrix x = vec_to_matrix(psi.amplitudes / std::sqrt(n2), dab, dc);

  ProductSplit out;
  // reduced state on the last factor; x^T conj(x), not x^dag x (its transpose),
  // so the recovered phi factor is not conjugated
  const ComplexMatrix rho_c = x.transpose() * x.conjugate();
  out.purity = (rho_c * rho_c).trace().real();
  out.is_product = out.purity > 1.0 - tolerance;
  if (!out.is_product) return out;

  const auto eig = herm_eig(rho_c);
  out.phi.amplitudes = eig.vectors.col(0);
  out.phi.dims = {dc};
  out.chi.amplitudes = x * eig.vectors.col(0).conjugate();
  out.chi.amplitudes /= out.chi.amplitudes.norm();
  out.chi.dims = Dims(psi.dims.begin(), psi.dims.end() - 1);
  return out;
}

DensityMatrix sample_in_support(const DensityMatrix& rho, std::uint64_t seed) {
  validate_density(rho);
  const auto eig = herm_eig(rho.matrix);
  int r = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] > tol::rank * std::max(eig.values[0], 0.0)) ++r;
  if (r == 0) throw NotPSD("state has empty support");

  const DensityMatrix inner = sample_hs_density({r}, r, seed);
  DensityMatrix out;
  out.dims = rho.dims;
  out.matrix = eig.vectors.leftCols(r) * inner.matrix * eig.vectors.leftCols(r).adjoint();
  return out;
}

}  // namespace qmono
