#include "qmono/tail.hpp"

#include "qmono/linalg.hpp"
#include "qmono/reshape.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>

namespace qmono {

namespace {

// |det(X / ||X||_F)|: scale-free singularity witness
double detq(const ComplexMatrix& x) {
  const double n = x.norm();
  if (n <= 0.0) return 0.0;
  return std::abs((x / n).determinant());
}

PureState make_state(const ComplexMatrix& x, const Dims& dims) {
  PureState s;
  s.amplitudes = matrix_to_vec(x);
  s.dims = dims;
  s.subnormalized = true;
  return s;
}

}  // namespace

PairRotation pair_rotation(const PureState& x1, const PureState& x2) {
  if (x1.dims.size() != 2 || x1.dims[0] != x1.dims[1])
    throw BadShape("pair_rotation needs two equal factors");
  if (x2.dims != x1.dims) throw BadShape("pair_rotation arguments have different dims");
  const int d = x1.dims[0];
  const ComplexMatrix m1 = vec_to_matrix(x1.amplitudes, d, d);
  const ComplexMatrix m2 = vec_to_matrix(x2.amplitudes, d, d);

  if (detq(m1) <= tol::det)
    throw PivotSingular("pair_rotation pivot has vanishing determinant");

  PairRotation out;
  if (detq(m2) <= tol::det) {
    out.w = x2;
    out.y = x1;
    out.w.subnormalized = out.y.subnormalized = true;
    return out;
  }

  // det(X1 + lambda X2) = 0 at the eigenvalues of -(X2^-1 X1)
  const ComplexMatrix k = -m2.partialPivLu().solve(m1);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(k, false);
  Complex l0 = es.eigenvalues()[0];
  for (Eigen::Index i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()[i]) < std::abs(l0)) l0 = es.eigenvalues()[i];

  const double a = 1.0 / std::sqrt(1.0 + std::norm(l0));
  const Complex b = l0 * a;
  out.w = make_state(a * m1 + b * m2, x1.dims);
  out.y = make_state(std::conj(b) * m1 - a * m2, x1.dims);
  out.lambda0 = l0;
  return out;
}

Decomposition zero_g_tail(const DensityMatrix& rho) {
  validate_density(rho);
  if (rho.dims.size() != 2 || rho.dims[0] != rho.dims[1])
    throw BadShape("zero_g_tail needs two equal factors");
  const int d = rho.dims[0];

  const auto eig = herm_eig(rho.matrix);
  std::vector<PureState> roots;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    if (eig.values[j] <= 1e-12) continue;
    PureState w;
    w.amplitudes = std::sqrt(eig.values[j]) * eig.vectors.col(j);
    w.dims = rho.dims;
    w.subnormalized = true;
    roots.push_back(std::move(w));
  }

  bool any = false;
  for (const auto& w : roots)
    any = any || detq(vec_to_matrix(w.amplitudes, d, d)) > tol::det;
  if (!any) throw AllSingular("every spectral root has zero determinant");

  // fold the roots into one nonsingular carry plus a zero-determinant tail;
  // a degenerate remainder retires to the tail and the next nonsingular root
  // takes over as carry
  std::optional<PureState> carry;
  std::vector<PureState> tail;
  for (auto& x : roots) {
    if (!carry) {
      if (detq(vec_to_matrix(x.amplitudes, d, d)) > tol::det)
        carry = std::move(x);
      else
        tail.push_back(std::move(x));
      continue;
    }
    PairRotation pr = pair_rotation(*carry, x);
    tail.push_back(std::move(pr.w));
    if (detq(vec_to_matrix(pr.y.amplitudes, d, d)) > tol::det) {
      carry = std::move(pr.y);
    } else {
      tail.push_back(std::move(pr.y));
      carry.reset();
    }
  }
  if (!carry) throw AllSingular("pivot chain degenerated before completion");

  Decomposition out;
  out.vectors.reserve(tail.size() + 1);
  out.vectors.push_back(std::move(*carry));
  for (auto& t : tail) out.vectors.push_back(std::move(t));
  return out;
}

}  // namespace qmono
