#include "qmono/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <numeric>

namespace qmono {

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// Row-major strides for a dims list: index = sum_k i_k * stride_k.
std::vector<int> strides_of(const Dims& dims) {
  std::vector<int> s(dims.size());
  int acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

void check_subsystem(const Dims& dims, int subsystem) {
  if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
    throw IndexOutOfRange("subsystem index " + std::to_string(subsystem) +
                          " out of range for " + std::to_string(dims.size()) + " factors");
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.dims;
  for (int k : keep) check_subsystem(dims, k);
  std::vector<int> keep_sorted(keep);
  std::sort(keep_sorted.begin(), keep_sorted.end());
  keep_sorted.erase(std::unique(keep_sorted.begin(), keep_sorted.end()), keep_sorted.end());

  std::vector<int> trace_idx;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (!std::binary_search(keep_sorted.begin(), keep_sorted.end(), k)) trace_idx.push_back(k);

  Dims kdims, tdims;
  for (int k : keep_sorted) kdims.push_back(dims[k]);
  for (int k : trace_idx) tdims.push_back(dims[k]);
  const int dk = dims_product(kdims), dt = dims_product(tdims);

  const auto st = strides_of(dims);
  const auto kst = strides_of(kdims), tst = strides_of(tdims);
  // base offset of each kept / traced multi-index in the full space
  std::vector<int> koff(dk, 0), toff(dt, 0);
  for (int i = 0; i < dk; ++i)
    for (std::size_t f = 0; f < kdims.size(); ++f)
      koff[i] += ((i / kst[f]) % kdims[f]) * st[keep_sorted[f]];
  for (int t = 0; t < dt; ++t)
    for (std::size_t f = 0; f < tdims.size(); ++f)
      toff[t] += ((t / tst[f]) % tdims[f]) * st[trace_idx[f]];

  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (int i = 0; i < dk; ++i)
    for (int j = 0; j < dk; ++j) {
      Complex acc = 0.0;
      for (int t = 0; t < dt; ++t) acc += rho.matrix(koff[i] + toff[t], koff[j] + toff[t]);
      out(i, j) = acc;
    }
  return {std::move(out), kdims};
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, int subsystem) {
  const auto& dims = rho.dims;
  check_subsystem(dims, subsystem);
  const auto st = strides_of(dims);
  const int d = rho.dim(), ds = dims[subsystem], stride = st[subsystem];

  ComplexMatrix out(d, d);
  for (int i = 0; i < d; ++i) {
    const int is = (i / stride) % ds;
    for (int j = 0; j < d; ++j) {
      const int js = (j / stride) % ds;
      const int ii = i + (js - is) * stride;  // swap the subsystem digits
      const int jj = j + (is - js) * stride;
      out(ii, jj) = rho.matrix(i, j);
    }
  }
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tolerance * std::max(1.0, m.norm());
}

HermEig herm_eig(const ComplexMatrix& h) {
  if (!is_hermitian(h, tol::herm))
    throw NotHermitian("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw Error("eigensolver failed to converge");
  const Eigen::Index n = h.rows();
  HermEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = ComplexMatrix(n, n);
  for (Eigen::Index k = 0; k < n; ++k) out.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& p) {
  auto eig = herm_eig(p);
  RealVector lam = eig.values;
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tol::psd) throw NotPSD("matrix has eigenvalue " + std::to_string(lam[i]));
    lam[i] = std::sqrt(std::max(0.0, lam[i]));
  }
  return eig.vectors * lam.asDiagonal() * eig.vectors.adjoint();
}

double trace_norm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw BadShape("trace_norm expects a square matrix");
  return a.jacobiSvd().singularValues().sum();
}

void validate_density(const DensityMatrix& rho) {
  if (rho.matrix.rows() != rho.matrix.cols())
    throw BadShape("density matrix is not square");
  if (dims_product(rho.dims) != rho.dim())
    throw BadShape("dims product does not match matrix size");
  if (!is_hermitian(rho.matrix, tol::herm))
    throw NotHermitian("density matrix is not Hermitian");
  if (std::abs(rho.matrix.trace().real() - 1.0) > tol::trace ||
      std::abs(rho.matrix.trace().imag()) > tol::trace)
    throw NotNormalized("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((rho.matrix + rho.matrix.adjoint()) / 2.0,
                                                  Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol::psd)
    throw NotPSD("density matrix has a negative eigenvalue");
}

namespace {

std::vector<int> permuted_index_map(const Dims& dims, const std::vector<int>& order) {
  if (order.size() != dims.size())
    throw BadShape("permutation length does not match subsystem count");
  std::vector<char> seen(dims.size(), 0);
  for (int o : order) {
    if (o < 0 || o >= static_cast<int>(dims.size()) || seen[o])
      throw BadShape("invalid subsystem permutation");
    seen[o] = 1;
  }
  Dims ndims(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) ndims[k] = dims[order[k]];
  const auto ost = strides_of(dims), nst = strides_of(ndims);
  const int d = dims_product(dims);
  std::vector<int> map(d);  // map[new index] = old index
  for (int i = 0; i < d; ++i) {
    int old = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      old += ((i / nst[k]) % ndims[k]) * ost[order[k]];
    map[i] = old;
  }
  return map;
}

}  // namespace

PureState permute_subsystems(const PureState& psi, const std::vector<int>& order) {
  const auto map = permuted_index_map(psi.dims, order);
  PureState out;
  out.dims.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out.dims[k] = psi.dims[order[k]];
  out.amplitudes.resize(psi.dim());
  for (int i = 0; i < psi.dim(); ++i) out.amplitudes[i] = psi.amplitudes[map[i]];
  out.subnormalized = psi.subnormalized;
  return out;
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, const std::vector<int>& order) {
  const auto map = permuted_index_map(rho.dims, order);
  DensityMatrix out;
  out.dims.resize(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) out.dims[k] = rho.dims[order[k]];
  const int d = rho.dim();
  out.matrix.resize(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) out.matrix(i, j) = rho.matrix(map[i], map[j]);
  return out;
}

}  // namespace qmono
