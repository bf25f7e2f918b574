#include "qmono/reshape.hpp"

#include "qmono/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace qmono {

ComplexMatrix vec_to_matrix(const ComplexVector& y, int d_a, int d_b) {
  if (y.size() != static_cast<Eigen::Index>(d_a) * d_b)
    throw BadShape("vector length does not match d_a * d_b");
  // row-major: amplitude of |i><j| basis element sits at i*d_b + j
  return Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(y.data(), d_a, d_b);
}

ComplexVector matrix_to_vec(const ComplexMatrix& x) {
  ComplexVector y(x.rows() * x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) y[i * x.cols() + j] = x(i, j);
  return y;
}

BipartiteForm bipartite_reshape(const PureState& psi) {
  if (psi.dims.size() != 2)
    throw BadShape("bipartite_reshape expects exactly two factors; group the cut first");
  BipartiteForm out;
  out.x = vec_to_matrix(psi.amplitudes, psi.dims[0], psi.dims[1]);
  out.schmidt = out.x.jacobiSvd().singularValues();
  return out;
}

std::pair<int, int> cut_dims(const Dims& dims, const Cut& cut) {
  const int n = static_cast<int>(dims.size());
  std::vector<char> seen(n, 0);
  auto absorb = [&](const std::vector<int>& side) {
    int d = 1;
    for (int k : side) {
      if (k < 0 || k >= n) throw BadCut("cut references subsystem " + std::to_string(k));
      if (seen[k]) throw BadCut("cut repeats subsystem " + std::to_string(k));
      seen[k] = 1;
      d *= dims[k];
    }
    return d;
  };
  const int da = absorb(cut.left), db = absorb(cut.right);
  if (cut.left.empty() || cut.right.empty()) throw BadCut("cut side is empty");
  for (int k = 0; k < n; ++k)
    if (!seen[k]) throw BadCut("cut does not cover subsystem " + std::to_string(k));
  return {da, db};
}

namespace {

std::vector<int> cut_order(const Cut& cut) {
  std::vector<int> order(cut.left);
  order.insert(order.end(), cut.right.begin(), cut.right.end());
  return order;
}

}  // namespace

PureState group_cut(const PureState& psi, const Cut& cut) {
  auto [da, db] = cut_dims(psi.dims, cut);
  PureState p = permute_subsystems(psi, cut_order(cut));
  p.dims = {da, db};
  return p;
}

DensityMatrix group_cut(const DensityMatrix& rho, const Cut& cut) {
  auto [da, db] = cut_dims(rho.dims, cut);
  DensityMatrix r = permute_subsystems(rho, cut_order(cut));
  r.dims = {da, db};
  return r;
}

Cut head_cut(int n_subsystems) {
  Cut cut;
  cut.left = {0};
  for (int k = 1; k < n_subsystems; ++k) cut.right.push_back(k);
  return cut;
}

}  // namespace qmono
