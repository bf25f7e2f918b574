#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmono/linalg.hpp"
#include "qmono/parallel.hpp"
#include "qmono/reshape.hpp"
#include "qmono/sampling.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>

using namespace qmono;

namespace {

PureState bell() {
  PureState psi;
  psi.dims = {2, 2};
  psi.amplitudes = ComplexVector::Zero(4);
  psi.amplitudes[0] = psi.amplitudes[3] = 1.0 / std::sqrt(2.0);
  return psi;
}

DensityMatrix pure_density(const PureState& psi) {
  return {psi.amplitudes * psi.amplitudes.adjoint(), psi.dims};
}

PureState w_state() {
  PureState psi;
  psi.dims = {2, 2, 2};
  psi.amplitudes = ComplexVector::Zero(8);
  psi.amplitudes[4] = psi.amplitudes[2] = psi.amplitudes[1] = 1.0 / std::sqrt(3.0);
  return psi;
}

}  // namespace

TEST_CASE("tensor follows the row-major index convention") {
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  const ComplexMatrix t = tensor(a, b);
  REQUIRE(t.rows() == 4);
  CHECK(t(0, 1) == Complex(1));   // a00 * b01
  CHECK(t(1, 0) == Complex(1));   // a00 * b10
  CHECK(t(2, 1) == Complex(3));   // a10 * b01: left factor owns the block index
  CHECK(t(1, 2) == Complex(2));   // a01 * b10
}

TEST_CASE("partial trace of the Bell state is maximally mixed") {
  const DensityMatrix rho = pure_density(bell());
  const DensityMatrix a = partial_trace(rho, {0});
  CHECK((a.matrix - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
  CHECK(a.dims == Dims{2});
}

TEST_CASE("partial trace of W over BC is diag(2/3, 1/3)") {
  const DensityMatrix rho = pure_density(w_state());
  const DensityMatrix a = partial_trace(rho, {0});
  ComplexMatrix expect(2, 2);
  expect << 2.0 / 3.0, 0, 0, 1.0 / 3.0;
  CHECK((a.matrix - expect).norm() < 1e-14);
}

TEST_CASE("partial trace composes with itself") {
  const DensityMatrix rho = sample_hs_density({2, 3, 2}, 5, 42);
  const DensityMatrix ab = partial_trace(rho, {0, 1});
  const DensityMatrix a1 = partial_trace(ab, {0});
  const DensityMatrix a2 = partial_trace(rho, {0});
  CHECK((a1.matrix - a2.matrix).norm() < 1e-13);
}

TEST_CASE("partial transpose of the Bell state has eigenvalues (.5 .5 .5 -.5)") {
  const DensityMatrix rho = pure_density(bell());
  const ComplexMatrix pt = partial_transpose(rho, 1);
  const HermEig eig = herm_eig(pt);
  CHECK(eig.values[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[3] == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("herm_eig reconstructs and rejects non-hermitian input") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 4, 7);
  const HermEig eig = herm_eig(rho.matrix);
  const ComplexMatrix rec =
      eig.vectors * eig.values.asDiagonal() * eig.vectors.adjoint();
  CHECK((rec - rho.matrix).norm() < 1e-12);
  CHECK(eig.values[0] >= eig.values[1]);  // descending

  ComplexMatrix bad(2, 2);
  bad << 1, Complex(0, 1), Complex(0, 1), 1;  // symmetric, not hermitian
  CHECK_THROWS_AS(herm_eig(bad), NotHermitian);
}

TEST_CASE("psd_sqrt squares back") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 2, 11);
  const ComplexMatrix s = psd_sqrt(rho.matrix);
  CHECK((s * s - rho.matrix).norm() < 1e-12);
}

TEST_CASE("bipartite reshape exposes the Schmidt coefficients") {
  const BipartiteForm form = bipartite_reshape(bell());
  CHECK(form.schmidt.size() == 2);
  CHECK(form.schmidt[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(form.schmidt[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // vec -> matrix -> vec round trip
  const ComplexMatrix x = vec_to_matrix(bell().amplitudes, 2, 2);
  CHECK((matrix_to_vec(x) - bell().amplitudes).norm() == 0.0);
}

TEST_CASE("cut handling validates and regroups") {
  const Dims dims{2, 3, 2};
  const Cut cut{{0, 2}, {1}};
  const auto [dl, dr] = cut_dims(dims, cut);
  CHECK(dl == 4);
  CHECK(dr == 3);
  CHECK_THROWS_AS(cut_dims(dims, Cut{{0}, {1}}), BadCut);          // missing index
  CHECK_THROWS_AS(cut_dims(dims, Cut{{0, 1}, {1, 2}}), BadCut);    // duplicate
  CHECK_THROWS_AS(cut_dims(dims, Cut{{}, {0, 1, 2}}), BadCut);     // empty side

  const PureState psi = sample_haar_pure(dims, 3);
  const PureState grouped = group_cut(psi, cut);
  CHECK(grouped.dims == Dims{4, 3});
  CHECK(grouped.amplitudes.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));

  const Cut head = head_cut(3);
  CHECK(head.left == std::vector<int>{0});
  CHECK(head.right == std::vector<int>{1, 2});
}

TEST_CASE("permute_subsystems is inverted by the inverse order") {
  const DensityMatrix rho = sample_hs_density({2, 3, 2}, 4, 9);
  const std::vector<int> order{2, 0, 1};
  std::vector<int> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = static_cast<int>(k);
  const DensityMatrix back = permute_subsystems(permute_subsystems(rho, order), inverse);
  CHECK((back.matrix - rho.matrix).norm() < 1e-14);
  CHECK(back.dims == rho.dims);
}

TEST_CASE("samplers are seed-deterministic and produce valid states") {
  const PureState p1 = sample_haar_pure({2, 2}, 5);
  const PureState p2 = sample_haar_pure({2, 2}, 5);
  CHECK((p1.amplitudes - p2.amplitudes).norm() == 0.0);
  CHECK(p1.norm2() == doctest::Approx(1.0).epsilon(1e-12));

  const PureState p3 = sample_haar_pure({2, 2}, 6);
  CHECK((p1.amplitudes - p3.amplitudes).norm() > 1e-3);

  const DensityMatrix rho = sample_hs_density({2, 2}, 2, 5);
  CHECK_NOTHROW(validate_density(rho));
  const HermEig eig = herm_eig(rho.matrix);
  int rank = 0;
  for (Eigen::Index i = 0; i < 4; ++i) rank += eig.values[i] > 1e-12;
  CHECK(rank == 2);

  const ComplexMatrix u = sample_isometry(6, 3, 17);
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(3, 3)).norm() < 1e-12);

  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
}

TEST_CASE("rng streams reproduce and stay in range") {
  Rng a(123), b(123);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng g(7);
  double mean = 0.0;
  for (int i = 0; i < 2000; ++i) mean += g.gaussian();
  CHECK(std::abs(mean / 2000.0) < 0.1);
}

TEST_CASE("parallel_for covers the range once and rethrows") {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);

  // identical reduction regardless of thread count
  std::vector<double> a(64), b(64);
  parallel_for(64, 1, [&](int i) { a[i] = Rng(derive_seed(3, i)).uniform(); });
  parallel_for(64, 4, [&](int i) { b[i] = Rng(derive_seed(3, i)).uniform(); });
  CHECK(a == b);

  CHECK_THROWS_AS(parallel_for(8, 2,
                               [](int i) {
                                 if (i == 5) throw BadSpec("boom");
                               }),
                  BadSpec);
}

TEST_CASE("QMONO_THREADS overrides the requested thread count") {
  setenv("QMONO_THREADS", "3", 1);
  CHECK(resolve_threads(8) == 3);
  setenv("QMONO_THREADS", "junk", 1);
  CHECK(resolve_threads(2) == resolve_threads(0));  // unparsable -> hardware fallback
  unsetenv("QMONO_THREADS");
  CHECK(resolve_threads(2) == 2);
  CHECK(resolve_threads(0) >= 1);
}
