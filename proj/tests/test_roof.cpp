#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmono/linalg.hpp"
#include "qmono/measures.hpp"
#include "qmono/reshape.hpp"
#include "qmono/roof.hpp"
#include "qmono/sampling.hpp"

#include <cmath>

using namespace qmono;

namespace {

const Cut kCut2 = head_cut(2);

PureState bell() {
  PureState psi;
  psi.dims = {2, 2};
  psi.amplitudes = ComplexVector::Zero(4);
  psi.amplitudes[0] = psi.amplitudes[3] = 1.0 / std::sqrt(2.0);
  return psi;
}

DensityMatrix werner(double p) {
  ComplexVector s = ComplexVector::Zero(4);
  s[1] = 1.0 / std::sqrt(2.0);
  s[2] = -1.0 / std::sqrt(2.0);
  DensityMatrix rho;
  rho.dims = {2, 2};
  rho.matrix = p * (s * s.adjoint()) + (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
  return rho;
}

Decomposition spectral(const DensityMatrix& rho) {
  const HermEig eig = herm_eig(rho.matrix);
  Decomposition dec;
  for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
    if (eig.values[j] <= 1e-12) continue;
    PureState w;
    w.amplitudes = std::sqrt(eig.values[j]) * eig.vectors.col(j);
    w.dims = rho.dims;
    w.subnormalized = true;
    dec.vectors.push_back(std::move(w));
  }
  return dec;
}

RoofConfig fast_cfg(std::uint64_t seed) {
  RoofConfig cfg;
  cfg.restarts = 4;
  cfg.seed = seed;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST_CASE("apply_isometry preserves the reconstruction and checks its input") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 3, 31);
  const Decomposition dec = spectral(rho);
  const int r = static_cast<int>(dec.size());

  const ComplexMatrix u = sample_isometry(r * r, r, 77);
  const Decomposition mixed = apply_isometry(dec, u);
  CHECK(mixed.size() == static_cast<std::size_t>(r * r));
  CHECK((mixed.reconstruct() - rho.matrix).norm() < 1e-12);

  ComplexMatrix not_iso = ComplexMatrix::Identity(r + 1, r);
  not_iso(0, 0) = 2.0;
  CHECK_THROWS_AS(apply_isometry(dec, not_iso), NotIsometry);
  CHECK_THROWS_AS(apply_isometry(dec, ComplexMatrix::Identity(r + 1, r + 1)), NotIsometry);
}

TEST_CASE("decomposition_average matches the weighted pure values") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 2, 13);
  const Decomposition dec = spectral(rho);
  double expect = 0.0;
  for (const auto& w : dec.vectors) {
    PureState n = w;
    const double p = w.norm2();
    n.amplitudes /= std::sqrt(p);
    expect += p * pure_measure(MeasureId::entropy(), n, kCut2);
  }
  CHECK(decomposition_average(MeasureId::entropy(), dec, kCut2) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("roof of a pure state is the pure value in both modes") {
  DensityMatrix rho;
  rho.dims = {2, 2};
  rho.matrix = bell().amplitudes * bell().amplitudes.adjoint();
  for (RoofMode mode : {RoofMode::min, RoofMode::max}) {
    const RoofResult res = roof_optimize(rho, MeasureId::concurrence(), kCut2, mode, fast_cfg(1));
    CHECK(res.value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(res.converged);
    CHECK(res.decomposition.size() == 1);
  }
}

TEST_CASE("roof respects the Wootters closed form on Werner and random states") {
  SUBCASE("werner 0.8 formation = 0.7") {
    const RoofResult res =
        roof_optimize(werner(0.8), MeasureId::concurrence(), kCut2, RoofMode::min, fast_cfg(2));
    CHECK(res.value == doctest::Approx(0.7).epsilon(1e-5));
  }
  SUBCASE("random rank-2, both modes") {
    for (int i = 0; i < 3; ++i) {
      const DensityMatrix rho = sample_hs_density({2, 2}, 2, 900 + i);
      const WoottersRecord rec = wootters_analysis(rho);
      const double lo = roof_optimize(rho, MeasureId::concurrence(), kCut2, RoofMode::min,
                                      fast_cfg(40 + i))
                            .value;
      const double hi = roof_optimize(rho, MeasureId::concurrence(), kCut2, RoofMode::max,
                                      fast_cfg(50 + i))
                            .value;
      CHECK(lo == doctest::Approx(rec.c_formation).epsilon(2e-5));
      CHECK(hi == doctest::Approx(rec.c_assistance).epsilon(2e-5));
    }
  }
}

TEST_CASE("roof of a separable mixture vanishes") {
  DensityMatrix sep;
  sep.dims = {2, 2};
  sep.matrix = ComplexMatrix::Zero(4, 4);
  sep.matrix(0, 0) = 0.5;  // |00><00|
  sep.matrix(3, 3) = 0.5;  // |11><11|
  const RoofResult res =
      roof_optimize(sep, MeasureId::concurrence(), kCut2, RoofMode::min, fast_cfg(3));
  CHECK(res.value < 1e-9);
}

TEST_CASE("roof result reconstructs the input state") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 3, 55);
  const RoofResult res =
      roof_optimize(rho, MeasureId::entropy(), kCut2, RoofMode::min, fast_cfg(4));
  CHECK((res.decomposition.reconstruct() - rho.matrix).norm() < 1e-9);
  CHECK(res.value <= von_neumann_entropy(partial_trace(rho, {0})) + 1e-9);
}

TEST_CASE("roof is deterministic in the seed and monotone in the mode") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 3, 60);
  const double a =
      roof_optimize(rho, MeasureId::entropy(), kCut2, RoofMode::min, fast_cfg(9)).value;
  const double b =
      roof_optimize(rho, MeasureId::entropy(), kCut2, RoofMode::min, fast_cfg(9)).value;
  CHECK(a == b);
  const double hi =
      roof_optimize(rho, MeasureId::entropy(), kCut2, RoofMode::max, fast_cfg(9)).value;
  CHECK(hi >= a - 1e-12);
}

TEST_CASE("roof handles an uneven cut orientation") {
  // 2x4 system entered with the big factor on the left
  const DensityMatrix rho = sample_hs_density({4, 2}, 2, 70);
  const RoofResult res =
      roof_optimize(rho, MeasureId::concurrence(), kCut2, RoofMode::min, fast_cfg(5));
  CHECK(res.value >= 0.0);
  CHECK((res.decomposition.reconstruct() - rho.matrix).norm() < 1e-9);
  CHECK(res.decomposition.vectors[0].dims == Dims{4, 2});
}

TEST_CASE("invariance_scan has zero spread on pure states") {
  DensityMatrix rho;
  rho.dims = {2, 2};
  rho.matrix = bell().amplitudes * bell().amplitudes.adjoint();
  const InvarianceScan scan = invariance_scan(rho, MeasureId::entropy(), kCut2, 10, 123);
  CHECK(scan.spread < 1e-10);
  CHECK(scan.min_avg == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(invariance_scan(rho, MeasureId::entropy(), kCut2, 0, 1), OutOfRange);
}

TEST_CASE("invariance_scan spread is positive on a generic mixed state") {
  const DensityMatrix rho = sample_hs_density({2, 2}, 2, 80);
  const InvarianceScan scan = invariance_scan(rho, MeasureId::concurrence(), kCut2, 30, 5);
  CHECK(scan.spread > 1e-3);  // formation < assistance generically
  CHECK(scan.max_avg <= wootters_analysis(rho).c_assistance + 1e-6);
  CHECK(scan.min_avg >= wootters_analysis(rho).c_formation - 1e-6);
}
