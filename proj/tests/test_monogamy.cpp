#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmono/charstates.hpp"
#include "qmono/linalg.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/reshape.hpp"
#include "qmono/sampling.hpp"

#include <cmath>

using namespace qmono;

namespace {

DensityMatrix pure_density(const PureState& psi) {
  return {psi.amplitudes * psi.amplitudes.adjoint(), psi.dims};
}

PureState ghz() {
  PureState psi;
  psi.dims = {2, 2, 2};
  psi.amplitudes = ComplexVector::Zero(8);
  psi.amplitudes[0] = psi.amplitudes[7] = 1.0 / std::sqrt(2.0);
  return psi;
}

PureState w_state() {
  const double a = 1.0 / std::sqrt(3.0);
  return w_class_state(a, a, a, 0.0);
}

MarkovSpec two_block_spec(std::uint64_t seed) {
  MarkovSpec ms;
  for (int j = 0; j < 2; ++j) {
    MarkovBlock b;
    b.q = j == 0 ? 0.35 : 0.65;
    b.ab = sample_hs_density({2, 2}, 2, derive_seed(seed, 2 * j));
    b.bc = sample_hs_density({2, 2}, 2, derive_seed(seed, 2 * j + 1));
    ms.blocks.push_back(std::move(b));
  }
  return ms;
}

}  // namespace

TEST_CASE("gamma_exponent unit contract") {
  CHECK(std::abs(gamma_exponent(0.5, 0.5) - 1.0) <= 1e-10);
  CHECK(std::abs(gamma_exponent(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)) - 2.0) <= 1e-10);
  CHECK_THROWS_AS(gamma_exponent(1.0, 0.1), NonMonogamousWitness);
  CHECK_THROWS_AS(gamma_exponent(1.2, 0.5), OutOfRange);
  CHECK_THROWS_AS(gamma_exponent(0.5, -0.1), OutOfRange);
  // degenerate pairs return the infimum sentinel
  CHECK(gamma_exponent(1.0, 0.0) == 0.0);
  CHECK(gamma_exponent(0.3, 0.0) == 0.0);
  CHECK(gamma_exponent(0.0, 0.0) == 0.0);
}

TEST_CASE("gamma_exponent solves the root equation") {
  for (const auto [x1, x2] : {std::pair{0.3, 0.4}, {0.9, 0.2}, {0.6, 0.6}}) {
    const double g = gamma_exponent(x1, x2);
    CHECK(std::abs(std::pow(x1, g) + std::pow(x2, g) - 1.0) < 1e-9);
  }
}

TEST_CASE("GHZ: tangle deficit 1, marginals separable") {
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
  const DensityMatrix rho = pure_density(ghz());
  CHECK(monogamy_deficit(rho, ev, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
  const MonogamyReport rep = disentangling_check(rho, ev, 1e-6);
  CHECK(rep.e_abc == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.e_ab == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(rep.e_ac == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(!rep.disentangling_satisfied);
  CHECK(rep.monogamy_verdict);
  CHECK_THROWS_AS(monogamy_deficit(rho, ev, 0.0), OutOfRange);
}

TEST_CASE("W state saturates the squared-concurrence relation") {
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
  const DensityMatrix rho = pure_density(w_state());
  CHECK(std::abs(monogamy_deficit(rho, ev, 2.0)) < 1e-8);
  const MonogamyReport rep = disentangling_check(rho, ev, 1e-6);
  CHECK(rep.gamma_defined);
  CHECK(rep.gamma == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("product state chi (x) phi satisfies the disentangling condition") {
  const PureState chi = sample_haar_pure({2, 2}, 91);
  const PureState phi = sample_haar_pure({2}, 92);
  PureState psi;
  psi.dims = {2, 2, 2};
  psi.amplitudes = tensor(chi.amplitudes, phi.amplitudes);
  for (const auto& m : {MeasureId::concurrence(), MeasureId::g_concurrence()}) {
    const MonogamyReport rep = disentangling_check(pure_density(psi), make_evaluators(m), 1e-9);
    CHECK(rep.disentangling_satisfied);
    CHECK(rep.e_ac <= 1e-9);
    CHECK(rep.monogamy_verdict);
  }
}

TEST_CASE("negativity evaluators work on mixed tripartite states") {
  const MeasureTriple ev = make_negativity_evaluators();
  const DensityMatrix rho = markov_build(two_block_spec(17));
  const MonogamyReport rep = disentangling_check(rho, ev, 1e-6);
  CHECK(rep.disentangling_satisfied);
  CHECK(rep.e_ac <= 1e-10);
  CHECK(rep.monogamy_verdict);
}

TEST_CASE("markov_build saturates strong subadditivity") {
  const DensityMatrix rho = markov_build(two_block_spec(23));
  CHECK(rho.dims == Dims{2, 8, 2});
  CHECK(std::abs(ssa_deficit(rho)) < 1e-10);
  CHECK_NOTHROW(validate_density(rho));
}

TEST_CASE("markov_build rejects bad specs") {
  MarkovSpec empty;
  CHECK_THROWS_AS(markov_build(empty), BadSpec);
  MarkovSpec bad = two_block_spec(29);
  bad.blocks[0].q = 0.7;  // weights no longer sum to one
  CHECK_THROWS_AS(markov_build(bad), NotNormalized);
}

TEST_CASE("ssa_deficit is 1 on GHZ and 0 on products") {
  CHECK(ssa_deficit(pure_density(ghz())) == doctest::Approx(1.0).epsilon(1e-10));
  DensityMatrix prod;
  prod.dims = {2, 2, 2};
  const DensityMatrix a = sample_hs_density({2}, 2, 5);
  const DensityMatrix b = sample_hs_density({2}, 2, 6);
  const DensityMatrix c = sample_hs_density({2}, 2, 7);
  prod.matrix = tensor(tensor(a.matrix, b.matrix), c.matrix);
  CHECK(std::abs(ssa_deficit(prod)) < 1e-10);
}

TEST_CASE("flag_state assembles a block-diagonal classical-quantum state") {
  std::vector<std::pair<double, DensityMatrix>> ens;
  ens.push_back({0.25, sample_hs_density({2, 2}, 2, 1)});
  ens.push_back({0.75, sample_hs_density({2, 2}, 1, 2)});
  const DensityMatrix f = flag_state(ens);
  CHECK(f.dims == Dims{2, 2, 2});
  CHECK_NOTHROW(validate_density(f));
  // off-diagonal flag blocks vanish
  CHECK(f.matrix.block(0, 4, 4, 4).norm() < 1e-14);
  const DensityMatrix flags = partial_trace(f, {0});
  CHECK(flags.matrix(0, 0).real() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(flags.matrix(1, 1).real() == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("exponent_scan finds the W family as the extremal case") {
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
  const ExponentScan scan = exponent_scan({2, 2, 2}, ev, 20, 123, true, 1);
  CHECK(std::abs(scan.alpha_hat - 2.0) <= 1e-3);
  CHECK(scan.maximizer_label == "special:w");
  CHECK(scan.witnesses == 0);
  CHECK(scan.evaluated + scan.skipped >= 20);
  int total = 0;
  for (int c : scan.histogram) total += c;
  CHECK(total == scan.evaluated);
  CHECK(scan.maximizer.dims == Dims{2, 2, 2});
}

TEST_CASE("exponent_scan is thread-count independent") {
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
  const ExponentScan s1 = exponent_scan({2, 2, 2}, ev, 16, 9, true, 1);
  const ExponentScan s2 = exponent_scan({2, 2, 2}, ev, 16, 9, true, 4);
  CHECK(s1.alpha_hat == s2.alpha_hat);
  CHECK(s1.maximizer_label == s2.maximizer_label);
  CHECK(s1.histogram == s2.histogram);
}

TEST_CASE("disentangling_check rejects non-tripartite input") {
  const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
  const DensityMatrix rho = sample_hs_density({2, 2}, 2, 3);
  CHECK_THROWS_AS(disentangling_check(rho, ev, 1e-6), BadShape);
}
