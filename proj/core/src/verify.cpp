#include "qmono/verify.hpp"

#include "qmono/charstates.hpp"
#include "qmono/linalg.hpp"
#include "qmono/measures.hpp"
#include "qmono/monogamy.hpp"
#include "qmono/parallel.hpp"
#include "qmono/reshape.hpp"
#include "qmono/roof.hpp"
#include "qmono/sampling.hpp"
#include "qmono/tail.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

namespace qmono::verify {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

struct Outcome {
  bool ok = false;
  std::string detail;
};

CheckResult wrap(const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult res;
  res.name = name;
  try {
    Outcome o = body();
    res.passed = o.ok;
    res.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

DensityMatrix pure_density(const PureState& psi) {
  DensityMatrix rho;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  rho.dims = psi.dims;
  return rho;
}

PureState canonical_w() {
  const double a = 1.0 / std::sqrt(3.0);
  return w_class_state(a, a, a, 0.0);
}

double det_quotient(const PureState& psi) {
  const int d = psi.dims[0];
  const ComplexMatrix x = vec_to_matrix(psi.amplitudes, d, d);
  const double n = x.norm();
  return n > 0.0 ? std::abs((x / n).determinant()) : 0.0;
}

}  // namespace

CheckResult check_roof_matches_closed_form(std::uint64_t seed, int threads) {
  return wrap("roof-matches-closed-form", [=] {
    const int n = 500;
    const double tol = 1e-5;
    std::vector<double> err(n);
    parallel_for(n, threads, [&](int i) {
      const int rank = 1 + i % 4;
      const DensityMatrix rho = sample_hs_density({2, 2}, rank, derive_seed(seed, i));
      const WoottersRecord rec = wootters_analysis(rho);
      RoofConfig cfg;
      cfg.restarts = 6;
      cfg.threads = 1;
      cfg.seed = derive_seed(seed, 100000 + i);
      const double lo =
          roof_optimize(rho, MeasureId::concurrence(), head_cut(2), RoofMode::min, cfg).value;
      cfg.seed = derive_seed(seed, 200000 + i);
      const double hi =
          roof_optimize(rho, MeasureId::concurrence(), head_cut(2), RoofMode::max, cfg).value;
      err[i] = std::max(std::abs(lo - rec.c_formation), std::abs(hi - rec.c_assistance));
    });
    const double worst = *std::max_element(err.begin(), err.end());
    return Outcome{worst < tol, "worst |roof - closed form| = " + fmt(worst) + " over " +
                                    std::to_string(n) + " states (tol " + fmt(tol) + ")"};
  });
}

CheckResult check_tangle_w_saturation(std::uint64_t seed, int threads) {
  (void)seed;
  (void)threads;
  return wrap("tangle-w-saturation", [=] {
    const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
    const double deficit = monogamy_deficit(pure_density(canonical_w()), ev, 2.0);
    return Outcome{std::abs(deficit) <= 1e-8,
                   "squared-concurrence deficit on the W state = " + fmt(deficit) +
                       " (tol 1e-08)"};
  });
}

CheckResult check_tangle_haar(std::uint64_t seed, int threads) {
  return wrap("tangle-haar", [=] {
    const int n = 10000;
    const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
    std::vector<double> deficit(n);
    parallel_for(n, threads, [&](int i) {
      const PureState psi = sample_haar_pure({2, 2, 2}, derive_seed(seed, i));
      deficit[i] = monogamy_deficit(pure_density(psi), ev, 2.0);
    });
    const double low = *std::min_element(deficit.begin(), deficit.end());
    return Outcome{low >= -1e-7, "min squared-concurrence deficit = " + fmt(low) + " over " +
                                     std::to_string(n) + " pure states (floor -1e-07)"};
  });
}

CheckResult check_exponent_scan_ckw(std::uint64_t seed, int threads) {
  return wrap("exponent-scan-ckw", [=] {
    const MeasureTriple ev = make_evaluators(MeasureId::concurrence());
    const ExponentScan scan = exponent_scan({2, 2, 2}, ev, 200, seed, true, threads);
    const bool ok =
        std::abs(scan.alpha_hat - 2.0) <= 1e-3 && scan.maximizer_label == "special:w";
    return Outcome{ok, "alpha_hat = " + fmt(scan.alpha_hat) + ", maximizer = " +
                           (scan.maximizer_label.empty() ? "(none)" : scan.maximizer_label) +
                           ", evaluated " + std::to_string(scan.evaluated) + ", witnesses " +
                           std::to_string(scan.witnesses)};
  });
}

CheckResult check_negativity_monogamy(std::uint64_t seed, int threads) {
  return wrap("negativity-monogamy", [=] {
    const int n = 10000;
    const MeasureTriple ev = make_negativity_evaluators();
    std::vector<double> deficit(n);
    parallel_for(n, threads, [&](int i) {
      const PureState psi = sample_haar_pure({2, 2, 2}, derive_seed(seed, i));
      deficit[i] = monogamy_deficit(pure_density(psi), ev, 2.0);
    });
    const double low = *std::min_element(deficit.begin(), deficit.end());
    return Outcome{low >= -1e-7, "min squared-negativity deficit = " + fmt(low) + " over " +
                                     std::to_string(n) + " pure states (floor -1e-07)"};
  });
}

CheckResult check_markov(std::uint64_t seed, int threads) {
  return wrap("markov-states", [=] {
    const int n = 50;
    struct Slot {
      double ssa = 0.0, gap_c = 0.0, gap_n = 0.0, eac_c = 0.0, eac_n = 0.0;
      bool ok = false;
    };
    std::vector<Slot> slots(n);
    parallel_for(n, threads, [&](int i) {
      Rng rng(derive_seed(seed, 300 + i));
      MarkovSpec ms;
      const double q1 = 0.2 + 0.6 * rng.uniform();
      for (int j = 0; j < 2; ++j) {
        MarkovBlock b;
        b.q = j == 0 ? q1 : 1.0 - q1;
        const int rank_ab = 1 + static_cast<int>(rng.uniform() * 2.0);
        const int rank_bc = 1 + static_cast<int>(rng.uniform() * 2.0);
        b.ab = sample_hs_density({2, 2}, std::min(rank_ab, 2), derive_seed(seed, 1000 + 4 * i + 2 * j));
        b.bc = sample_hs_density({2, 2}, std::min(rank_bc, 2), derive_seed(seed, 1000 + 4 * i + 2 * j + 1));
        ms.blocks.push_back(std::move(b));
      }
      const DensityMatrix rho = markov_build(ms);

      Slot& s = slots[i];
      s.ssa = ssa_deficit(rho);

      RoofConfig cfg;
      cfg.restarts = 3;
      cfg.max_iterations = 3000;
      cfg.ensemble_size = 32;
      cfg.threads = 1;
      cfg.seed = derive_seed(seed, 5000 + i);
      const MonogamyReport rc =
          disentangling_check(rho, make_evaluators(MeasureId::concurrence(), cfg), 1e-6);
      const MonogamyReport rn = disentangling_check(rho, make_negativity_evaluators(), 1e-6);
      s.gap_c = std::abs(rc.e_abc - rc.e_ab);
      s.gap_n = std::abs(rn.e_abc - rn.e_ab);
      s.eac_c = rc.e_ac;
      s.eac_n = rn.e_ac;
      s.ok = std::abs(s.ssa) < 1e-8 && rc.disentangling_satisfied && rn.disentangling_satisfied &&
             s.eac_c < 1e-8 && s.eac_n <= 1e-10 && rc.monogamy_verdict && rn.monogamy_verdict;
    });
    bool all = true;
    double wssa = 0.0, wgc = 0.0, wgn = 0.0, wac = 0.0, wan = 0.0;
    for (const Slot& s : slots) {
      all = all && s.ok;
      wssa = std::max(wssa, std::abs(s.ssa));
      wgc = std::max(wgc, s.gap_c);
      wgn = std::max(wgn, s.gap_n);
      wac = std::max(wac, s.eac_c);
      wan = std::max(wan, s.eac_n);
    }
    return Outcome{all, "worst ssa = " + fmt(wssa) + ", concurrence gap = " + fmt(wgc) +
                            ", negativity gap = " + fmt(wgn) + ", E(AC) = " + fmt(wac) +
                            ", N(AC) = " + fmt(wan) + " over " + std::to_string(n) + " specs"};
  });
}

CheckResult check_zero_g_tail(std::uint64_t seed, int threads) {
  return wrap("zero-g-tail", [=] {
    const int n2 = 100, n3 = 30;
    std::vector<double> recon(n2 + n3, 0.0), taildet(n2 + n3, 0.0);
    parallel_for(n2 + n3, threads, [&](int i) {
      const int d = i < n2 ? 2 : 3;
      const DensityMatrix rho = sample_hs_density({d, d}, d * d, derive_seed(seed, i));
      const Decomposition dec = zero_g_tail(rho);
      recon[i] = (dec.reconstruct() - rho.matrix).norm();
      for (std::size_t k = 1; k < dec.vectors.size(); ++k)
        taildet[i] = std::max(taildet[i], det_quotient(dec.vectors[k]));
    });
    const double wr = *std::max_element(recon.begin(), recon.end());
    const double wd = *std::max_element(taildet.begin(), taildet.end());
    return Outcome{wr < 1e-9 && wd < 1e-9,
                   "worst reconstruction = " + fmt(wr) + ", worst tail |det| = " + fmt(wd) +
                       " over " + std::to_string(n2 + n3) + " states (tol 1e-09)"};
  });
}

CheckResult check_gmono_invariance(std::uint64_t seed, int threads) {
  return wrap("gmono-invariance", [=] {
    const int n = 30;
    std::vector<double> err(n, 0.0), spread(n, 0.0);
    parallel_for(n, threads, [&](int i) {
      const int d = i < 10 ? 2 : 3;
      const int r = i < 10 ? 2 : 2 + i % 3;
      Rng rng(derive_seed(seed, 400 + i));

      GMonoSpec spec;
      std::uint64_t xs = derive_seed(seed, 500 + i);
      do {
        spec.x = sample_ginibre(d, d, xs++);
      } while (std::abs((spec.x / spec.x.norm()).determinant()) < 1e-2);
      spec.c = std::polar(0.5 + rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());

      const NilpotentSubspace ns = nilpotent_subspace(d, r - 1, derive_seed(seed, 600 + i));
      spec.z1 = ComplexMatrix::Zero(d, d);
      for (const auto& b : ns.basis) spec.z1 += 0.5 * rng.cgaussian() * b;
      spec.tail = ns.basis;

      std::vector<double> weights(r);
      weights[0] = 0.4 + 0.6 * rng.uniform();
      for (int j = 1; j < r; ++j) weights[j] = 0.2 + 0.8 * rng.uniform();

      const GMonoState gs = gmono_state(spec, weights);
      const double expected = std::pow(std::abs(spec.x.determinant()), 2.0 / d) *
                              std::norm(spec.c) * gs.head_share;
      const InvarianceScan scan = invariance_scan(gs.rho, MeasureId::g_concurrence(),
                                                  head_cut(2), 50, derive_seed(seed, 700 + i));
      err[i] = std::max(std::abs(scan.min_avg - expected), std::abs(scan.max_avg - expected));
      spread[i] = scan.spread;
    });
    const double we = *std::max_element(err.begin(), err.end());
    const double ws = *std::max_element(spread.begin(), spread.end());
    return Outcome{we < 1e-7 && ws < 1e-7,
                   "worst |average - predicted| = " + fmt(we) + ", worst spread = " + fmt(ws) +
                       " over " + std::to_string(n) + " states x 50 decompositions (tol 1e-07)"};
  });
}

CheckResult check_w_class_marginals(std::uint64_t seed, int threads) {
  return wrap("w-class-marginals", [=] {
    const int n = 100;
    std::vector<double> diff(n, 0.0);
    std::vector<int> rank(n, 1);
    parallel_for(n, threads, [&](int i) {
      Rng rng(derive_seed(seed, 800 + i));
      Complex l[4];
      double n2 = 0.0;
      for (auto& c : l) {
        c = rng.cgaussian();
        n2 += std::norm(c);
      }
      for (auto& c : l) c /= std::sqrt(n2);
      const DensityMatrix rho = pure_density(w_class_state(l[0], l[1], l[2], l[3]));
      for (const auto& keep : {Dims{0, 1}, Dims{0, 2}}) {
        const WoottersRecord rec = wootters_analysis(partial_trace(rho, keep));
        diff[i] = std::max(diff[i], std::abs(rec.c_formation - rec.c_assistance));
        rank[i] = std::max(rank[i], rec.r_rank);
      }
    });
    std::vector<double> gap(n, 0.0);
    parallel_for(n, threads, [&](int i) {
      const DensityMatrix rho = sample_hs_density({2, 2}, 2, derive_seed(seed, 900 + i));
      const WoottersRecord rec = wootters_analysis(rho);
      gap[i] = rec.c_assistance - rec.c_formation;
    });
    const double wdiff = *std::max_element(diff.begin(), diff.end());
    const int wrank = *std::max_element(rank.begin(), rank.end());
    std::nth_element(gap.begin(), gap.begin() + n / 2, gap.end());
    const double median = gap[n / 2];
    const bool ok = wdiff < 1e-8 && wrank == 1 && median > 1e-3;
    return Outcome{ok, "w-class: worst |c_f - c_a| = " + fmt(wdiff) + ", worst rank(R) = " +
                           std::to_string(wrank) + "; generic rank-2 median(c_a - c_f) = " +
                           fmt(median)};
  });
}

CheckResult check_product_split(std::uint64_t seed, int threads) {
  return wrap("product-split", [=] {
    const MeasureTriple ev = make_evaluators(MeasureId::g_concurrence());

    const int n = 200;
    std::vector<int> verdict(n, 0);  // 0 skipped, 1 ok, -1 violation
    parallel_for(n, threads, [&](int i) {
      const PureState psi = sample_haar_pure({2, 2, 2}, derive_seed(seed, 1000 + i));
      const MonogamyReport rep = disentangling_check(pure_density(psi), ev, 1e-6);
      if (rep.e_ab <= 0.05) return;  // face value too small to witness anything
      const ProductSplit split = product_split_check(psi);
      verdict[i] = (rep.disentangling_satisfied && !split.is_product) ? -1 : 1;
    });

    const int np = 50;
    std::vector<int> pok(np, 0);
    parallel_for(np, threads, [&](int i) {
      const PureState chi = sample_haar_pure({2, 2}, derive_seed(seed, 2000 + i));
      const PureState phi = sample_haar_pure({2}, derive_seed(seed, 3000 + i));
      PureState psi;
      psi.dims = {2, 2, 2};
      psi.amplitudes = tensor(chi.amplitudes, phi.amplitudes);
      const MonogamyReport rep = disentangling_check(pure_density(psi), ev, 1e-9);
      const ProductSplit split = product_split_check(psi, 1e-9);
      pok[i] = (rep.disentangling_satisfied && rep.e_ac <= 1e-9 && split.is_product) ? 1 : -1;
    });

    int considered = 0, violations = 0, product_bad = 0;
    for (int v : verdict) {
      considered += v != 0;
      violations += v < 0;
    }
    for (int v : pok) product_bad += v < 0;
    const bool ok = violations == 0 && product_bad == 0 && considered > 0;
    return Outcome{ok, std::to_string(considered) + "/" + std::to_string(n) +
                           " generic states above the face threshold, " +
                           std::to_string(violations) + " false disentanglings; " +
                           std::to_string(np - product_bad) + "/" + std::to_string(np) +
                           " product states satisfy the condition"};
  });
}

CheckResult check_face_property(std::uint64_t seed, int threads) {
  return wrap("face-property", [=] {
    const int n = 50;
    const DensityMatrix rho_w = partial_trace(pure_density(canonical_w()), {0, 1});
    std::vector<double> diff(n);
    parallel_for(n, threads, [&](int i) {
      const DensityMatrix sigma = sample_in_support(rho_w, derive_seed(seed, i));
      const WoottersRecord rec = wootters_analysis(sigma);
      diff[i] = std::abs(rec.c_formation - rec.c_assistance);
    });
    const double worst = *std::max_element(diff.begin(), diff.end());
    return Outcome{worst <= 1e-8, "worst |c_f - c_a| = " + fmt(worst) + " over " +
                                      std::to_string(n) +
                                      " draws inside the W-marginal support (tol 1e-08)"};
  });
}

CheckResult check_gamma_contract(std::uint64_t seed, int threads) {
  (void)seed;
  (void)threads;
  return wrap("gamma-contract", [=] {
    const double g1 = gamma_exponent(0.5, 0.5);
    const double g2 = gamma_exponent(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
    bool witness_thrown = false;
    try {
      gamma_exponent(1.0, 0.1);
    } catch (const NonMonogamousWitness&) {
      witness_thrown = true;
    }
    bool range_thrown = false;
    try {
      gamma_exponent(1.2, 0.5);
    } catch (const OutOfRange&) {
      range_thrown = true;
    }
    const bool sentinels = gamma_exponent(1.0, 0.0) == 0.0 && gamma_exponent(0.3, 0.0) == 0.0 &&
                           gamma_exponent(0.0, 0.0) == 0.0;
    const bool ok = std::abs(g1 - 1.0) <= 1e-10 && std::abs(g2 - 2.0) <= 1e-10 &&
                    witness_thrown && range_thrown && sentinels;
    return Outcome{ok, "gamma(1/2,1/2) = " + fmt(g1) + ", gamma(1/sqrt2,1/sqrt2) = " + fmt(g2) +
                           ", witness thrown = " + (witness_thrown ? "yes" : "no") +
                           ", sentinels = " + (sentinels ? "ok" : "bad")};
  });
}

namespace {

using CheckFn = CheckResult (*)(std::uint64_t, int);

const std::vector<std::pair<std::string, std::vector<CheckFn>>>& suite_table() {
  static const std::vector<std::pair<std::string, std::vector<CheckFn>>> table = {
      {"wootters-oracle", {&check_roof_matches_closed_form}},
      {"markov", {&check_markov}},
      {"ckw",
       {&check_tangle_w_saturation, &check_tangle_haar, &check_exponent_scan_ckw,
        &check_negativity_monogamy, &check_gamma_contract}},
      {"wclass", {&check_w_class_marginals, &check_face_property}},
      {"gmono-invariance", {&check_gmono_invariance}},
      {"zero-g-tail", {&check_zero_g_tail}},
      {"cor8", {&check_product_split}},
  };
  return table;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> names;
  for (const auto& [name, fns] : suite_table()) names.push_back(name);
  return names;
}

bool is_suite(const std::string& name) {
  for (const auto& [n, fns] : suite_table())
    if (n == name) return true;
  return false;
}

std::vector<CheckResult> run_suite(const std::string& name, std::uint64_t seed, int threads) {
  for (const auto& [n, fns] : suite_table()) {
    if (n != name) continue;
    std::vector<CheckResult> out;
    for (CheckFn fn : fns) out.push_back(fn(seed, threads));
    return out;
  }
  throw BadSpec("unknown verify suite: " + name);
}

std::vector<CheckResult> run_all(std::uint64_t seed, int threads) {
  std::vector<CheckResult> out;
  for (const auto& [name, fns] : suite_table())
    for (CheckFn fn : fns) out.push_back(fn(seed, threads));
  return out;
}

}  // namespace qmono::verify
