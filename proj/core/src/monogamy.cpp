#include "qmono/monogamy.hpp"

#include "qmono/linalg.hpp"
#include "qmono/parallel.hpp"
#include "qmono/reshape.hpp"
#include "qmono/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmono {

namespace {

// one bipartite value on dims [d_l, d_r]: pure shortcut, two-qubit closed
// form when available, convex roof otherwise
double evaluate_bipartite(const MeasureId& m, const RoofConfig& cfg, const DensityMatrix& rho) {
  if (rho.dims.size() != 2) throw BadShape("bipartite evaluator needs two factors");
  const Cut cut = head_cut(2);

  const double purity = (rho.matrix * rho.matrix).trace().real();
  if (purity > 1.0 - 1e-10) {
    const auto eig = herm_eig(rho.matrix);
    PureState psi;
    psi.amplitudes = eig.vectors.col(0);
    psi.dims = rho.dims;
    return pure_measure(m, psi, cut);
  }

  if (rho.dims[0] == 2 && rho.dims[1] == 2) {
    const auto rec = wootters_analysis(rho);
    switch (m.kind) {
      case MeasureId::Kind::concurrence:
        return rec.c_formation;
      case MeasureId::Kind::g_concurrence:
        return rec.c_formation / 2.0;
      case MeasureId::Kind::entropy:
        return eof_from_concurrence(rec.c_formation);
      default:
        break;  // no closed form; fall through to the roof
    }
  }
  return roof_optimize(rho, m, cut, RoofMode::min, cfg).value;
}

double clamp_ratio(double num, double den) {
  if (den <= 1e-12) return 0.0;
  return std::clamp(num / den, 0.0, 1.0);
}

struct Marginals {
  DensityMatrix abc, ab, ac;
};

Marginals split_tripartite(const DensityMatrix& rho) {
  if (rho.dims.size() != 3) throw BadShape("expected dims [d_A, d_B, d_C]");
  Marginals out;
  out.abc = group_cut(rho, Cut{{0}, {1, 2}});
  out.ab = partial_trace(rho, {0, 1});
  out.ac = partial_trace(rho, {0, 2});
  return out;
}

}  // namespace

MeasureTriple make_evaluators(const MeasureId& m, const RoofConfig& cfg) {
  MeasureTriple t;
  const auto ev = [m, cfg](const DensityMatrix& rho) { return evaluate_bipartite(m, cfg, rho); };
  t.on_abc = t.on_ab = t.on_ac = ev;
  t.label = m.name();
  return t;
}

MeasureTriple make_negativity_evaluators() {
  MeasureTriple t;
  const auto ev = [](const DensityMatrix& rho) {
    if (rho.dims.size() != 2) throw BadShape("bipartite evaluator needs two factors");
    return negativity(rho, head_cut(2));
  };
  t.on_abc = t.on_ab = t.on_ac = ev;
  t.label = "negativity";
  return t;
}

MonogamyReport disentangling_check(const DensityMatrix& rho, const MeasureTriple& ev,
                                   double tolerance) {
  const Marginals parts = split_tripartite(rho);
  MonogamyReport rep;
  rep.tolerance = tolerance;
  rep.e_abc = ev.on_abc(parts.abc);
  rep.e_ab = ev.on_ab(parts.ab);
  rep.e_ac = ev.on_ac(parts.ac);
  rep.x1 = clamp_ratio(rep.e_ab, rep.e_abc);
  rep.x2 = clamp_ratio(rep.e_ac, rep.e_abc);
  try {
    rep.gamma = gamma_exponent(rep.x1, rep.x2);
  } catch (const NonMonogamousWitness&) {
    rep.gamma = 0.0;
    rep.gamma_defined = false;
  }
  rep.disentangling_satisfied = std::abs(rep.e_abc - rep.e_ab) <= tolerance * std::max(1.0, rep.e_abc);
  rep.monogamy_verdict = !rep.disentangling_satisfied || rep.e_ac <= tolerance;
  return rep;
}

double monogamy_deficit(const DensityMatrix& rho, const MeasureTriple& ev, double alpha) {
  if (alpha <= 0.0) throw OutOfRange("monogamy_deficit needs alpha > 0");
  const Marginals parts = split_tripartite(rho);
  return std::pow(ev.on_abc(parts.abc), alpha) - std::pow(ev.on_ab(parts.ab), alpha) -
         std::pow(ev.on_ac(parts.ac), alpha);
}

double gamma_exponent(double x1, double x2) {
  if (x1 < 0.0 || x1 > 1.0 || x2 < 0.0 || x2 > 1.0)
    throw OutOfRange("gamma_exponent ratios must lie in [0, 1]");
  const double lo_x = std::min(x1, x2), hi_x = std::max(x1, x2);
  if (hi_x >= 1.0) {
    if (lo_x > 0.0)
      throw NonMonogamousWitness("x1^g + x2^g > 1 for every exponent");
    return 0.0;  // {1, 0}: every exponent works; infimum sentinel
  }
  if (lo_x <= 0.0) return 0.0;  // {x, 0}, x < 1: no finite root; same sentinel

  const auto f = [&](double g) { return std::pow(x1, g) + std::pow(x2, g) - 1.0; };
  double hi = 1.0;
  while (f(hi) > 0.0) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ExponentScan exponent_scan(const Dims& dims, const MeasureTriple& ev, int n_samples,
                           std::uint64_t seed, bool include_special, int threads) {
  if (dims.size() != 3) throw BadShape("expected dims [d_A, d_B, d_C]");
  if (n_samples < 0) throw OutOfRange("n_samples must be nonnegative");

  struct Task {
    PureState psi;
    std::string label;
  };
  std::vector<Task> tasks;
  tasks.reserve(n_samples + 4);
  for (int i = 0; i < n_samples; ++i)
    tasks.push_back({sample_haar_pure(dims, derive_seed(seed, i)), "sample:" + std::to_string(i)});

  if (include_special) {
    const int d = dims_product(dims);
    const auto basis = [&](int i0, int i1, int i2) {
      ComplexVector v = ComplexVector::Zero(d);
      v[(i0 * dims[1] + i1) * dims[2] + i2] = 1.0;
      return v;
    };
    if (dims == Dims{2, 2, 2}) {
      PureState w;
      w.dims = dims;
      w.amplitudes = (basis(1, 0, 0) + basis(0, 1, 0) + basis(0, 0, 1)) / std::sqrt(3.0);
      tasks.push_back({std::move(w), "special:w"});
    }
    if (dims[0] >= 2 && dims[1] >= 2 && dims[2] >= 2) {
      PureState ghz;
      ghz.dims = dims;
      ghz.amplitudes = (basis(0, 0, 0) + basis(1, 1, 1)) / std::sqrt(2.0);
      tasks.push_back({std::move(ghz), "special:ghz"});
    }
    PureState prod;
    prod.dims = dims;
    prod.amplitudes = basis(0, 0, 0);
    tasks.push_back({std::move(prod), "special:product"});
    if (dims[0] >= 2 && dims[1] >= 2) {
      PureState bisep;
      bisep.dims = dims;
      bisep.amplitudes = (basis(0, 0, 0) + basis(1, 1, 0)) / std::sqrt(2.0);
      tasks.push_back({std::move(bisep), "special:biseparable"});
    }
  }

  struct Slot {
    double gamma = 0.0;
    bool skipped = false, witness = false;
  };
  std::vector<Slot> slots(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), threads, [&](int i) {
    DensityMatrix rho;
    rho.matrix = tasks[i].psi.amplitudes * tasks[i].psi.amplitudes.adjoint();
    rho.dims = dims;
    const Marginals parts = split_tripartite(rho);
    const double e_abc = ev.on_abc(parts.abc);
    if (e_abc < 1e-8) {
      slots[i].skipped = true;
      return;
    }
    const double x1 = clamp_ratio(ev.on_ab(parts.ab), e_abc);
    const double x2 = clamp_ratio(ev.on_ac(parts.ac), e_abc);
    try {
      slots[i].gamma = gamma_exponent(x1, x2);
    } catch (const NonMonogamousWitness&) {
      slots[i].witness = true;
    }
  });

  ExponentScan scan;
  int best = -1;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].skipped) {
      ++scan.skipped;
      continue;
    }
    ++scan.evaluated;
    if (slots[i].witness) {
      ++scan.witnesses;
      continue;
    }
    const auto bin = std::min<std::size_t>(
        static_cast<std::size_t>(std::floor(slots[i].gamma / scan.bin_width)), 10000);
    if (scan.histogram.size() <= bin) scan.histogram.resize(bin + 1, 0);
    ++scan.histogram[bin];
    if (best < 0 || slots[i].gamma > scan.alpha_hat) {
      best = static_cast<int>(i);
      scan.alpha_hat = slots[i].gamma;
    }
  }
  if (best >= 0) {
    scan.maximizer = tasks[best].psi;
    scan.maximizer_label = tasks[best].label;
  }
  return scan;
}

DensityMatrix markov_build(const MarkovSpec& spec) {
  const int n = static_cast<int>(spec.blocks.size());
  if (n < 1) throw BadSpec("markov_build needs at least one block");
  double qsum = 0.0;
  for (const auto& b : spec.blocks) {
    if (b.q < 0.0) throw BadSpec("negative block weight");
    qsum += b.q;
    if (b.ab.dims != Dims{spec.d_a, spec.d_bl}) throw BadShape("block AB factor has wrong dims");
    if (b.bc.dims != Dims{spec.d_br, spec.d_c}) throw BadShape("block BC factor has wrong dims");
    validate_density(b.ab);
    validate_density(b.bc);
  }
  if (std::abs(qsum - 1.0) > tol::trace) throw NotNormalized("block weights must sum to 1");

  const int dim = spec.d_a * spec.d_bl * n * spec.d_br * spec.d_c;
  DensityMatrix rho;
  rho.matrix = ComplexMatrix::Zero(dim, dim);
  rho.dims = {spec.d_a, spec.d_bl * n * spec.d_br, spec.d_c};
  for (int j = 0; j < n; ++j) {
    ComplexMatrix flag = ComplexMatrix::Zero(n, n);
    flag(j, j) = 1.0;
    rho.matrix += spec.blocks[j].q *
                  tensor(tensor(spec.blocks[j].ab.matrix, flag), spec.blocks[j].bc.matrix);
  }
  return rho;
}

double ssa_deficit(const DensityMatrix& rho) {
  if (rho.dims.size() != 3) throw BadShape("expected dims [d_A, d_B, d_C]");
  validate_density(rho);
  const double s_ab = von_neumann_entropy(partial_trace(rho, {0, 1}));
  const double s_bc = von_neumann_entropy(partial_trace(rho, {1, 2}));
  const double s_b = von_neumann_entropy(partial_trace(rho, {1}));
  const double s_abc = von_neumann_entropy(rho);
  return s_ab + s_bc - s_abc - s_b;
}

DensityMatrix flag_state(const std::vector<std::pair<double, DensityMatrix>>& ensemble) {
  const int n = static_cast<int>(ensemble.size());
  if (n < 1) throw BadSpec("flag_state needs at least one member");
  const Dims block_dims = ensemble[0].second.dims;
  if (block_dims.size() != 2) throw BadShape("flag_state members need dims [d_A, d_B]");
  double psum = 0.0;
  for (const auto& [p, sigma] : ensemble) {
    if (p < 0.0) throw BadSpec("negative ensemble weight");
    psum += p;
    if (sigma.dims != block_dims) throw BadShape("flag_state members disagree on dims");
    validate_density(sigma);
  }
  if (std::abs(psum - 1.0) > tol::trace) throw NotNormalized("ensemble weights must sum to 1");

  const int d = dims_product(block_dims);
  DensityMatrix rho;
  rho.matrix = ComplexMatrix::Zero(n * d, n * d);
  rho.dims = {n, block_dims[0], block_dims[1]};
  for (int j = 0; j < n; ++j)
    rho.matrix.block(j * d, j * d, d, d) = ensemble[j].first * ensemble[j].second.matrix;
  return rho;
}

}  // namespace qmono
