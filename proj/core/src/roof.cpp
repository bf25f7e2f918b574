#include "qmono/roof.hpp"

#include "qmono/linalg.hpp"
#include "qmono/parallel.hpp"
#include "qmono/sampling.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qmono {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kWeightFloor = 1e-14;  // members below this are dropped / skipped

ComplexMatrix qr_positive(const ComplexMatrix& m) {
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= std::conj(d) / std::abs(d);
  }
  return q;
}

// Contribution of one subnormalized member and its Wirtinger gradient dE/dy*.
// For every implemented measure E depends on y through H = X X^+ alone, so the
// gradient is vec(F X) with F = V diag(dE/dlambda) V^+, a matrix function of H
// (basis-independent, safe under eigenvalue degeneracy). `mu` smooths the
// C = 0 kink of the determinant-type measures during continuation.
struct Kernel {
  MeasureId id;
  int da = 2, db = 2;

  bool kinked() const {
    return id.kind == MeasureId::Kind::concurrence ||
           id.kind == MeasureId::Kind::g_concurrence;
  }

  double contrib(const ComplexVector& y, double mu) const {
    const ComplexMatrix x = vec_to_matrix(y, da, db);
    if (id.kind == MeasureId::Kind::concurrence) {
      const double t1 = x.squaredNorm();
      const double t2 = (x * x.adjoint()).squaredNorm();
      const double c2 = std::max(0.0, 2.0 * (t1 * t1 - t2));
      return std::sqrt(c2 + mu * mu) - mu;
    }
    const ComplexMatrix h = x * x.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return from_spectrum(es.eigenvalues(), mu);
  }

  double contrib_grad(const ComplexVector& y, double mu, ComplexVector& g) const {
    const ComplexMatrix x = vec_to_matrix(y, da, db);
    const ComplexMatrix h = x * x.adjoint();

    if (id.kind == MeasureId::Kind::concurrence) {
      const double t1 = h.trace().real();
      const double t2 = h.squaredNorm();
      const double c2 = std::max(0.0, 2.0 * (t1 * t1 - t2));
      const double s = std::sqrt(c2 + mu * mu);
      if (s <= 1e-300) {
        g.setZero(y.size());
        return 0.0;
      }
      const ComplexMatrix f = (2.0 / s) * (t1 * ComplexMatrix::Identity(da, da) - h);
      g = matrix_to_vec(f * x);
      return s - mu;
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const RealVector lam = es.eigenvalues();
    RealVector df(da);
    const double value = from_spectrum(lam, mu, &df);
    const ComplexMatrix f =
        es.eigenvectors() * df.asDiagonal() * es.eigenvectors().adjoint();
    g = matrix_to_vec(f * x);
    return value;
  }

 private:
  // E from the (unnormalized, ascending) eigenvalues of H; optionally the
  // per-eigenvalue derivative.
  double from_spectrum(const RealVector& lam_in, double mu, RealVector* df = nullptr) const {
    const int n = static_cast<int>(lam_in.size());
    RealVector lam = lam_in.cwiseMax(0.0);
    const double p = lam.sum();
    if (df) df->setZero(n);
    if (p <= 1e-300) return 0.0;

    switch (id.kind) {
      case MeasureId::Kind::g_concurrence: {
        double invd = 1.0 / da;
        double det = 1.0;
        for (int i = 0; i < n; ++i) det *= lam[i] + mu;
        const double e = std::pow(det, invd);
        if (df)
          for (int i = 0; i < n; ++i) (*df)[i] = e * invd / (lam[i] + mu);
        return e - mu;
      }
      case MeasureId::Kind::entropy: {
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
          const double l = std::max(lam[i], 1e-18 * p);
          e += lam[i] * std::log(p / l) / kLn2;
          if (df) (*df)[i] = std::log(p / l) / kLn2;
        }
        return e;
      }
      case MeasureId::Kind::renyi: {
        const double a = id.param;
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += std::pow(std::max(lam[i], 1e-18 * p), a);
        const double e = p / (1.0 - a) * (std::log(t) - a * std::log(p)) / kLn2;
        if (df)
          for (int i = 0; i < n; ++i) {
            const double l = std::max(lam[i], 1e-18 * p);
            (*df)[i] = e / p + a / ((1.0 - a) * kLn2) * (p * std::pow(l, a - 1.0) / t - 1.0);
          }
        return e;
      }
      case MeasureId::Kind::tsallis: {
        const double q = id.param;
        double t = 0.0;
        for (int i = 0; i < n; ++i) t += std::pow(std::max(lam[i], 1e-18 * p), q);
        const double e = (p - std::pow(p, 1.0 - q) * t) / (q - 1.0);
        if (df)
          for (int i = 0; i < n; ++i) {
            const double l = std::max(lam[i], 1e-18 * p);
            (*df)[i] = (1.0 - (1.0 - q) * std::pow(p, -q) * t -
                        q * std::pow(p, 1.0 - q) * std::pow(l, q - 1.0)) /
                       (q - 1.0);
          }
        return e;
      }
      case MeasureId::Kind::concurrence:
        break;  // handled by the moment fast path
    }
    return 0.0;
  }
};

// Objective F(U) = sign * sum_k contrib(y_k), y_k = sum_j U_kj w_j.
struct Objective {
  const Kernel& kernel;
  const ComplexMatrix& roots;  // dim x r, orthogonal columns
  double sign;

  double value(const ComplexMatrix& u, double mu) const {
    const ComplexMatrix y = roots * u.transpose();
    double total = 0.0;
    for (Eigen::Index k = 0; k < y.cols(); ++k) total += kernel.contrib(y.col(k), mu);
    return sign * total;
  }

  double value_grad(const ComplexMatrix& u, double mu, ComplexMatrix& grad) const {
    const ComplexMatrix y = roots * u.transpose();
    grad.resize(u.rows(), u.cols());
    double total = 0.0;
    ComplexVector g;
    for (Eigen::Index k = 0; k < y.cols(); ++k) {
      total += kernel.contrib_grad(y.col(k), mu, g);
      grad.row(k) = (roots.adjoint() * g).transpose();
    }
    grad *= sign;
    return sign * total;
  }
};

// Gradient descent on the Stiefel manifold with QR retraction,
// Barzilai-Borwein steps, and a nonmonotone backtracking line search
// (10-iterate reference window). Plain Armijo steps collapse once the
// smoothed objective's curvature grows like 1/mu near a kink; the BB step
// keeps the rate usable there. Returns the iteration count consumed.
int riemannian_descent(const Objective& obj, ComplexMatrix& u, double mu, int max_iter,
                       double gtol) {
  const auto project = [](const ComplexMatrix& p, const ComplexMatrix& g) {
    const ComplexMatrix ptg = p.adjoint() * g;
    return ComplexMatrix(g - p * ((ptg + ptg.adjoint()) / 2.0));
  };

  ComplexMatrix grad;
  double f = obj.value_grad(u, mu, grad);
  ComplexMatrix xi = project(u, grad);
  ComplexMatrix prev_u, prev_xi;

  std::array<double, 10> window;
  window.fill(f);
  int slot = 0;
  double t = 1e-2;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double gn2 = xi.squaredNorm();
    if (gn2 <= gtol * gtol) break;

    if (it > 0) {
      const ComplexMatrix s = u - prev_u;
      const ComplexMatrix d = xi - prev_xi;
      const double sy = s.cwiseProduct(d.conjugate()).sum().real();
      t = std::abs(sy) > 1e-300 ? std::clamp(std::abs(s.squaredNorm() / sy), 1e-12, 1e3)
                                : 1e-2;
    }

    const double fref = *std::max_element(window.begin(), window.end());
    bool accepted = false;
    ComplexMatrix u2, grad2;
    double f2 = 0.0;
    for (int bt = 0; bt < 25; ++bt) {
      u2 = qr_positive(u - t * xi);
      f2 = obj.value_grad(u2, mu, grad2);
      if (f2 <= fref - 1e-4 * t * gn2) {
        accepted = true;
        break;
      }
      t *= 0.3;
    }
    if (!accepted) break;

    prev_u = std::move(u);
    prev_xi = std::move(xi);
    u = std::move(u2);
    grad = std::move(grad2);
    f = f2;
    xi = project(u, grad);
    slot = (slot + 1) % static_cast<int>(window.size());
    window[slot] = f;
  }
  return it;
}

// One golden-section pass on [lo, hi].
template <typename F>
double golden_min(const F& fn, double lo, double hi, int iters = 28) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  return fc < fd ? c : d;
}

// Derivative-free 2x2 rotation of a member pair: coarse angle/phase grid plus
// golden refinement; applied only on improvement. Escapes the plateaus the
// gradient cannot see (zero members, C = 0 kinks).
void optimize_pair(const Kernel& kernel, double sign, ComplexMatrix& y, int k, int l) {
  const ComplexVector yk = y.col(k), yl = y.col(l);
  const auto pair_value = [&](double th, double ph) {
    const Complex e{std::cos(ph), std::sin(ph)};
    const double c = std::cos(th), s = std::sin(th);
    return sign * (kernel.contrib(c * yk + e * s * yl, 0.0) +
                   kernel.contrib(-std::conj(e) * s * yk + c * yl, 0.0));
  };
  const double base = pair_value(0.0, 0.0);

  constexpr double kPi = std::numbers::pi;
  double best = base, best_th = 0.0, best_ph = 0.0;
  for (int it = 1; it <= 8; ++it) {
    const double th = -kPi / 4.0 + kPi / 2.0 * it / 9.0;
    for (int ip = 0; ip < 4; ++ip) {
      const double ph = kPi / 2.0 * ip;
      const double v = pair_value(th, ph);
      if (v < best) { best = v; best_th = th; best_ph = ph; }
    }
  }
  if (best >= base) return;  // grid found nothing; refinement cannot rescue it
  const double span_th = kPi / 18.0, span_ph = kPi / 4.0;
  best_th = golden_min([&](double t) { return pair_value(t, best_ph); },
                       best_th - span_th, best_th + span_th);
  best_ph = golden_min([&](double p) { return pair_value(best_th, p); },
                       best_ph - span_ph, best_ph + span_ph);
  best_th = golden_min([&](double t) { return pair_value(t, best_ph); },
                       best_th - span_th / 4.0, best_th + span_th / 4.0);
  if (pair_value(best_th, best_ph) >= base) return;

  const Complex e{std::cos(best_ph), std::sin(best_ph)};
  const double c = std::cos(best_th), s = std::sin(best_th);
  y.col(k) = c * yk + e * s * yl;
  y.col(l) = -std::conj(e) * s * yk + c * yl;
}

void pair_sweep(const Kernel& kernel, double sign, ComplexMatrix& y) {
  const int m = static_cast<int>(y.cols());
  // replenish zero slots from the heaviest member so every pair has a usable
  // search direction (a parallel split is value-neutral)
  for (int k = 0; k < m; ++k) {
    if (y.col(k).squaredNorm() >= kWeightFloor) continue;
    int big = 0;
    double bn = -1.0;
    for (int j = 0; j < m; ++j) {
      const double n = y.col(j).squaredNorm();
      if (n > bn) { bn = n; big = j; }
    }
    if (big == k || bn < kWeightFloor) continue;
    const double th = 0.3, c = std::cos(th), s = std::sin(th);
    const ComplexVector a = c * y.col(big) + s * y.col(k);
    const ComplexVector b = -s * y.col(big) + c * y.col(k);
    y.col(big) = a;
    y.col(k) = b;
  }
  for (int k = 0; k < m; ++k)
    for (int l = k + 1; l < m; ++l) optimize_pair(kernel, sign, y, k, l);
}

struct RestartOutcome {
  double value = 0.0;
  ComplexMatrix y;
  bool converged = false;
};

RestartOutcome run_restart(const Kernel& kernel, const ComplexMatrix& roots, RoofMode mode,
                           const RoofConfig& cfg, int restart_index) {
  const int r = static_cast<int>(roots.cols());
  const int m = cfg.ensemble_size > 0 ? std::max(cfg.ensemble_size, r) : r * r;
  const double sign = mode == RoofMode::min ? 1.0 : -1.0;
  const Objective obj{kernel, roots, sign};

  ComplexMatrix u;
  if (restart_index == 0) {
    u = ComplexMatrix::Zero(m, r);
    u.topLeftCorner(r, r).setIdentity();
  } else {
    u = sample_isometry(m, r, derive_seed(cfg.seed, static_cast<std::uint64_t>(restart_index)));
  }

  // continuation schedule: smooth the kink for min mode, exact elsewhere
  std::vector<double> mus;
  if (mode == RoofMode::min && kernel.kinked())
    mus = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 0.0};
  else
    mus = {0.0};

  const RealVector root_n2 = roots.colwise().squaredNorm().real();
  const double gtol = std::max(cfg.step_tolerance * 1e-2, 1e-14);
  constexpr int kMaxRounds = 12;
  int budget = cfg.max_iterations;
  double prev = std::numeric_limits<double>::quiet_NaN();
  RestartOutcome out;

  for (int round = 0; round < kMaxRounds && budget > 0; ++round) {
    ComplexMatrix y = roots * u.transpose();
    pair_sweep(kernel, sign, y);
    // recover the isometry from the swept members (roots are orthogonal)
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < r; ++j)
        u(k, j) = (roots.col(j).dot(y.col(k))) / root_n2[j];
    u = qr_positive(u);

    // smoothed rounds only position the basin: cap their cost and loosen the
    // gradient target so the exact rounds keep most of the budget
    const double mu = mus[std::min<std::size_t>(round, mus.size() - 1)];
    const int cap = mu > 0.0 ? std::min(budget, 250) : budget;
    const double round_gtol = mu > 0.0 ? std::max(gtol, 1e-6) : gtol;
    budget -= riemannian_descent(obj, u, mu, cap, round_gtol);

    if (mu == 0.0) {
      const double f = obj.value(u, 0.0);
      if (mode == RoofMode::min && f < 1e-12) { out.converged = true; break; }
      if (!std::isnan(prev) && std::abs(f - prev) < cfg.value_tolerance) {
        out.converged = true;
        break;
      }
      prev = f;
    }
  }

  out.y = roots * u.transpose();
  out.value = 0.0;
  for (Eigen::Index k = 0; k < out.y.cols(); ++k) out.value += kernel.contrib(out.y.col(k), 0.0);
  return out;
}

}  // namespace

Decomposition apply_isometry(const Decomposition& roots, const ComplexMatrix& u) {
  const int r = static_cast<int>(roots.size());
  if (r == 0) throw BadShape("empty decomposition");
  if (u.cols() != r) throw NotIsometry("isometry has " + std::to_string(u.cols()) +
                                       " columns for " + std::to_string(r) + " vectors");
  if ((u.adjoint() * u - ComplexMatrix::Identity(r, r)).norm() > 1e-10)
    throw NotIsometry("u^+ u differs from the identity");
  Decomposition out;
  out.vectors.reserve(u.rows());
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    PureState v;
    v.dims = roots.vectors[0].dims;
    v.subnormalized = true;
    v.amplitudes = ComplexVector::Zero(roots.vectors[0].dim());
    for (int j = 0; j < r; ++j) v.amplitudes += u(k, j) * roots.vectors[j].amplitudes;
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double decomposition_average(const MeasureId& m, const Decomposition& dec, const Cut& cut) {
  double avg = 0.0;
  for (const auto& w : dec.vectors) {
    const double p = w.norm2();
    if (p < kWeightFloor) continue;
    if (m.kind == MeasureId::Kind::g_concurrence) {
      avg += pure_measure(m, w, cut);  // degree-2 homogeneous already
    } else {
      PureState n = w;
      n.amplitudes /= std::sqrt(p);
      n.subnormalized = false;
      avg += p * pure_measure(m, n, cut);
    }
  }
  return avg;
}

RoofResult roof_optimize(const DensityMatrix& rho, const MeasureId& m, const Cut& cut,
                         RoofMode mode, const RoofConfig& cfg) {
  validate_density(rho);
  auto [dl, dr] = cut_dims(rho.dims, cut);

  // orient the working copy so d_A <= d_B; remember how to undo the reorder
  std::vector<int> order(cut.left);
  int da = dl, db = dr;
  if (dl <= dr) {
    order.insert(order.end(), cut.right.begin(), cut.right.end());
  } else {
    order = cut.right;
    order.insert(order.end(), cut.left.begin(), cut.left.end());
    std::swap(da, db);
  }
  const DensityMatrix work = permute_subsystems(rho, order);
  std::vector<int> inverse(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) inverse[order[k]] = static_cast<int>(k);

  const auto eig = herm_eig(work.matrix);
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] > 1e-12) ++rank;
  if (rank == 0) throw NotPSD("state has no positive spectrum");

  ComplexMatrix roots(work.dim(), rank);
  for (int j = 0; j < rank; ++j)
    roots.col(j) = std::sqrt(eig.values[j]) * eig.vectors.col(j);

  const Kernel kernel{m, da, db};
  const int restarts = std::max(1, cfg.restarts);
  std::vector<RestartOutcome> outcomes(restarts);

  if (rank == 1) {
    outcomes.resize(1);
    outcomes[0].y = roots;
    outcomes[0].value = kernel.contrib(roots.col(0), 0.0);
    outcomes[0].converged = true;
  } else {
    parallel_for(restarts, resolve_threads(cfg.threads),
                 [&](int i) { outcomes[i] = run_restart(kernel, roots, mode, cfg, i); });
  }

  int best = 0;
  for (int i = 1; i < static_cast<int>(outcomes.size()); ++i) {
    const bool better = mode == RoofMode::min ? outcomes[i].value < outcomes[best].value
                                              : outcomes[i].value > outcomes[best].value;
    if (better) best = i;
  }

  RoofResult res;
  res.mode = mode;
  res.value = outcomes[best].value;
  res.converged = outcomes[best].converged;
  res.restarts_used = static_cast<int>(outcomes.size());
  const ComplexMatrix& y = outcomes[best].y;
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    if (y.col(k).squaredNorm() < kWeightFloor) continue;
    PureState member;
    member.amplitudes = y.col(k);
    member.dims = work.dims;
    member.subnormalized = true;
    res.decomposition.vectors.push_back(permute_subsystems(member, inverse));
  }
  return res;
}

InvarianceScan invariance_scan(const DensityMatrix& rho, const MeasureId& m, const Cut& cut,
                               int samples, std::uint64_t seed) {
  if (samples < 1) throw OutOfRange("invariance_scan needs samples >= 1");
  validate_density(rho);
  const auto eig = herm_eig(rho.matrix);
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] > 1e-12) ++rank;

  Decomposition spectral;
  for (int j = 0; j < rank; ++j) {
    PureState w;
    w.amplitudes = std::sqrt(eig.values[j]) * eig.vectors.col(j);
    w.dims = rho.dims;
    w.subnormalized = true;
    spectral.vectors.push_back(std::move(w));
  }

  InvarianceScan scan;
  scan.min_avg = scan.max_avg = decomposition_average(m, spectral, cut);
  const int span = rank * rank - rank + 1;
  for (int i = 0; i < samples; ++i) {
    const int size = rank + (span > 0 ? i % span : 0);
    const ComplexMatrix u = sample_isometry(size, rank, derive_seed(seed, i));
    const double avg = decomposition_average(m, apply_isometry(spectral, u), cut);
    scan.min_avg = std::min(scan.min_avg, avg);
    scan.max_avg = std::max(scan.max_avg, avg);
  }
  scan.spread = scan.max_avg - scan.min_avg;
  return scan;
}

}  // namespace qmono
