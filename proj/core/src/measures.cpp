#include "qmono/measures.hpp"

#include "qmono/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qmono {

namespace {

constexpr double kLog2 = 0.6931471805599453;  // ln 2

double log2_safe(double x) { return std::log(x) / kLog2; }

void check_param(MeasureId::Kind kind, double p) {
  if (p <= 0.0 || p == 1.0)
    throw OutOfRange(std::string(kind == MeasureId::Kind::renyi ? "renyi" : "tsallis") +
                     " parameter must be positive and != 1");
}

}  // namespace

MeasureId MeasureId::renyi(double alpha) {
  check_param(Kind::renyi, alpha);
  return {Kind::renyi, alpha};
}

MeasureId MeasureId::tsallis(double q) {
  check_param(Kind::tsallis, q);
  return {Kind::tsallis, q};
}

std::string MeasureId::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::concurrence: return "concurrence";
    case Kind::g_concurrence: return "g_concurrence";
    case Kind::entropy: return "entropy";
    case Kind::renyi: os << "renyi:" << param; return os.str();
    case Kind::tsallis: os << "tsallis:" << param; return os.str();
  }
  return "?";
}

MeasureId MeasureId::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  if (head == "concurrence") return concurrence();
  if (head == "g_concurrence") return g_concurrence();
  if (head == "entropy") return entropy();
  if (head == "renyi" || head == "tsallis") {
    if (colon == std::string::npos)
      throw ParseError(head + " needs a parameter, e.g. " + head + ":2");
    double p = 0.0;
    try {
      p = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ParseError("bad numeric parameter in '" + text + "'");
    }
    return head == "renyi" ? renyi(p) : tsallis(p);
  }
  throw ParseError("unknown measure '" + text + "'");
}

std::pair<RealVector, double> schmidt_probs(const PureState& psi, const Cut& cut) {
  PureState grouped = group_cut(psi, cut);
  if (grouped.dims[0] > grouped.dims[1]) grouped = permute_subsystems(grouped, {1, 0});
  const auto form = bipartite_reshape(grouped);
  const double n2 = form.schmidt.squaredNorm();
  RealVector p = RealVector::Zero(form.schmidt.size());
  if (n2 > 0.0) p = form.schmidt.array().square() / n2;
  return {std::move(p), n2};
}

double pure_measure(const MeasureId& m, const PureState& psi, const Cut& cut) {
  auto [p, n2] = schmidt_probs(psi, cut);
  if (n2 <= 0.0) return 0.0;
  double acc = 0.0;
  switch (m.kind) {
    case MeasureId::Kind::g_concurrence: {
      // geometric mean of the d_A Schmidt probabilities, scaled by the squared
      // norm: degree-2 homogeneous, = |det X|^(2/d) on square cuts
      double prod = 1.0;
      for (double pi : p) prod *= pi;
      return prod <= 0.0 ? 0.0 : n2 * std::pow(prod, 1.0 / static_cast<double>(p.size()));
    }
    case MeasureId::Kind::concurrence:
      acc = 1.0 - p.squaredNorm();
      return std::sqrt(std::max(0.0, 2.0 * acc));
    case MeasureId::Kind::entropy:
      for (double pi : p)
        if (pi > 0.0) acc -= pi * log2_safe(pi);
      return acc;
    case MeasureId::Kind::renyi:
      for (double pi : p) acc += std::pow(pi, m.param);
      return log2_safe(acc) / (1.0 - m.param);
    case MeasureId::Kind::tsallis:
      for (double pi : p) acc += std::pow(pi, m.param);
      return (1.0 - acc) / (m.param - 1.0);
  }
  return 0.0;  // unreachable
}

double negativity(const DensityMatrix& rho, const Cut& cut) {
  DensityMatrix grouped = group_cut(rho, cut);
  const ComplexMatrix pt = partial_transpose(grouped, 1);
  return std::max(0.0, (trace_norm(pt) - 1.0) / 2.0);
}

WoottersRecord wootters_analysis(const DensityMatrix& rho) {
  if (rho.dims != Dims{2, 2} || rho.dim() != 4)
    throw BadShape("wootters_analysis expects a two-qubit state");

  ComplexMatrix yy(4, 4);  // sigma_y (x) sigma_y
  yy.setZero();
  yy(0, 3) = -1.0; yy(1, 2) = 1.0; yy(2, 1) = 1.0; yy(3, 0) = -1.0;

  // The lambdas are the singular values of B = sqrt(rho) YY sqrt(rho)^T:
  // B B^+ = sqrt(rho) rho_tilde sqrt(rho), so svd(B) = spec(R). Unlike
  // eigenvalues of rho rho_tilde, singular values carry no sqrt(eps) noise
  // near zero, which the rank test below depends on.
  const ComplexMatrix s = psd_sqrt(rho.matrix);
  const ComplexMatrix b = s * yy * s.transpose();
  Eigen::JacobiSVD<ComplexMatrix> svd(b);

  WoottersRecord rec;
  for (int i = 0; i < 4; ++i) rec.lambdas[i] = svd.singularValues()[i];
  rec.c_formation = std::max(0.0, rec.lambdas[0] - rec.lambdas[1] - rec.lambdas[2] - rec.lambdas[3]);
  rec.c_assistance = rec.lambdas[0] + rec.lambdas[1] + rec.lambdas[2] + rec.lambdas[3];
  if (rec.lambdas[0] > 0.0)
    for (double l : rec.lambdas) rec.r_rank += (l > tol::rank * rec.lambdas[0]) ? 1 : 0;
  return rec;
}

double eof_from_concurrence(double c) {
  if (c < -1e-12 || c > 1.0 + 1e-12) throw OutOfRange("concurrence must lie in [0,1]");
  c = std::clamp(c, 0.0, 1.0);
  const double x = (1.0 + std::sqrt(1.0 - c * c)) / 2.0;
  double h = 0.0;
  if (x > 0.0) h -= x * log2_safe(x);
  if (x < 1.0) h -= (1.0 - x) * log2_safe(1.0 - x);
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  auto eig = herm_eig(rho.matrix);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    const double l = eig.values[i];
    if (l < -tol::psd) throw NotPSD("entropy of a non-PSD matrix");
    if (l > 0.0) s -= l * log2_safe(l);
  }
  return s;
}

}  // namespace qmono
