#include "sepspin/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sepspin/factorization.hpp"

namespace sepspin {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double entropy_bits(double p) {
  return p > 0.0 ? -p * std::log2(p) : 0.0;
}

}  // namespace

double subsystem_overlap(std::span<const double> angles, std::span<const SpinValue> spins,
                         const SubsystemSelector& selector) {
  double o = 1.0;
  for (std::size_t i : selector) {
    if (i >= angles.size() || i >= spins.size()) throw std::out_of_range("selector site beyond system size");
    o *= std::pow(std::cos(angles[i]), spins[i].twice_s());
  }
  return o;
}

OverlapSet overlap_set(std::span<const double> angles, std::span<const SpinValue> spins, const SubsystemSelector& b,
                       const SubsystemSelector& c) {
  if (!b.disjoint(c)) throw std::invalid_argument("subsystems B and C must be disjoint");
  OverlapSet o;
  o.b = subsystem_overlap(angles, spins, b);
  o.c = subsystem_overlap(angles, spins, c);
  o.complement = subsystem_overlap(angles, spins, b.united(c).complement(angles.size()));
  o.total = product_overlap(spins, angles);
  return o;
}

double SchmidtWeights::weight(Parity state, Parity subsystem) const {
  if (state == Parity::even) return subsystem == Parity::even ? plus_aplus : plus_aminus;
  return subsystem == Parity::even ? minus_aplus : minus_aminus;
}

SchmidtWeights schmidt_weights(double o_a, double o_complement, double o_total) {
  if (o_total == -1.0) throw std::domain_error("Schmidt weights are undefined for O = -1");
  SchmidtWeights w;
  w.plus_aplus = (1.0 + o_a) * (1.0 + o_complement) / (2.0 * (1.0 + o_total));
  w.plus_aminus = (1.0 - o_a) * (1.0 - o_complement) / (2.0 * (1.0 + o_total));
  if (o_total == 1.0) {
    // |Theta^-> does not exist when |Theta> = |-Theta>
    w.minus_aplus = w.minus_aminus = kNaN;
  } else {
    w.minus_aplus = (1.0 + o_a) * (1.0 - o_complement) / (2.0 * (1.0 - o_total));
    w.minus_aminus = (1.0 - o_a) * (1.0 + o_complement) / (2.0 * (1.0 - o_total));
  }
  return w;
}

SidePair concurrence_limits(double o_b, double o_c, double o_complement, double o_total) {
  const double num = std::sqrt((1.0 - o_b * o_b) * (1.0 - o_c * o_c)) * o_complement;
  return {num / (1.0 + o_total), num / (1.0 - o_total)};
}

SidePair negativity_limits(double o_b, double o_c, double o_complement, double o_total) {
  const double o_a = o_b * o_c;
  const auto w = schmidt_weights(o_a, o_complement, o_total);
  const double core = (1.0 - o_b * o_b) * (1.0 - o_c * o_c) * o_complement;
  auto neg = [&](double p, double denom) { return 0.5 * (std::sqrt(p * p + core / (denom * denom)) - p); };
  return {neg(w.plus_aminus, 1.0 + o_total), neg(w.minus_aplus, 1.0 - o_total)};
}

double mixture_concurrence(double c_plus, double c_minus, double o_total) {
  const double half_split = 0.5 * (c_minus - c_plus);
  const double closed = c_minus * o_total / (1.0 + o_total);
  if (std::abs(half_split - closed) > 1e-10) {
    throw std::logic_error("mixture concurrence forms disagree; inputs are not from the same overlap set");
  }
  return closed;
}

Eigen::Matrix4d two_qubit_reduction(double o_b, double o_c, const SchmidtWeights& weights, Parity state) {
  auto q = [&](int pm, int nu) {
    const double denom = 2.0 * (1.0 + pm * o_b * o_c);
    if (denom <= 0.0) return 0.0;
    return (1.0 + nu * o_b) * (1.0 + pm * nu * o_c) / denom;
  };
  const double pa_plus = weights.weight(state, Parity::even);
  const double pa_minus = weights.weight(state, Parity::odd);
  const double qpp = q(+1, +1), qpm = q(+1, -1);
  const double qmp = q(-1, +1), qmm = q(-1, -1);

  Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
  rho(0, 0) = pa_plus * qpp;
  rho(3, 3) = pa_plus * qpm;
  rho(0, 3) = rho(3, 0) = pa_plus * std::sqrt(qpp * qpm);
  if (pa_minus > 0.0) {
    rho(1, 1) = pa_minus * qmp;
    rho(2, 2) = pa_minus * qmm;
    rho(1, 2) = rho(2, 1) = pa_minus * std::sqrt(qmp * qmm);
  }
  return rho;
}

XStateConcurrence x_state_concurrence(const Eigen::Matrix4d& rho) {
  XStateConcurrence c;
  c.parallel = 2.0 * (std::abs(rho(0, 3)) - std::sqrt(std::max(0.0, rho(1, 1) * rho(2, 2))));
  c.antiparallel = 2.0 * (std::abs(rho(1, 2)) - std::sqrt(std::max(0.0, rho(0, 0) * rho(3, 3))));
  c.value = std::max({c.parallel, c.antiparallel, 0.0});
  return c;
}

double magnetization_step(std::span<const double> angles, std::span<const SpinValue> spins, std::size_t site) {
  if (site >= angles.size()) throw std::out_of_range("site beyond system size");
  const double o = product_overlap(spins, angles);
  if (o == 0.0) return 0.0;
  if (o * o == 1.0) throw std::domain_error("magnetization step is undefined when O = 1 (|Theta^-> vanishes)");
  const double c = std::cos(angles[site]);
  if (c == 0.0) throw std::logic_error("cos(theta) = 0 with a non-zero overlap");
  const double s = std::sin(angles[site]);
  return 2.0 * spins[site].s() * s * s * o / (c * (1.0 - o * o));
}

MonogamyTerms monogamy_gap(double o_b, double o_c, double o_d, double o_rest, double o_total, Parity state) {
  auto pick = [&](SidePair p) { return state == Parity::even ? p.plus : p.minus; };
  const double c_bc = pick(concurrence_limits(o_b, o_c, o_d * o_rest, o_total));
  const double c_bd = pick(concurrence_limits(o_b, o_d, o_c * o_rest, o_total));
  const double c_bcd = pick(concurrence_limits(o_b, o_c * o_d, o_rest, o_total));
  MonogamyTerms t;
  t.lhs = c_bc * c_bc + c_bd * c_bd;
  const double oc2 = o_c * o_c;
  const double od2 = o_d * o_d;
  const double denom = 1.0 - oc2 * od2;
  const double bracket = denom > 0.0 ? 1.0 - (1.0 - oc2) * (1.0 - od2) / denom : 0.0;
  t.rhs = c_bcd * c_bcd * bracket;
  return t;
}

EntanglementLimits side_limits(const OverlapSet& o) {
  EntanglementLimits l;
  const auto c = concurrence_limits(o.b, o.c, o.complement, o.total);
  const auto n = negativity_limits(o.b, o.c, o.complement, o.total);
  l.c_plus = c.plus;
  l.c_minus = c.minus;
  l.n_plus = n.plus;
  l.n_minus = n.minus;
  l.c_zero = mixture_concurrence(c.plus, c.minus, o.total);
  return l;
}

EntanglementLimits side_limits(std::span<const double> angles, std::span<const SpinValue> spins,
                               const SubsystemSelector& b, const SubsystemSelector& c) {
  const auto canon = canonical_angles(angles);
  return side_limits(overlap_set(canon, spins, b, c));
}

double bipartition_entropy(double o_a, double o_complement, double o_total, Parity state) {
  const auto w = schmidt_weights(o_a, o_complement, o_total);
  return entropy_bits(w.weight(state, Parity::even)) + entropy_bits(w.weight(state, Parity::odd));
}

UniformLimits uniform_limits(double chi, int twice_s_total, int twice_s_b, int twice_s_c) {
  if (!(chi >= 0.0 && chi <= 1.0)) throw std::invalid_argument("chi must lie in [0, 1]");
  if (twice_s_b < 0 || twice_s_c < 0 || twice_s_b + twice_s_c > twice_s_total) {
    throw std::invalid_argument("subsystem spins exceed the total spin");
  }
  const double s_total = 0.5 * twice_s_total;
  const double s_b = 0.5 * twice_s_b;
  const double s_c = 0.5 * twice_s_c;

  OverlapSet o;
  o.b = std::pow(chi, s_b);
  o.c = std::pow(chi, s_c);
  o.complement = std::pow(chi, s_total - s_b - s_c);
  o.total = std::pow(chi, s_total);

  UniformLimits u;
  u.exact = side_limits(o);
  u.delta = 2.0 * s_total * (1.0 - chi);
  const double d = u.delta;
  const double h = std::exp(-0.5 * d);
  const double global = std::sqrt(s_b * d / s_total) * std::sqrt(1.0 - std::exp(-d));
  u.global_estimate = {global / (1.0 + h), global / (1.0 - h)};
  const double pair = (d / s_total) * std::sqrt(s_b * s_c) * h;
  u.pair_estimate = {pair / (1.0 + h), pair / (1.0 - h)};
  return u;
}

}  // namespace sepspin
