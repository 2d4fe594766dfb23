#include "sepspin/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sepspin {
namespace {

void check_sizes(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, std::size_t n) {
  const auto nn = static_cast<Eigen::Index>(n);
  if (vx.rows() != nn || vx.cols() != nn || vz.rows() != nn || vz.cols() != nn) {
    throw std::invalid_argument("coupling matrices do not match the number of angles");
  }
}

double wrap_angle(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::remainder(theta, two_pi);  // [-pi, pi]
  return t;
}

}  // namespace

Eigen::MatrixXd derive_vy(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, std::span<const double> angles) {
  const std::size_t n = angles.size();
  check_sizes(vx, vz, n);
  Eigen::MatrixXd vy = Eigen::MatrixXd::Zero(vx.rows(), vx.cols());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (vx(ii, jj) == 0.0 && vz(ii, jj) == 0.0) continue;
      vy(ii, jj) = vx(ii, jj) * std::cos(angles[i]) * std::cos(angles[j]) +
                   vz(ii, jj) * std::sin(angles[i]) * std::sin(angles[j]);
    }
  }
  // symmetrize bit-exactly; the two orders differ only by rounding
  for (Eigen::Index i = 0; i < vy.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < vy.cols(); ++j) vy(j, i) = vy(i, j);
  }
  return vy;
}

DerivedFields derive_fields(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, std::span<const double> angles,
                            std::span<const SpinValue> spins, double tolerance) {
  const std::size_t n = angles.size();
  check_sizes(vx, vz, n);
  if (spins.size() != n) throw std::invalid_argument("spin count differs from angle count");

  DerivedFields out{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double ci = std::cos(angles[i]);
    const double si = std::sin(angles[i]);
    double rhs = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double weight = spins[j].s() - (i == j ? 0.5 : 0.0);
      rhs += weight * (vx(ii, jj) * ci * std::sin(angles[j]) - vz(ii, jj) * si * std::cos(angles[j]));
      scale += weight * (std::abs(vx(ii, jj)) + std::abs(vz(ii, jj)));
    }
    if (std::abs(si) > kSinEpsilon) {
      out.fields(ii) = rhs / si;
    } else {
      if (std::abs(rhs) > tolerance * std::max(1.0, scale)) {
        std::ostringstream msg;
        msg << "site " << i << " has sin(theta) ~ 0 but a non-vanishing field condition (" << rhs
            << "); no separable eigenstate with these angles";
        throw SeparabilityError(msg.str());
      }
      out.field_free[i] = true;
    }
  }
  return out;
}

double factorized_energy(const ModelSpec& spec, std::span<const double> angles) {
  const std::size_t n = spec.size();
  if (angles.size() != n) throw std::invalid_argument("angle count differs from number of spins");
  const auto& c = spec.couplings;
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double ci = std::cos(angles[i]);
    const double si = std::sin(angles[i]);
    double pair = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double weight = spec.spins[j].s() - (i == j ? 0.5 : 0.0);
      pair += weight * (c.vx(ii, jj) * si * std::sin(angles[j]) + c.vz(ii, jj) * ci * std::cos(angles[j]));
    }
    e -= spec.spins[i].s() *
         (spec.fields(ii) * ci + 0.5 * pair + 0.25 * (c.vx(ii, ii) + c.vy(ii, ii) + c.vz(ii, ii)));
  }
  return e;
}

Eigen::VectorXd product_state(std::span<const SpinValue> spins, std::span<const double> angles) {
  if (spins.size() != angles.size()) throw std::invalid_argument("spin count differs from angle count");
  std::vector<Eigen::VectorXd> factors;
  factors.reserve(spins.size());
  for (std::size_t i = 0; i < spins.size(); ++i) factors.push_back(coherent_local(spins[i], angles[i]));
  return kron_all(factors);
}

double product_overlap(std::span<const SpinValue> spins, std::span<const double> angles) {
  double o = 1.0;
  for (std::size_t i = 0; i < spins.size(); ++i) o *= std::pow(std::cos(angles[i]), spins[i].twice_s());
  return o;
}

ResidualReport eigen_residual(const ModelSpec& spec, std::span<const double> angles) {
  ResidualReport r;
  r.energy = factorized_energy(spec, angles);
  const HamiltonianAction h(spec);

  const Eigen::VectorXd plus = product_state(spec.spins, angles);
  std::vector<double> flipped(angles.begin(), angles.end());
  for (auto& t : flipped) t = -t;
  const Eigen::VectorXd minus = product_state(spec.spins, flipped);

  const Eigen::VectorXd hp = h.apply(plus);
  const Eigen::VectorXd hm = h.apply(minus);
  r.rayleigh = plus.dot(hp);
  r.partner_rayleigh = minus.dot(hm);
  r.residual = (hp - r.energy * plus).norm();
  r.partner_residual = (hm - r.energy * minus).norm();
  return r;
}

Certificate gs_certificate(const ModelSpec& spec, std::span<const double> angles) {
  const std::size_t n = spec.size();
  if (angles.size() != n) throw std::invalid_argument("angle count differs from number of spins");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(angles[i] > 0.0 && angles[i] < std::numbers::pi)) {
      std::ostringstream msg;
      msg << "angle at site " << i << " is " << angles[i] << ", outside (0, pi)";
      return {false, msg.str()};
    }
  }
  const auto& c = spec.couplings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      const double vx = c.vx(ii, jj);
      const double vy = c.vy(ii, jj);
      // rounding slack for vy computed from vx at the XXZ edge
      const double slack = 1e-12 * std::max(1.0, std::abs(vx));
      if (std::abs(vy) > vx + slack) {
        std::ostringstream msg;
        msg << "pair (" << i << ',' << j << ") has |vy| = " << std::abs(vy) << " > vx = " << vx;
        return {false, msg.str()};
      }
    }
  }
  return {true, "|vy| <= vx for all pairs and all angles in (0, pi)"};
}

GaugedModel apply_z_rotation(const ModelSpec& spec, std::span<const double> angles,
                             const std::vector<std::size_t>& sites) {
  GaugedModel g{spec, std::vector<double>(angles.begin(), angles.end())};
  const std::size_t n = spec.size();
  std::vector<bool> rotated(n, false);
  for (auto s : sites) {
    if (s >= n) throw std::out_of_range("rotation site out of range");
    rotated[s] = true;
    g.angles[s] = -g.angles[s];
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rotated[i] != rotated[j]) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        g.spec.couplings.vx(ii, jj) = -spec.couplings.vx(ii, jj);
        g.spec.couplings.vy(ii, jj) = -spec.couplings.vy(ii, jj);
      }
    }
  }
  return g;
}

GaugedModel apply_x_rotation(const ModelSpec& spec, std::span<const double> angles,
                             const std::vector<std::size_t>& sites) {
  GaugedModel g{spec, std::vector<double>(angles.begin(), angles.end())};
  const std::size_t n = spec.size();
  std::vector<bool> rotated(n, false);
  for (auto s : sites) {
    if (s >= n) throw std::out_of_range("rotation site out of range");
    rotated[s] = true;
    g.angles[s] = wrap_angle(std::numbers::pi - g.angles[s]);
    g.spec.fields(static_cast<Eigen::Index>(s)) = -spec.fields(static_cast<Eigen::Index>(s));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rotated[i] != rotated[j]) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        g.spec.couplings.vy(ii, jj) = -spec.couplings.vy(ii, jj);
        g.spec.couplings.vz(ii, jj) = -spec.couplings.vz(ii, jj);
      }
    }
  }
  return g;
}

GaugedModel gauge_positive_angles(const ModelSpec& spec, std::span<const double> angles) {
  std::vector<std::size_t> negative;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (angles[i] < 0.0) negative.push_back(i);
  }
  return apply_z_rotation(spec, angles, negative);
}

std::vector<double> canonical_angles(std::span<const double> angles) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (double t : angles) {
    double w = wrap_angle(t);
    if (w > 0.5 * std::numbers::pi) w = std::numbers::pi - w;
    else if (w < -0.5 * std::numbers::pi) w = -std::numbers::pi - w;
    out.push_back(w);
  }
  return out;
}

GaugedModel canonicalize(const ModelSpec& spec, std::span<const double> angles) {
  std::vector<double> wrapped;
  std::vector<std::size_t> fold;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    wrapped.push_back(wrap_angle(angles[i]));
    if (std::abs(wrapped.back()) > 0.5 * std::numbers::pi) fold.push_back(i);
  }
  GaugedModel g = apply_x_rotation(spec, wrapped, fold);
  // pi - theta lands in [-pi, pi]; map the folded angles to the nearer branch
  g.angles = canonical_angles(wrapped);
  return g;
}

Factorization factorize(std::vector<SpinValue> spins, const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz,
                        std::span<const double> angles) {
  Factorization f;
  f.spec = ModelSpec(std::move(spins));
  f.spec.couplings.vx = vx;
  f.spec.couplings.vz = vz;
  f.spec.couplings.vy = derive_vy(vx, vz, angles);
  auto derived = derive_fields(vx, vz, angles, f.spec.spins);
  f.spec.fields = derived.fields;
  f.field_free = std::move(derived.field_free);

  f.solution.angles.assign(angles.begin(), angles.end());
  f.solution.energy = factorized_energy(f.spec, angles);
  f.solution.overlap = product_overlap(f.spec.spins, angles);
  f.solution.gs_certified = gs_certificate(f.spec, angles).certified;
  return f;
}

UniformSolution uniform_solution(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, double chi,
                                 std::span<const SpinValue> spins) {
  if (!(chi >= 0.0 && chi <= 1.0)) throw SeparabilityError("uniform solution needs chi in [0, 1]");
  const std::size_t n = spins.size();
  check_sizes(vx, vz, n);

  UniformSolution u;
  u.chi = chi;
  u.theta = std::acos(std::sqrt(chi));
  u.fields_arbitrary = (chi == 1.0);
  u.vy = vz + chi * (vx - vz);
  const double c = std::sqrt(chi);
  u.fields = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      sum += (vx(ii, jj) - vz(ii, jj)) * (spins[j].s() - (i == j ? 0.5 : 0.0));
    }
    u.fields(static_cast<Eigen::Index>(i)) = c * sum;
  }
  CouplingTensor ct(n);
  ct.vx = vx;
  ct.vy = u.vy;
  ct.vz = vz;
  u.energy = uniform_energy(ct, spins);
  return u;
}

UniformSolution uniform_solution(const CouplingTensor& couplings, std::span<const SpinValue> spins,
                                 double ratio_tolerance) {
  const auto& c = couplings;
  const Eigen::Index n = c.vx.rows();
  bool have_ratio = false;
  double chi = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double anis = c.vx(i, j) - c.vz(i, j);
      const double scale = std::max({std::abs(c.vx(i, j)), std::abs(c.vz(i, j)), 1e-300});
      if (std::abs(anis) <= 1e-14 * scale) {
        if (std::abs(c.vy(i, j) - c.vx(i, j)) > ratio_tolerance * std::max(1.0, scale)) {
          std::ostringstream msg;
          msg << "isotropic pair (" << i << ',' << j << ") has vx = vz but vy != vx";
          throw SeparabilityError(msg.str());
        }
        continue;
      }
      const double r = (c.vy(i, j) - c.vz(i, j)) / anis;
      if (!have_ratio) {
        chi = r;
        have_ratio = true;
      } else if (std::abs(r - chi) > ratio_tolerance * std::max(1.0, std::abs(chi))) {
        std::ostringstream msg;
        msg << "pair (" << i << ',' << j << ") has ratio " << r << " but an earlier pair has " << chi
            << "; no common-angle solution";
        throw SeparabilityError(msg.str());
      }
    }
  }
  UniformSolution u = uniform_solution(c.vx, c.vz, chi, spins);
  u.vy = c.vy;
  u.energy = uniform_energy(c, spins);
  return u;
}

double uniform_energy(const CouplingTensor& c, std::span<const SpinValue> spins) {
  const std::size_t n = spins.size();
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      e += spins[i].s() * spins[j].s() * (c.vx(ii, jj) + c.vy(ii, jj) - c.vz(ii, jj));
    }
    e += spins[i].s() * c.vz(ii, ii);
  }
  return -0.5 * e;
}

namespace {

AlternatingSolution build_alternating(double vx, double vy, SpinValue s, std::size_t n, Topology topology,
                                      double b_odd, double b_even) {
  if (vx == 0.0) throw SeparabilityError("alternating solution needs vx != 0");
  const double chi = vy / vx;
  if (!(chi >= 0.0 && chi <= 1.0)) throw SeparabilityError("alternating solution needs vy/vx in [0, 1]");
  if (n < 2) throw SeparabilityError("alternating solution needs at least two sites");
  if (topology == Topology::cyclic && (n % 2 != 0 || n < 4)) {
    throw SeparabilityError("cyclic alternating solution needs an even number of sites (>= 4)");
  }
  if (!(b_odd >= 0.0 && b_even >= 0.0)) throw SeparabilityError("alternating fields must be non-negative");

  AlternatingSolution a;
  a.b_odd = b_odd;
  a.b_even = b_even;
  const double two_s = s.twice_s();
  auto cos2 = [&](double b) { return (b * b + two_s * two_s * vy * vy) / (b * b + two_s * two_s * vx * vx); };
  a.theta_odd = std::acos(std::sqrt(cos2(b_odd)));
  a.theta_even = std::acos(std::sqrt(cos2(b_even)));
  if (vx < 0.0) a.theta_even = -a.theta_even;

  a.couplings = chain_couplings(n, vx, vy, 0.0, topology);
  a.angles.resize(n);
  a.fields = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const bool odd = is_odd_site(i);
    a.angles[i] = odd ? a.theta_odd : a.theta_even;
    a.fields(static_cast<Eigen::Index>(i)) = odd ? b_odd : b_even;
  }
  if (topology == Topology::open) {
    a.fields(0) *= 0.5;
    a.fields(static_cast<Eigen::Index>(n - 1)) *= 0.5;
  }
  return a;
}

}  // namespace

AlternatingSolution alternating_solution(double vx, double vy, SpinValue s, std::size_t n, Topology topology,
                                         OddField b_odd) {
  if (!(b_odd.value > 0.0)) throw SeparabilityError("odd-site field must be positive");
  const double two_s = s.twice_s();
  const double b_even = two_s * two_s * vx * vy / b_odd.value;
  return build_alternating(vx, vy, s, n, topology, b_odd.value, b_even);
}

AlternatingSolution alternating_solution(double vx, double vy, SpinValue s, std::size_t n, Topology topology,
                                         FieldRatio ratio) {
  if (!(ratio.eta > 0.0)) throw SeparabilityError("field ratio b_e/b_o must be positive");
  if (vx * vy < 0.0) throw SeparabilityError("alternating solution needs vy/vx in [0, 1]");
  const double b_odd = s.twice_s() * std::sqrt(vx * vy / ratio.eta);
  return build_alternating(vx, vy, s, n, topology, b_odd, ratio.eta * b_odd);
}

}  // namespace sepspin
