#include "sepspin/lattice_model.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sepspin {
namespace {

constexpr std::uint32_t kAbsent = std::numeric_limits<std::uint32_t>::max();
constexpr std::size_t kMaxSites = 64;

const Eigen::MatrixXd& axis(const CouplingTensor& c, char a) {
  return a == 'x' ? c.vx : (a == 'y' ? c.vy : c.vz);
}

}  // namespace

CouplingTensor chain_couplings(std::size_t n, double vx, double vy, double vz, Topology topology) {
  if (n < 2) throw std::invalid_argument("a chain needs at least two sites");
  if (topology == Topology::cyclic && n < 3) {
    throw std::invalid_argument("a cyclic chain needs at least three sites");
  }
  CouplingTensor c(n);
  const std::size_t bonds = topology == Topology::cyclic ? n : n - 1;
  for (std::size_t b = 0; b < bonds; ++b) {
    const std::size_t i = b;
    const std::size_t j = (b + 1) % n;
    c.vx(i, j) = c.vx(j, i) = vx;
    c.vy(i, j) = c.vy(j, i) = vy;
    c.vz(i, j) = c.vz(j, i) = vz;
  }
  return c;
}

std::vector<Diagnostic> validate(const ModelSpec& spec) {
  std::vector<Diagnostic> out;
  const std::size_t n = spec.size();
  auto report = [&](Diagnostic::Kind kind, char ax, std::size_t i, std::size_t j, std::string msg) {
    out.push_back(Diagnostic{kind, ax, i, j, std::move(msg)});
  };

  for (char a : {'x', 'y', 'z'}) {
    const auto& m = axis(spec.couplings, a);
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
      report(Diagnostic::Kind::size_mismatch, a, 0, 0,
             std::string("v") + a + " is not " + std::to_string(n) + "x" + std::to_string(n));
    }
  }
  if (static_cast<std::size_t>(spec.fields.size()) != n) {
    report(Diagnostic::Kind::size_mismatch, 'b', 0, 0, "field vector length differs from number of spins");
  }
  if (!out.empty()) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(spec.fields(i))) {
      report(Diagnostic::Kind::non_finite, 'b', i, i, "field at site " + std::to_string(i) + " is not finite");
    }
  }
  for (char a : {'x', 'y', 'z'}) {
    const auto& m = axis(spec.couplings, a);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(m(i, j))) {
          std::ostringstream msg;
          msg << 'v' << a << '(' << i << ',' << j << ") is not finite";
          report(Diagnostic::Kind::non_finite, a, i, j, msg.str());
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (m(i, j) != m(j, i)) {
          std::ostringstream msg;
          msg << 'v' << a << " is not symmetric at pair (" << i << ',' << j << "): " << m(i, j) << " vs " << m(j, i);
          report(Diagnostic::Kind::asymmetric, a, i, j, msg.str());
        }
      }
      if (m(i, i) != 0.0 && spec.spins[i].twice_s() < 2) {
        std::ostringstream msg;
        msg << 'v' << a << " self-energy at site " << i << " requires s >= 1";
        report(Diagnostic::Kind::self_energy, a, i, i, msg.str());
      }
    }
  }
  return out;
}

HamiltonianAction::HamiltonianAction(const ModelSpec& spec, std::optional<Parity> sector)
    : space_(spec.space()), sector_(sector) {
  const std::size_t n = spec.size();
  if (n > kMaxSites) throw std::invalid_argument("too many sites");
  if (static_cast<std::size_t>(spec.couplings.size()) != n || static_cast<std::size_t>(spec.fields.size()) != n) {
    throw std::invalid_argument("model members disagree on the number of sites");
  }
  const auto& c = spec.couplings;

  raise_.resize(n);
  std::vector<Eigen::MatrixXd> local(n);
  for (std::size_t i = 0; i < n; ++i) {
    const SpinValue s = spec.spins[i];
    for (int k = 0; k < s.twice_s(); ++k) raise_[i].push_back(raising_coefficient(s, k));
    const auto ops = spin_operators(s);
    const Eigen::MatrixXd sy2 = -0.25 * (ops.splus - ops.sminus) * (ops.splus - ops.sminus);
    local[i] = spec.fields(i) * ops.sz -
               0.5 * (c.vx(i, i) * ops.sx * ops.sx + c.vy(i, i) * sy2 + c.vz(i, i) * ops.sz * ops.sz);
    for (int a = 0; a < s.dim(); ++a) {
      for (int b = 0; b < s.dim(); ++b) {
        if (a != b && local[i](a, b) != 0.0) local_offdiag_.push_back({i, b, a, local[i](a, b)});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double flip = -0.25 * (c.vx(i, j) + c.vy(i, j));
      const double pump = -0.25 * (c.vx(i, j) - c.vy(i, j));
      if (flip != 0.0 || pump != 0.0) pairs_.push_back({i, j, flip, pump});
    }
  }

  if (sector_) {
    basis_ = parity_sector(space_, *sector_);
    if (space_.total_dim() > kAbsent) throw std::overflow_error("sector map exceeds 32-bit positions");
    position_.assign(space_.total_dim(), kAbsent);
    for (std::size_t r = 0; r < basis_.size(); ++r) position_[basis_[r]] = static_cast<std::uint32_t>(r);
  }

  std::vector<double> spin(n);
  for (std::size_t i = 0; i < n; ++i) spin[i] = spec.spins[i].s();
  const std::size_t d = dim();
  diagonal_.resize(d);
  std::array<int, kMaxSites> k{};
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t x = basis_.empty() ? r : basis_[r];
    space_.decode(x, std::span<int>(k.data(), n));
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) e += local[i](k[i], k[i]);
    for (std::size_t i = 0; i < n; ++i) {
      const double mi = k[i] - spin[i];
      for (std::size_t j = i + 1; j < n; ++j) {
        if (c.vz(i, j) != 0.0) e -= c.vz(i, j) * mi * (k[j] - spin[j]);
      }
    }
    diagonal_[r] = e;
  }
}

std::size_t HamiltonianAction::position(std::size_t full_index) const {
  return basis_.empty() ? full_index : position_[full_index];
}

void HamiltonianAction::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t d = dim();
  if (in.size() != d || out.size() != d) throw std::invalid_argument("vector length does not match operator dimension");
  const std::size_t n = space_.sites();
  const auto& strides = space_.strides();
  std::array<int, kMaxSites> k{};

  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t x = basis_.empty() ? r : basis_[r];
    space_.decode(x, std::span<int>(k.data(), n));
    double acc = diagonal_[r] * in[r];

    for (const auto& t : local_offdiag_) {
      if (k[t.site] != t.to) continue;
      const std::size_t y = x - static_cast<std::size_t>(t.to) * strides[t.site] +
                            static_cast<std::size_t>(t.from) * strides[t.site];
      acc += t.value * in[position(y)];
    }

    // H is real symmetric, so <x|H|y> equals the amplitude of |y> in H|x>.
    for (const auto& p : pairs_) {
      const int ki = k[p.i];
      const int kj = k[p.j];
      const auto& ri = raise_[p.i];
      const auto& rj = raise_[p.j];
      const std::size_t si = strides[p.i];
      const std::size_t sj = strides[p.j];
      const int top_i = static_cast<int>(ri.size());
      const int top_j = static_cast<int>(rj.size());
      if (p.flip != 0.0) {
        if (ki < top_i && kj > 0) acc += p.flip * ri[ki] * rj[kj - 1] * in[position(x + si - sj)];
        if (ki > 0 && kj < top_j) acc += p.flip * ri[ki - 1] * rj[kj] * in[position(x - si + sj)];
      }
      if (p.pump != 0.0) {
        if (ki < top_i && kj < top_j) acc += p.pump * ri[ki] * rj[kj] * in[position(x + si + sj)];
        if (ki > 0 && kj > 0) acc += p.pump * ri[ki - 1] * rj[kj - 1] * in[position(x - si - sj)];
      }
    }
    out[r] = acc;
  }
}

Eigen::VectorXd HamiltonianAction::apply(const Eigen::VectorXd& in) const {
  Eigen::VectorXd out(in.size());
  apply(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())),
        std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::VectorXd HamiltonianAction::embed(const Eigen::VectorXd& local) const {
  if (basis_.empty()) return local;
  Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space_.total_dim()));
  for (std::size_t r = 0; r < basis_.size(); ++r) full(static_cast<Eigen::Index>(basis_[r])) = local(static_cast<Eigen::Index>(r));
  return full;
}

Eigen::VectorXd apply_h(const ModelSpec& spec, const Eigen::VectorXd& psi) {
  if (static_cast<std::size_t>(psi.size()) != spec.space().total_dim()) {
    throw std::invalid_argument("state length " + std::to_string(psi.size()) + " does not match total dimension " +
                                std::to_string(spec.space().total_dim()));
  }
  return HamiltonianAction(spec).apply(psi);
}

Eigen::MatrixXd dense_h(const ModelSpec& spec, std::size_t cap) {
  const std::size_t d = spec.space().total_dim();
  if (d > cap) {
    throw std::length_error("dense Hamiltonian of dimension " + std::to_string(d) + " exceeds cap " + std::to_string(cap));
  }
  const HamiltonianAction action(spec);
  Eigen::MatrixXd h(d, d);
  Eigen::VectorXd unit = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t col = 0; col < d; ++col) {
    unit(static_cast<Eigen::Index>(col)) = 1.0;
    h.col(static_cast<Eigen::Index>(col)) = action.apply(unit);
    unit(static_cast<Eigen::Index>(col)) = 0.0;
  }
  return h;
}

std::vector<std::size_t> parity_sector(const HilbertSpace& space, Parity parity) {
  std::vector<std::size_t> out;
  out.reserve(space.total_dim() / 2 + 1);
  for (std::size_t x = 0; x < space.total_dim(); ++x) {
    if (space.parity(x) == parity) out.push_back(x);
  }
  return out;
}

Eigen::VectorXd parity_diagonal(const HilbertSpace& space) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(space.total_dim()));
  for (std::size_t x = 0; x < space.total_dim(); ++x) p(static_cast<Eigen::Index>(x)) = sign(space.parity(x));
  return p;
}

}  // namespace sepspin
