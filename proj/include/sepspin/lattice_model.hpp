#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sepspin/spin_algebra.hpp"

namespace sepspin {

/// Symmetric per-axis couplings v_mu^{ij}; the diagonal holds self-energies.
struct CouplingTensor {
  CouplingTensor() = default;
  explicit CouplingTensor(std::size_t n)
      : vx(Eigen::MatrixXd::Zero(n, n)), vy(Eigen::MatrixXd::Zero(n, n)), vz(Eigen::MatrixXd::Zero(n, n)) {}

  std::size_t size() const { return static_cast<std::size_t>(vx.rows()); }

  Eigen::MatrixXd vx;
  Eigen::MatrixXd vy;
  Eigen::MatrixXd vz;
};

/// H = sum_i b^i s^z_i - 1/2 sum_{i,j} (v_x^{ij} s^x_i s^x_j + v_y^{ij} s^y_i s^y_j + v_z^{ij} s^z_i s^z_j)
struct ModelSpec {
  ModelSpec() = default;
  explicit ModelSpec(std::vector<SpinValue> spins_)
      : spins(std::move(spins_)), couplings(spins.size()), fields(Eigen::VectorXd::Zero(spins.size())) {}

  std::size_t size() const { return spins.size(); }
  HilbertSpace space() const { return HilbertSpace::of(spins); }

  std::vector<SpinValue> spins;
  CouplingTensor couplings;
  Eigen::VectorXd fields;
};

enum class Topology { open, cyclic };

/// First-neighbour chain couplings v_mu^{ij} = v_mu delta_{i,j+-1}.
CouplingTensor chain_couplings(std::size_t n, double vx, double vy, double vz, Topology topology);

struct Diagnostic {
  enum class Kind { size_mismatch, non_finite, asymmetric, self_energy };
  Kind kind;
  char axis = ' ';  // 'x', 'y', 'z', 'b' or ' '
  std::size_t i = 0;
  std::size_t j = 0;
  std::string message;
};

/// Structured list of violated invariants; empty when the model is valid.
std::vector<Diagnostic> validate(const ModelSpec& spec);

inline constexpr std::size_t kDenseCap = 4096;

/// Matrix-free action of H, optionally restricted to one parity sector.
///
/// Vectors passed to apply() are indexed by position in basis(): the full
/// product basis when no sector is chosen, otherwise the sorted list of
/// basis states carrying that parity. H never mixes sectors, so the
/// restricted action is exact.
class HamiltonianAction {
 public:
  explicit HamiltonianAction(const ModelSpec& spec, std::optional<Parity> sector = std::nullopt);

  std::size_t dim() const { return basis_.empty() ? space_.total_dim() : basis_.size(); }
  const HilbertSpace& space() const { return space_; }
  std::optional<Parity> sector() const { return sector_; }
  /// Full-space index of each position; empty means identity (no sector).
  const std::vector<std::size_t>& basis() const { return basis_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& in) const;

  /// Embeds a sector vector into the full product space.
  Eigen::VectorXd embed(const Eigen::VectorXd& local) const;

 private:
  struct PairTerm {
    std::size_t i, j;
    double flip;   // -(v_x + v_y)/4 multiplying s+s- + s-s+
    double pump;   // -(v_x - v_y)/4 multiplying s+s+ + s-s-
  };
  struct LocalTerm {
    std::size_t site;
    int from, to;
    double value;
  };

  std::size_t position(std::size_t full_index) const;

  HilbertSpace space_;
  std::optional<Parity> sector_;
  std::vector<std::size_t> basis_;
  std::vector<std::uint32_t> position_;
  std::vector<double> diagonal_;
  std::vector<PairTerm> pairs_;
  std::vector<LocalTerm> local_offdiag_;
  std::vector<std::vector<double>> raise_;  // per-site raising coefficients
};

Eigen::VectorXd apply_h(const ModelSpec& spec, const Eigen::VectorXd& psi);

/// Dense H; refuses total_dim above `cap`.
Eigen::MatrixXd dense_h(const ModelSpec& spec, std::size_t cap = kDenseCap);

/// Sorted basis indices with the requested parity.
std::vector<std::size_t> parity_sector(const HilbertSpace& space, Parity parity);

/// Dense diag((-1)^{sum k}).
Eigen::VectorXd parity_diagonal(const HilbertSpace& space);

}  // namespace sepspin
