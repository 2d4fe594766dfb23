#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sepspin/lattice_model.hpp"
#include "sepspin/subsystem.hpp"

namespace sepspin {

/// Default refusal threshold for state-vector work.
inline constexpr std::size_t kMaxStateDim = std::size_t{1} << 24;

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

struct LanczosOptions {
  double tol = 1e-10;            // on ||H v - E v||
  int max_iter = 5000;           // total matrix-vector products
  int krylov_dim = 160;          // basis size before an explicit restart
  std::uint64_t seed = 20240611;
  std::size_t max_dim = kMaxStateDim;
};

struct SectorGroundState {
  Parity parity = Parity::even;
  double energy = 0.0;
  Eigen::VectorXd vector;   // full product space, zero outside the sector
  double residual = 0.0;
  int iterations = 0;
  double next_ritz = 0.0;   // second Ritz value of the final Krylov space (NaN if unavailable)
  bool near_degenerate = false;
};

/// Lowest eigenpair of H restricted to a parity sector. Lanczos with full
/// reorthogonalization and explicit restarts from the current Ritz vector;
/// the random start vector is fixed by `seed`.
SectorGroundState ground_state(const ModelSpec& spec, Parity parity, const LanczosOptions& options = {});

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, empty unless requested
};

Spectrum full_spectrum(const ModelSpec& spec, bool with_vectors = false, std::size_t cap = kDenseCap);

/// Number of eigenvalues within `tol` of `energy`.
std::size_t multiplicity(const Spectrum& spectrum, double energy, double tol = 1e-9);

struct ReducedDensity {
  SubsystemSelector subsystem;
  std::vector<int> local_dims;  // per selected site, in selector order
  Eigen::MatrixXd matrix;       // site subsystem.sites()[0] slowest
};

struct WeightedState {
  double weight;
  std::span<const double> amplitudes;
};

/// Partial trace over the complement of `selector` of sum_k w_k |psi_k><psi_k|.
ReducedDensity reduced_density(const HilbertSpace& space, std::span<const WeightedState> states,
                               const SubsystemSelector& selector);
ReducedDensity reduced_density(const HilbertSpace& space, const Eigen::VectorXd& state,
                               const SubsystemSelector& selector);

/// rho^{T_B} for B a subset of rho's sites.
Eigen::MatrixXd partial_transpose(const ReducedDensity& rho, const SubsystemSelector& transposed);

/// |sum of negative eigenvalues of rho^{T_B}|; cross-checked against (||rho^{T_B}||_1 - 1)/2.
double negativity(const ReducedDensity& rho, const SubsystemSelector& transposed);

struct EntanglementMeasures {
  double entropy_bits = 0.0;
  double global_concurrence = 0.0;  // sqrt(2 (1 - tr rho^2))
  double purity = 1.0;
};

EntanglementMeasures entanglement_measures(const ReducedDensity& rho);

/// Mixed-state concurrence of a two-qubit density (both local dimensions 2).
double wootters_concurrence(const ReducedDensity& rho);
double wootters_concurrence(const Eigen::Matrix4d& rho);

/// <psi|s^z_i|psi> and sum_i of the same.
double expectation_sz(const HilbertSpace& space, const Eigen::VectorXd& state, std::size_t site);
double total_magnetization(const HilbertSpace& space, const Eigen::VectorXd& state);

struct ScanPoint {
  double scale = 0.0;
  double e_even = 0.0;
  double e_odd = 0.0;
};

struct TransitionScan {
  std::vector<ScanPoint> points;
  std::vector<double> crossings;         // refined scales where E_even = E_odd
  std::vector<Parity> interval_parity;   // ground-state parity before, between and after crossings
};

struct ScanOptions {
  LanczosOptions lanczos;
  double relative_width = 1e-8;          // bisection stop
  double degeneracy_threshold = 1e-10;   // |E_even - E_odd| treated as zero
};

/// Sector ground energies over an increasing grid of scale factors; each sign
/// change of E_even - E_odd is refined by bisection.
TransitionScan parity_transition_scan(const std::function<ModelSpec(double)>& model_at,
                                      std::span<const double> grid, const ScanOptions& options = {});

}  // namespace sepspin
