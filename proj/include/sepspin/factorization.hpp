#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sepspin/lattice_model.hpp"

namespace sepspin {

/// Raised when an angle set admits no separable eigenstate.
class SeparabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Below this |sin(theta_i)| the field condition at site i no longer fixes b^i.
inline constexpr double kSinEpsilon = 1e-9;

struct FactorizedSolution {
  std::vector<double> angles;
  double energy = 0.0;
  bool gs_certified = false;
  double overlap = 1.0;  // <-Theta|Theta> = prod cos^{2s_i}(theta_i)
};

/// v_y^{ij} = v_x^{ij} cos(theta_i) cos(theta_j) + v_z^{ij} sin(theta_i) sin(theta_j).
Eigen::MatrixXd derive_vy(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, std::span<const double> angles);

struct DerivedFields {
  Eigen::VectorXd fields;
  std::vector<bool> field_free;  // sin(theta_i) ~ 0: b^i is unconstrained and set to 0
};

/// Solves b^i sin(theta_i) = sum_j (s_j - delta_ij/2)(v_x^{ij} cos_i sin_j - v_z^{ij} sin_i cos_j).
///
/// Throws SeparabilityError when sin(theta_i) ~ 0 but the right-hand side does not
/// vanish within `tolerance` (scaled by the coupling magnitude at that site).
DerivedFields derive_fields(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, std::span<const double> angles,
                            std::span<const SpinValue> spins, double tolerance = 1e-9);

/// Factorized energy E_Theta; the spec is expected to satisfy both separability conditions.
double factorized_energy(const ModelSpec& spec, std::span<const double> angles);

/// |Theta> = tensor product of coherent_local(s_i, theta_i).
Eigen::VectorXd product_state(std::span<const SpinValue> spins, std::span<const double> angles);

/// prod_i cos^{2s_i}(theta_i).
double product_overlap(std::span<const SpinValue> spins, std::span<const double> angles);

struct ResidualReport {
  double energy = 0.0;             // E_Theta
  double residual = 0.0;           // ||H|Theta> - E|Theta>||
  double partner_residual = 0.0;   // same for |-Theta>
  double rayleigh = 0.0;           // <Theta|H|Theta>
  double partner_rayleigh = 0.0;   // <-Theta|H|-Theta>
};

ResidualReport eigen_residual(const ModelSpec& spec, std::span<const double> angles);

struct Certificate {
  bool certified = false;
  std::string reason;
};

/// Sufficient ground-state condition: |v_y^{ij}| <= v_x^{ij} for all i,j and theta_i in (0, pi).
Certificate gs_certificate(const ModelSpec& spec, std::span<const double> angles);

struct GaugedModel {
  ModelSpec spec;
  std::vector<double> angles;
};

/// pi rotation about z at the given sites: theta_i -> -theta_i, v_{x,y}^{ij} -> -v_{x,y}^{ij}
/// for pairs with exactly one rotated site.
GaugedModel apply_z_rotation(const ModelSpec& spec, std::span<const double> angles, const std::vector<std::size_t>& sites);

/// pi rotation about x at the given sites: theta_i -> pi - theta_i, b^i -> -b^i,
/// v_{y,z}^{ij} -> -v_{y,z}^{ij} for pairs with exactly one rotated site.
GaugedModel apply_x_rotation(const ModelSpec& spec, std::span<const double> angles, const std::vector<std::size_t>& sites);

/// z-rotates every site with a negative angle, e.g. mapping an antiferromagnetic
/// alternating-angle solution onto a ferromagnetic one that can be certified.
GaugedModel gauge_positive_angles(const ModelSpec& spec, std::span<const double> angles);

/// x-rotates every site with |theta| > pi/2 after wrapping into [-pi, pi], so that O_Theta >= 0.
GaugedModel canonicalize(const ModelSpec& spec, std::span<const double> angles);

/// Wraps into [-pi, pi] and folds |theta| > pi/2 via theta -> +-pi - theta.
std::vector<double> canonical_angles(std::span<const double> angles);

/// Derives v_y and b from (v_x, v_z, angles), returning the completed model and its solution.
struct Factorization {
  ModelSpec spec;
  FactorizedSolution solution;
  std::vector<bool> field_free;
};
Factorization factorize(std::vector<SpinValue> spins, const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz,
                        std::span<const double> angles);

struct UniformSolution {
  double theta = 0.0;
  double chi = 1.0;
  Eigen::MatrixXd vy;
  Eigen::VectorXd fields;
  double energy = 0.0;
  bool fields_arbitrary = false;  // theta = 0: any field keeps |0> an eigenstate
};

/// Common-angle solution: cos^2(theta) = chi, v_y = v_z + chi (v_x - v_z),
/// b^i = cos(theta) sum_j (v_x^{ij} - v_z^{ij})(s_j - delta_ij/2).
UniformSolution uniform_solution(const Eigen::MatrixXd& vx, const Eigen::MatrixXd& vz, double chi,
                                 std::span<const SpinValue> spins);

/// Same, inferring chi from given couplings; throws SeparabilityError on mixed ratios.
UniformSolution uniform_solution(const CouplingTensor& couplings, std::span<const SpinValue> spins,
                                 double ratio_tolerance = 1e-10);

/// -1/2 sum_{i,j} s_i [s_j (v_x + v_y - v_z)^{ij} + delta_ij v_z^{ii}].
double uniform_energy(const CouplingTensor& couplings, std::span<const SpinValue> spins);

struct OddField {
  double value;
};
struct FieldRatio {
  double eta;  // b_e / b_o
};

/// Two-angle solution of a first-neighbour XY chain (v_z = 0) on the curve b_e b_o = (2s)^2 v_x v_y.
/// Chain sites are labelled 1..n, so site 0 belongs to the odd sublattice.
struct AlternatingSolution {
  double theta_odd = 0.0;
  double theta_even = 0.0;
  double b_odd = 0.0;
  double b_even = 0.0;
  std::vector<double> angles;
  Eigen::VectorXd fields;
  CouplingTensor couplings;
};

AlternatingSolution alternating_solution(double vx, double vy, SpinValue s, std::size_t n, Topology topology,
                                         OddField b_odd);
AlternatingSolution alternating_solution(double vx, double vy, SpinValue s, std::size_t n, Topology topology,
                                         FieldRatio ratio);

/// True when site (0-based) sits on the odd sublattice of the 1-based chain numbering.
inline bool is_odd_site(std::size_t site) { return site % 2 == 0; }

}  // namespace sepspin
