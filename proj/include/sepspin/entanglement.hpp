#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "sepspin/spin_algebra.hpp"
#include "sepspin/subsystem.hpp"

namespace sepspin {

// Closed-form entanglement of the definite-parity states
//   |Theta^+-> = (|Theta> +- |-Theta>) / sqrt(2 (1 +- O)),
// expressed through overlaps O_X = <-Theta_X|Theta_X> = prod_{i in X} cos^{2 s_i} theta_i.
// Angles are assumed canonical (|theta_i| <= pi/2), so every overlap lies in [0, 1].

/// prod_{i in selector} cos^{2 s_i}(theta_i); 1 for an empty selector.
double subsystem_overlap(std::span<const double> angles, std::span<const SpinValue> spins,
                         const SubsystemSelector& selector);

struct OverlapSet {
  double b = 1.0;           // O_B
  double c = 1.0;           // O_C
  double complement = 1.0;  // O of everything outside B u C
  double total = 1.0;       // O_Theta
};

/// Overlaps for disjoint subsystems B and C; throws if they intersect.
OverlapSet overlap_set(std::span<const double> angles, std::span<const SpinValue> spins, const SubsystemSelector& b,
                       const SubsystemSelector& c);

/// Schmidt weights p^{+-}_{A^nu} = (1 + nu O_A)(1 +- nu O_comp) / (2 (1 +- O)).
struct SchmidtWeights {
  double plus_aplus = 0.5;
  double plus_aminus = 0.5;
  double minus_aplus = 0.5;
  double minus_aminus = 0.5;

  double weight(Parity state, Parity subsystem) const;
};

SchmidtWeights schmidt_weights(double o_a, double o_complement, double o_total);

struct SidePair {
  double plus = 0.0;   // limit in |Theta^+>
  double minus = 0.0;  // limit in |Theta^->
};

/// C^{+-}_{BC} = sqrt((1 - O_B^2)(1 - O_C^2)) O_comp / (1 +- O). C^+ is of parallel
/// type, C^- antiparallel. With O_comp = 1 this is the global concurrence of (B, C).
SidePair concurrence_limits(double o_b, double o_c, double o_complement, double o_total);

/// N^{+-}_{BC} = 1/2 [sqrt(p^2 + (C^{+-})^2 / O_comp) - p], p = p^{+-}_{A^{-+}}, A = B u C.
/// (C^{+-})^2 / O_comp is evaluated as (1-O_B^2)(1-O_C^2) O_comp / (1 +- O)^2.
SidePair negativity_limits(double o_b, double o_c, double o_complement, double o_total);

/// C^0 = (C^- - C^+)/2 = C^- O / (1 + O), the concurrence in the equal mixture of
/// both parity states. Throws std::logic_error if the two forms disagree beyond 1e-10.
double mixture_concurrence(double c_plus, double c_minus, double o_total);

/// Reduced state of A = B u C in the basis |Theta_B^nu>|Theta_C^nu'>, ordered (++, +-, -+, --).
Eigen::Matrix4d two_qubit_reduction(double o_b, double o_c, const SchmidtWeights& weights, Parity state);

struct XStateConcurrence {
  double parallel = 0.0;      // 2 (rho_03 - sqrt(rho_11 rho_22))
  double antiparallel = 0.0;  // 2 (rho_12 - sqrt(rho_00 rho_33))
  double value = 0.0;         // max(parallel, antiparallel, 0)
};

/// Concurrence of a real two-qubit X-shaped density (non-zero entries only on
/// the diagonal and anti-diagonal).
XStateConcurrence x_state_concurrence(const Eigen::Matrix4d& rho);

/// Delta M_i = <Theta^-|s^z_i|Theta^-> - <Theta^+|s^z_i|Theta^+>
///           = 2 s_i sin^2(theta_i) O / (cos(theta_i) (1 - O^2)); zero when O = 0.
double magnetization_step(std::span<const double> angles, std::span<const SpinValue> spins, std::size_t site);

struct MonogamyTerms {
  double lhs = 0.0;  // C_BC^2 + C_BD^2
  double rhs = 0.0;  // C_{B,C+D}^2 [1 - (1-O_C^2)(1-O_D^2)/(1-O_C^2 O_D^2)]
};

/// B, C, D disjoint; `o_rest` is the overlap outside B u C u D.
MonogamyTerms monogamy_gap(double o_b, double o_c, double o_d, double o_rest, double o_total,
                           Parity state = Parity::even);

struct EntanglementLimits {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double n_plus = 0.0;
  double n_minus = 0.0;
  double c_zero = 0.0;
};

EntanglementLimits side_limits(const OverlapSet& o);

/// Adapter from angles: side limits between disjoint subsystems B and C.
EntanglementLimits side_limits(std::span<const double> angles, std::span<const SpinValue> spins,
                               const SubsystemSelector& b, const SubsystemSelector& c);

/// Entropy (bits) of the rank-2 reduced state of A in |Theta^{state}>.
double bipartition_entropy(double o_a, double o_complement, double o_total, Parity state);

struct UniformLimits {
  EntanglementLimits exact;
  double delta = 0.0;           // chi = 1 - delta/(2S)
  SidePair global_estimate;     // sqrt(S_B delta/S) sqrt(1 - e^-delta) / (1 +- e^{-delta/2}) for A = B
  SidePair pair_estimate;       // (delta/S) sqrt(S_B S_C) e^{-delta/2} / (1 +- e^{-delta/2})
};

/// Common-angle limits with cos^2(theta) = chi: O_X = chi^{S_X}. Spins are given as 2S.
UniformLimits uniform_limits(double chi, int twice_s_total, int twice_s_b, int twice_s_c);

}  // namespace sepspin
