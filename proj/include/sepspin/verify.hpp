#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sepspin/factorization.hpp"
#include "sepspin/lattice_model.hpp"

namespace sepspin {

struct RandomFactorizedOptions {
  std::size_t min_sites = 2;
  std::size_t max_sites = 6;
  int max_twice_s = 3;
  std::size_t max_dim = 4096;
  double sparsity = 0.3;        // probability that a pair carries no coupling
  bool certifiable = false;     // v_x >= 0 and |v_z| <= v_x, so |v_y| <= v_x holds
  bool canonical_angles = false;  // 0 < |theta| < pi/2 instead of theta in (0, pi)
};

/// Random long-range factorized model: spins, v_x, v_z (self-energies where s >= 1) and
/// angles are drawn, v_y and b are derived.
Factorization random_factorized(std::mt19937_64& rng, const RandomFactorizedOptions& options = {});

struct VerifyEntry {
  std::string suite;
  std::string check;
  bool passed = false;
  double value = 0.0;      // worst deviation observed
  double threshold = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool all_passed() const;
  bool suite_passed(const std::string& suite) const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int residual_configs = 50;
  int certified_configs = 30;
  int oracle_configs = 40;
  int monogamy_tuples = 100;
  /// Applied to every constructed model (with its angles) before the residual and
  /// degeneracy checks; used for mutation testing.
  std::function<void(ModelSpec&, std::span<const double>)> model_mutation;
};

/// Suites: residual, degeneracy, oracle, monogamy, identities.
VerifyReport verify_suite(const VerifyOptions& options = {});

void write_verify_table(std::ostream& out, const VerifyReport& report);
void write_verify_jsonl(std::ostream& out, const VerifyReport& report);

}  // namespace sepspin
