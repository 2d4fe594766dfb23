#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sepspin/ed.hpp"
#include "sepspin/lattice_model.hpp"

namespace sepspin {

enum class FieldMode { uniform, alternating };

/// Field sweep of an open (or cyclic) first-neighbour XY chain with v_x = 1 as
/// the energy unit and anisotropy v_y/v_x = 1 - delta/(2 s n).
struct SweepConfig {
  int n = 8;
  int twice_s = 1;
  double delta = 2.5;
  Topology topology = Topology::open;
  FieldMode field_mode = FieldMode::uniform;
  double eta = 1.0;  // b_e / b_o, alternating mode only
  double grid_min = 0.05;
  double grid_max = 1.5;
  int grid_points = 150;
  double epsilon_side = 1e-4;
  std::vector<std::pair<int, int>> pairs;  // 1-based site labels; empty = (1, j) for every j
  std::uint64_t seed = 20240611;
  int threads = 0;  // 0 = hardware concurrency
  bool half_chain_entropy = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// key=value lines; '#' starts a comment. Unknown keys are errors.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig read_sweep_config(const std::string& path);
void write_sweep_config(std::ostream& out, const SweepConfig& config);
/// Throws ConfigError on invariant violations.
void check_config(const SweepConfig& config);

/// Figure presets: 1 (s = 1/2, delta = 2.5), 2 (s = 3/2, delta = 7.5), 3 (as 2 with eta = 10, alternating).
SweepConfig figure_preset(int figure);

double anisotropy(const SweepConfig& config);        // chi = v_y / v_x
double saturation_field(const SweepConfig& config);  // b_s = 2 s v_x sqrt(chi)
/// Field that the scale factor multiplies: b_s (uniform) or b_os = b_s / sqrt(eta) (alternating, odd sites).
double reference_field(const SweepConfig& config);
std::vector<std::pair<int, int>> resolved_pairs(const SweepConfig& config);

/// Model at a given scale; scale = 1 is the separable point.
ModelSpec sweep_model(const SweepConfig& config, double scale);
/// Angles of the separable solution at scale = 1.
std::vector<double> separable_angles(const SweepConfig& config);

std::vector<double> sweep_grid(const SweepConfig& config);

struct SweepRow {
  double scale = 0.0;
  double b_odd = 0.0;   // inner odd-site field (equals b_even in uniform mode)
  double b_even = 0.0;
  int parity = 0;       // +1 / -1; 0 flags |E_even - E_odd| < 1e-10 (negativities from the equal mixture)
  double e_even = 0.0;
  double e_odd = 0.0;
  std::vector<double> negativities;  // per resolved pair
  double half_chain_entropy = 0.0;   // bits; only filled when requested
};

class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, double scale) : std::runtime_error(what), scale_(scale) {}
  double scale() const { return scale_; }

 private:
  double scale_;
};

/// One row at a given scale (sector ground states + negativities).
SweepRow sweep_point(const SweepConfig& config, double scale);

/// Rows for every grid point, sorted by scale regardless of worker completion order.
std::vector<SweepRow> run_sweep(const SweepConfig& config);
std::vector<SweepRow> run_sweep(const SweepConfig& config, const std::vector<double>& scales);

struct SweepSummary {
  std::vector<double> transitions;  // linearly interpolated zero of E_even - E_odd between rows
  std::vector<int> parity_sequence; // ground-state parity on each interval
  int flagged_rows = 0;
};

SweepSummary summarize(const std::vector<SweepRow>& rows);

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows);

struct SideLimitEntry {
  std::pair<int, int> pair;  // 1-based
  std::string pair_class;    // "uniform", or "oo" / "oe" / "ee" in alternating mode
  int side = 0;              // -1 below the separable field, +1 above
  int parity = 0;            // numeric ground-state parity at that side
  double numeric = 0.0;
  double analytic = 0.0;
  double abs_diff = 0.0;
  bool pass = false;
};

struct SideLimitReport {
  double epsilon = 0.0;
  double tolerance = 1e-3;
  std::vector<SideLimitEntry> entries;
  bool all_pass() const;
};

SideLimitReport side_limit_report(const SweepConfig& config);
void write_report_table(std::ostream& out, const SideLimitReport& report);
void write_report_jsonl(std::ostream& out, const SideLimitReport& report);

}  // namespace sepspin
