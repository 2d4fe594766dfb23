#include "sepspin/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sepspin/entanglement.hpp"
#include "sepspin/factorization.hpp"
#include "sepspin/model_io.hpp"

namespace sepspin {
namespace {

constexpr double kFlagThreshold = 1e-10;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError("bad value for '" + key + "': " + text);
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("bad boolean for '" + key + "': " + text);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text) {
  std::vector<std::pair<int, int>> pairs;
  if (text == "first-to-all") return pairs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dash = item.find('-');
    if (dash == std::string::npos) throw ConfigError("pair must be written i-j: " + item);
    pairs.emplace_back(parse_number<int>("pairs", trim(item.substr(0, dash))),
                       parse_number<int>("pairs", trim(item.substr(dash + 1))));
  }
  if (pairs.empty()) throw ConfigError("empty pair list");
  return pairs;
}

double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

std::vector<SpinValue> chain_spins(const SweepConfig& c) {
  return std::vector<SpinValue>(static_cast<std::size_t>(c.n), SpinValue(c.twice_s));
}

CouplingTensor sweep_couplings(const SweepConfig& c) {
  return chain_couplings(static_cast<std::size_t>(c.n), 1.0, anisotropy(c), 0.0, c.topology);
}

// Fields of the separable point (scale = 1); border halving comes from the solutions themselves.
Eigen::VectorXd separable_fields(const SweepConfig& c) {
  if (c.field_mode == FieldMode::uniform) {
    const auto couplings = sweep_couplings(c);
    const auto spins = chain_spins(c);
    return uniform_solution(couplings.vx, couplings.vz, anisotropy(c), spins).fields;
  }
  return alternating_solution(1.0, anisotropy(c), SpinValue(c.twice_s), static_cast<std::size_t>(c.n), c.topology,
                              FieldRatio{c.eta})
      .fields;
}

std::vector<double> pair_negativities(const SweepConfig& config, const HilbertSpace& space,
                                      std::span<const WeightedState> states) {
  std::vector<double> out;
  for (const auto& [i, j] : resolved_pairs(config)) {
    const auto a = static_cast<std::size_t>(i - 1);
    const auto b = static_cast<std::size_t>(j - 1);
    const auto rho = reduced_density(space, states, SubsystemSelector({std::min(a, b), std::max(a, b)}));
    out.push_back(negativity(rho, SubsystemSelector({b})));
  }
  return out;
}

std::string pair_class(const SweepConfig& config, int i, int j) {
  if (config.field_mode == FieldMode::uniform) return "uniform";
  const bool oi = is_odd_site(static_cast<std::size_t>(i - 1));
  const bool oj = is_odd_site(static_cast<std::size_t>(j - 1));
  if (oi && oj) return "oo";
  if (!oi && !oj) return "ee";
  return "oe";
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      c.n = parse_number<int>(key, value);
    } else if (key == "twice_s") {
      c.twice_s = parse_number<int>(key, value);
    } else if (key == "delta") {
      c.delta = parse_number<double>(key, value);
    } else if (key == "topology") {
      if (value == "open") c.topology = Topology::open;
      else if (value == "cyclic") c.topology = Topology::cyclic;
      else throw ConfigError("topology must be open or cyclic");
    } else if (key == "field_mode") {
      if (value == "uniform") c.field_mode = FieldMode::uniform;
      else if (value == "alternating") c.field_mode = FieldMode::alternating;
      else throw ConfigError("field_mode must be uniform or alternating");
    } else if (key == "eta") {
      c.eta = parse_number<double>(key, value);
    } else if (key == "grid_min") {
      c.grid_min = parse_number<double>(key, value);
    } else if (key == "grid_max") {
      c.grid_max = parse_number<double>(key, value);
    } else if (key == "grid_points") {
      c.grid_points = parse_number<int>(key, value);
    } else if (key == "epsilon_side") {
      c.epsilon_side = parse_number<double>(key, value);
    } else if (key == "pairs") {
      c.pairs = parse_pairs(value);
    } else if (key == "seed") {
      c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "threads") {
      c.threads = parse_number<int>(key, value);
    } else if (key == "half_chain_entropy") {
      c.half_chain_entropy = parse_bool(key, value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  check_config(c);
  return c;
}

SweepConfig read_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_sweep_config(in);
}

void write_sweep_config(std::ostream& out, const SweepConfig& c) {
  out << "n = " << c.n << '\n'
      << "twice_s = " << c.twice_s << '\n'
      << "delta = " << format_double(c.delta) << '\n'
      << "topology = " << (c.topology == Topology::open ? "open" : "cyclic") << '\n'
      << "field_mode = " << (c.field_mode == FieldMode::uniform ? "uniform" : "alternating") << '\n'
      << "eta = " << format_double(c.eta) << '\n'
      << "grid_min = " << format_double(c.grid_min) << '\n'
      << "grid_max = " << format_double(c.grid_max) << '\n'
      << "grid_points = " << c.grid_points << '\n'
      << "epsilon_side = " << format_double(c.epsilon_side) << '\n';
  out << "pairs = ";
  if (c.pairs.empty()) {
    out << "first-to-all";
  } else {
    for (std::size_t k = 0; k < c.pairs.size(); ++k) {
      out << (k ? "," : "") << c.pairs[k].first << '-' << c.pairs[k].second;
    }
  }
  out << '\n'
      << "seed = " << c.seed << '\n'
      << "threads = " << c.threads << '\n'
      << "half_chain_entropy = " << (c.half_chain_entropy ? "true" : "false") << '\n';
}

void check_config(const SweepConfig& c) {
  if (c.n < 2) throw ConfigError("n must be at least 2");
  if (c.twice_s < 1) throw ConfigError("twice_s must be at least 1");
  const double chi = anisotropy(c);
  if (!(chi > 0.0 && chi < 1.0)) throw ConfigError("chi = 1 - delta/(2 s n) must lie in (0, 1)");
  if (c.topology == Topology::cyclic && c.n < 3) throw ConfigError("cyclic chains need n >= 3");
  if (c.field_mode == FieldMode::alternating) {
    if (!(c.eta > 0.0)) throw ConfigError("eta must be positive");
    if (c.topology == Topology::cyclic && (c.n % 2 != 0 || c.n < 4)) {
      throw ConfigError("alternating fields on a cyclic chain need an even n >= 4");
    }
  }
  if (c.grid_points < 2) throw ConfigError("grid needs at least 2 points");
  if (!(c.grid_min > 0.0 && c.grid_max > c.grid_min)) throw ConfigError("grid needs 0 < grid_min < grid_max");
  if (!(c.epsilon_side > 0.0 && c.epsilon_side <= 1e-2)) throw ConfigError("epsilon_side must lie in (0, 1e-2]");
  if (c.threads < 0) throw ConfigError("threads must be non-negative");
  for (const auto& [i, j] : c.pairs) {
    if (i < 1 || j < 1 || i > c.n || j > c.n || i == j) {
      throw ConfigError("pair " + std::to_string(i) + "-" + std::to_string(j) + " is not two distinct sites in 1..n");
    }
  }
}

SweepConfig figure_preset(int figure) {
  SweepConfig c;
  c.n = 8;
  switch (figure) {
    case 1:
      c.twice_s = 1;
      c.delta = 2.5;
      break;
    case 2:
      c.twice_s = 3;
      c.delta = 7.5;
      break;
    case 3:
      c.twice_s = 3;
      c.delta = 7.5;
      c.field_mode = FieldMode::alternating;
      c.eta = 10.0;
      break;
    default:
      throw ConfigError("figure preset must be 1, 2 or 3");
  }
  return c;
}

double anisotropy(const SweepConfig& c) { return 1.0 - c.delta / (c.twice_s * c.n); }

double saturation_field(const SweepConfig& c) { return c.twice_s * std::sqrt(anisotropy(c)); }

double reference_field(const SweepConfig& c) {
  const double bs = saturation_field(c);
  return c.field_mode == FieldMode::uniform ? bs : bs / std::sqrt(c.eta);
}

std::vector<std::pair<int, int>> resolved_pairs(const SweepConfig& c) {
  if (!c.pairs.empty()) return c.pairs;
  std::vector<std::pair<int, int>> pairs;
  for (int j = 2; j <= c.n; ++j) pairs.emplace_back(1, j);
  return pairs;
}

ModelSpec sweep_model(const SweepConfig& c, double scale) {
  ModelSpec spec(chain_spins(c));
  spec.couplings = sweep_couplings(c);
  spec.fields = scale * separable_fields(c);
  return spec;
}

std::vector<double> separable_angles(const SweepConfig& c) {
  if (c.field_mode == FieldMode::uniform) {
    return std::vector<double>(static_cast<std::size_t>(c.n), std::acos(std::sqrt(anisotropy(c))));
  }
  return alternating_solution(1.0, anisotropy(c), SpinValue(c.twice_s), static_cast<std::size_t>(c.n), c.topology,
                              FieldRatio{c.eta})
      .angles;
}

std::vector<double> sweep_grid(const SweepConfig& c) {
  std::vector<double> grid(static_cast<std::size_t>(c.grid_points));
  const double step = (c.grid_max - c.grid_min) / (c.grid_points - 1);
  for (int k = 0; k < c.grid_points; ++k) grid[static_cast<std::size_t>(k)] = c.grid_min + k * step;
  grid.back() = c.grid_max;
  return grid;
}

SweepRow sweep_point(const SweepConfig& config, double scale) {
  const ModelSpec spec = sweep_model(config, scale);
  LanczosOptions opts;
  opts.seed = config.seed;
  const auto even = ground_state(spec, Parity::even, opts);
  const auto odd = ground_state(spec, Parity::odd, opts);

  SweepRow row;
  row.scale = scale;
  const double bref = reference_field(config);
  row.b_odd = scale * bref;
  row.b_even = config.field_mode == FieldMode::uniform ? row.b_odd : config.eta * row.b_odd;
  row.e_even = even.energy;
  row.e_odd = odd.energy;

  const HilbertSpace space = spec.space();
  std::vector<WeightedState> states;
  const double gap = even.energy - odd.energy;
  if (std::abs(gap) < kFlagThreshold) {
    row.parity = 0;
    states.push_back({0.5, std::span<const double>(even.vector.data(), static_cast<std::size_t>(even.vector.size()))});
    states.push_back({0.5, std::span<const double>(odd.vector.data(), static_cast<std::size_t>(odd.vector.size()))});
  } else {
    const auto& gs = gap < 0.0 ? even : odd;
    row.parity = gap < 0.0 ? 1 : -1;
    states.push_back({1.0, std::span<const double>(gs.vector.data(), static_cast<std::size_t>(gs.vector.size()))});
  }
  row.negativities = pair_negativities(config, space, states);
  if (config.half_chain_entropy) {
    std::vector<std::size_t> half;
    for (int k = 0; k < config.n / 2; ++k) half.push_back(static_cast<std::size_t>(k));
    row.half_chain_entropy = entanglement_measures(reduced_density(space, states, SubsystemSelector(half))).entropy_bits;
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) { return run_sweep(config, sweep_grid(config)); }

std::vector<SweepRow> run_sweep(const SweepConfig& config, const std::vector<double>& scales) {
  check_config(config);
  std::vector<SweepRow> rows(scales.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  double error_scale = 0.0;
  std::atomic<bool> failed{false};

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= scales.size()) return;
      try {
        rows[k] = sweep_point(config, scales[k]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error || scales[k] < error_scale) {
          error = std::current_exception();
          error_scale = scales[k];
        }
        failed.store(true);
      }
    }
  };

  unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads) : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(std::max<std::size_t>(scales.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  if (error) {
    try {
      std::rethrow_exception(error);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << "sweep failed at scale " << format_double(error_scale) << ": " << e.what();
      throw SweepError(msg.str(), error_scale);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.scale < b.scale; });
  return rows;
}

SweepSummary summarize(const std::vector<SweepRow>& rows) {
  SweepSummary s;
  const SweepRow* last_signed = nullptr;
  std::vector<const SweepRow*> flagged_run;
  for (const auto& row : rows) {
    const double gap = row.e_even - row.e_odd;
    if (std::abs(gap) < kFlagThreshold) {
      ++s.flagged_rows;
      flagged_run.push_back(&row);
      continue;
    }
    const int parity = gap < 0.0 ? 1 : -1;
    if (!last_signed) {
      s.parity_sequence.push_back(parity);
    } else if (sign_of(gap) != sign_of(last_signed->e_even - last_signed->e_odd)) {
      double at;
      if (!flagged_run.empty()) {
        at = 0.5 * (flagged_run.front()->scale + flagged_run.back()->scale);
      } else {
        const double g0 = last_signed->e_even - last_signed->e_odd;
        at = last_signed->scale + (row.scale - last_signed->scale) * g0 / (g0 - gap);
      }
      s.transitions.push_back(at);
      s.parity_sequence.push_back(parity);
    }
    last_signed = &row;
    flagged_run.clear();
  }
  return s;
}

void write_csv(std::ostream& out, const SweepConfig& config, const std::vector<SweepRow>& rows) {
  out << "scale";
  out << (config.field_mode == FieldMode::uniform ? ",b_inner" : ",b_o,b_e");
  out << ",parity,E_even,E_odd";
  for (const auto& [i, j] : resolved_pairs(config)) out << ",N_" << i << '_' << j;
  if (config.half_chain_entropy) out << ",S_half";
  out << '\n';
  for (const auto& row : rows) {
    out << format_double(row.scale) << ',' << format_double(row.b_odd);
    if (config.field_mode == FieldMode::alternating) out << ',' << format_double(row.b_even);
    out << ',' << row.parity << ',' << format_double(row.e_even) << ',' << format_double(row.e_odd);
    for (double v : row.negativities) out << ',' << format_double(v);
    if (config.half_chain_entropy) out << ',' << format_double(row.half_chain_entropy);
    out << '\n';
  }
}

bool SideLimitReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const SideLimitEntry& e) { return e.pass; });
}

SideLimitReport side_limit_report(const SweepConfig& config) {
  check_config(config);
  SideLimitReport report;
  report.epsilon = config.epsilon_side;

  const auto angles = separable_angles(config);
  const auto spins = chain_spins(config);
  const auto pairs = resolved_pairs(config);
  const auto rows = run_sweep(config, {1.0 - config.epsilon_side, 1.0 + config.epsilon_side});

  for (int side : {-1, +1}) {
    const auto& row = rows[side < 0 ? 0 : 1];
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      const auto limits = side_limits(angles, spins, SubsystemSelector({static_cast<std::size_t>(i - 1)}),
                                      SubsystemSelector({static_cast<std::size_t>(j - 1)}));
      SideLimitEntry e;
      e.pair = pairs[k];
      e.pair_class = pair_class(config, i, j);
      e.side = side;
      e.parity = row.parity;
      e.numeric = row.negativities[k];
      e.analytic = side < 0 ? limits.n_minus : limits.n_plus;
      e.abs_diff = std::abs(e.numeric - e.analytic);
      e.pass = e.abs_diff <= report.tolerance;
      report.entries.push_back(e);
    }
  }
  return report;
}

void write_report_table(std::ostream& out, const SideLimitReport& report) {
  out << "# epsilon = " << format_double(report.epsilon) << ", tolerance = " << format_double(report.tolerance)
      << '\n';
  out << std::left << std::setw(8) << "pair" << std::setw(9) << "class" << std::setw(6) << "side" << std::setw(8)
      << "parity" << std::right << std::setw(16) << "numeric" << std::setw(16) << "analytic" << std::setw(14)
      << "abs_diff" << "  result\n";
  for (const auto& e : report.entries) {
    const std::string pair = std::to_string(e.pair.first) + "-" + std::to_string(e.pair.second);
    out << std::left << std::setw(8) << pair << std::setw(9) << e.pair_class << std::setw(6)
        << (e.side < 0 ? "-" : "+") << std::setw(8) << e.parity << std::right << std::fixed << std::setprecision(10)
        << std::setw(16) << e.numeric << std::setw(16) << e.analytic << std::scientific << std::setprecision(3)
        << std::setw(14) << e.abs_diff << "  " << (e.pass ? "pass" : "FAIL") << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << (report.all_pass() ? "all pass" : "FAILURES") << '\n';
}

void write_report_jsonl(std::ostream& out, const SideLimitReport& report) {
  for (const auto& e : report.entries) {
    nlohmann::json j;
    j["i"] = e.pair.first;
    j["j"] = e.pair.second;
    j["class"] = e.pair_class;
    j["side"] = e.side;
    j["epsilon"] = report.epsilon;
    j["parity"] = e.parity;
    j["numeric"] = e.numeric;
    j["analytic"] = e.analytic;
    j["abs_diff"] = e.abs_diff;
    j["tolerance"] = report.tolerance;
    j["pass"] = e.pass;
    out << j.dump() << '\n';
  }
}

}  // namespace sepspin
