#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepspin/ed.hpp"
#include "sepspin/factorization.hpp"
#include "sepspin/model_io.hpp"
#include "sepspin/sweep.hpp"
#include "sepspin/verify.hpp"

namespace {

using namespace sepspin;

struct ConfigSource {
  std::string path;
  int figure = 0;
  int twice_s = 0;
  int grid_points = 0;
  int threads = -1;
};

void add_config_options(CLI::App* cmd, ConfigSource& src) {
  auto* config = cmd->add_option("--config", src.path, "key=value sweep configuration file");
  auto* fig = cmd->add_option("--fig", src.figure, "figure preset (1, 2 or 3)")->check(CLI::Range(1, 3));
  config->excludes(fig);
  cmd->add_option("--twice-s", src.twice_s, "override 2s of the preset or config");
  cmd->add_option("--points", src.grid_points, "override the number of grid points");
  cmd->add_option("--threads", src.threads, "worker threads (0 = hardware concurrency)");
}

SweepConfig load_config(const ConfigSource& src) {
  SweepConfig c;
  if (!src.path.empty()) {
    c = read_sweep_config(src.path);
  } else if (src.figure != 0) {
    c = figure_preset(src.figure);
  } else {
    throw ConfigError("one of --config or --fig is required");
  }
  if (src.twice_s > 0) c.twice_s = src.twice_s;
  if (src.grid_points > 0) c.grid_points = src.grid_points;
  if (src.threads >= 0) c.threads = src.threads;
  check_config(c);
  return c;
}

std::vector<double> parse_angles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

int run_sweep_command(const ConfigSource& src, const std::string& output, bool summary) {
  const SweepConfig config = load_config(src);
  const auto rows = run_sweep(config);
  if (output.empty() || output == "-") {
    write_csv(std::cout, config, rows);
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot open output file: " + output);
    write_csv(out, config, rows);
  }
  if (summary) {
    const auto s = summarize(rows);
    std::cerr << "parity transitions: " << s.transitions.size() << '\n';
    for (double t : s.transitions) std::cerr << "  scale " << format_double(t) << '\n';
    std::cerr << "parity sequence:";
    for (int p : s.parity_sequence) std::cerr << ' ' << (p > 0 ? '+' : '-');
    std::cerr << "\nflagged rows: " << s.flagged_rows << '\n';
  }
  return 0;
}

int run_report_command(const ConfigSource& src, const std::string& format, double epsilon) {
  SweepConfig config = load_config(src);
  if (epsilon > 0.0) config.epsilon_side = epsilon;
  check_config(config);
  const auto report = side_limit_report(config);
  if (format == "jsonl") {
    write_report_jsonl(std::cout, report);
  } else {
    write_report_table(std::cout, report);
  }
  return report.all_pass() ? 0 : 1;
}

int run_verify_command(const std::string& format) {
  const auto report = verify_suite();
  if (format == "jsonl") {
    write_verify_jsonl(std::cout, report);
  } else {
    write_verify_table(std::cout, report);
  }
  return report.all_passed() ? 0 : 1;
}

int run_factorize_command(const std::string& model_path, const std::string& angle_text) {
  const ModelSpec input = read_model_file(model_path);
  const auto angles = parse_angles(angle_text);
  if (angles.size() != input.size()) throw std::invalid_argument("angle count differs from number of spins");
  const auto f = factorize(input.spins, input.couplings.vx, input.couplings.vz, angles);
  write_model(std::cout, f.spec);
  std::cout << "# energy " << format_double(f.solution.energy) << '\n';
  std::cout << "# overlap " << format_double(f.solution.overlap) << '\n';
  const auto cert = gs_certificate(f.spec, angles);
  std::cout << "# ground_state " << (cert.certified ? "certified" : "not certified: " + cert.reason) << '\n';
  if (f.spec.space().total_dim() <= kDenseCap) {
    const auto spectrum = full_spectrum(f.spec);
    std::cout << "# multiplicity " << multiplicity(spectrum, f.solution.energy) << '\n';
    std::cout << "# spectrum_minimum " << format_double(spectrum.values(0)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separable ground states and parity transitions of anisotropic spin chains"};
  app.require_subcommand(1);

  ConfigSource sweep_src;
  std::string output;
  bool summary = false;
  auto* sweep = app.add_subcommand("sweep", "field sweep of sector energies and negativities, CSV output");
  add_config_options(sweep, sweep_src);
  sweep->add_option("-o,--output", output, "CSV file (default: standard output)");
  sweep->add_flag("--summary", summary, "print detected parity transitions to standard error");

  ConfigSource report_src;
  std::string report_format = "table";
  double epsilon = 0.0;
  auto* report = app.add_subcommand("report", "numeric vs analytic negativity side limits");
  add_config_options(report, report_src);
  report->add_option("--format", report_format, "table or jsonl")->check(CLI::IsMember({"table", "jsonl"}));
  report->add_option("--epsilon", epsilon, "override epsilon_side");

  std::string verify_format = "table";
  auto* verify = app.add_subcommand("verify", "run the self-check suites");
  verify->add_option("--format", verify_format, "table or jsonl")->check(CLI::IsMember({"table", "jsonl"}));

  std::string model_path, angle_text;
  auto* fact = app.add_subcommand("factorize", "complete a model (v_y, b) from v_x, v_z and angles");
  fact->add_option("--model", model_path, "model file with spin, vx and vz records")->required();
  fact->add_option("--angles", angle_text, "comma-separated angles in radians, one per site")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return run_sweep_command(sweep_src, output, summary);
    if (*report) return run_report_command(report_src, report_format, epsilon);
    if (*verify) return run_verify_command(verify_format);
    if (*fact) return run_factorize_command(model_path, angle_text);
  } catch (const ParseError& e) {
    std::cerr << "model file error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const SweepError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
