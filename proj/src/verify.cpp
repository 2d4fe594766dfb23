#include "sepspin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sepspin/ed.hpp"
#include "sepspin/entanglement.hpp"
#include "sepspin/sweep.hpp"

namespace sepspin {
namespace {

using Eigen::Index;

// Worst-case tracker for one named check.
struct Check {
  Check(std::string suite_, std::string name_, double threshold_)
      : suite(std::move(suite_)), name(std::move(name_)), threshold(threshold_) {}

  std::string suite;
  std::string name;
  double threshold;
  double worst = 0.0;
  int count = 0;
  std::string worst_case;

  void record(double deviation, const std::string& label) {
    ++count;
    if (std::isnan(deviation)) deviation = std::numeric_limits<double>::infinity();
    if (count == 1 || deviation > worst) {
      worst = deviation;
      worst_case = label;
    }
  }
  VerifyEntry entry() const {
    VerifyEntry e;
    e.suite = suite;
    e.check = name;
    e.threshold = threshold;
    e.value = worst;
    e.passed = count > 0 && worst <= threshold;
    std::ostringstream d;
    d << count << " cases";
    if (!worst_case.empty()) d << ", worst: " << worst_case;
    e.detail = d.str();
    return e;
  }
};

Eigen::VectorXd combine(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double sign) {
  Eigen::VectorXd v = a + sign * b;
  return v / v.norm();
}

std::span<const double> view(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

double sector_minimum(const Eigen::MatrixXd& h, const HilbertSpace& space, Parity parity) {
  const auto idx = parity_sector(space, parity);
  std::vector<Index> rows(idx.begin(), idx.end());
  const Eigen::MatrixXd block = h(rows, rows);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

std::string case_label(const std::string& prefix, int k) { return prefix + " #" + std::to_string(k); }

void residual_suite(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<VerifyEntry>& out) {
  Check residual{"residual", "||H|Theta> - E|Theta>||", 1e-10};
  Check partner{"residual", "|-Theta> residual and energy", 1e-10};
  RandomFactorizedOptions ro;
  for (int k = 0; k < opt.residual_configs; ++k) {
    auto f = random_factorized(rng, ro);
    if (opt.model_mutation) opt.model_mutation(f.spec, f.solution.angles);
    const auto r = eigen_residual(f.spec, f.solution.angles);
    const std::string label = case_label("config", k) + " (n=" + std::to_string(f.spec.size()) + ")";
    residual.record(std::max(r.residual, std::abs(r.rayleigh - r.energy)), label);
    partner.record(std::max({r.partner_residual, std::abs(r.partner_rayleigh - r.rayleigh),
                             std::abs(r.partner_residual - r.residual)}),
                   label);
  }
  out.push_back(residual.entry());
  out.push_back(partner.entry());
}

struct NamedModel {
  std::string name;
  ModelSpec spec;
  std::vector<double> angles;
};

ModelSpec from_alternating(const AlternatingSolution& a, SpinValue s) {
  ModelSpec spec(std::vector<SpinValue>(a.angles.size(), s));
  spec.couplings = a.couplings;
  spec.fields = a.fields;
  return spec;
}

std::vector<NamedModel> chain_cases() {
  std::vector<NamedModel> cases;
  {
    const auto cfg = figure_preset(1);
    cases.push_back({"uniform s=1/2 n=8 open", sweep_model(cfg, 1.0), separable_angles(cfg)});
  }
  {
    SweepConfig cfg;
    cfg.n = 6;
    cfg.twice_s = 2;
    cfg.delta = 3.0;
    cases.push_back({"uniform s=1 n=6 open", sweep_model(cfg, 1.0), separable_angles(cfg)});
  }
  {
    SweepConfig cfg;
    cfg.n = 8;
    cfg.delta = 2.5;
    cfg.field_mode = FieldMode::alternating;
    cfg.eta = 10.0;
    cases.push_back({"alternating s=1/2 n=8 open eta=10", sweep_model(cfg, 1.0), separable_angles(cfg)});
    cfg.topology = Topology::cyclic;
    cfg.eta = 3.0;
    cases.push_back({"alternating s=1/2 n=8 cyclic eta=3", sweep_model(cfg, 1.0), separable_angles(cfg)});
  }
  {
    const SpinValue s(1);
    const auto a = alternating_solution(-1.0, -0.6, s, 6, Topology::open, FieldRatio{2.0});
    const auto g = gauge_positive_angles(from_alternating(a, s), a.angles);
    cases.push_back({"gauged antiferromagnetic alternating s=1/2 n=6", g.spec, g.angles});
  }
  return cases;
}

void degeneracy_suite(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<VerifyEntry>& out) {
  Check certificate{"degeneracy", "certificate holds", 0.0};
  Check minimum{"degeneracy", "E_Theta = min spectrum", 1e-9};
  Check sectors{"degeneracy", "parity-sector minima coincide", 1e-9};

  std::vector<NamedModel> cases = chain_cases();
  RandomFactorizedOptions ro;
  ro.certifiable = true;
  ro.max_dim = 1024;
  for (int k = 0; k < opt.certified_configs; ++k) {
    auto f = random_factorized(rng, ro);
    cases.push_back({case_label("random", k), std::move(f.spec), std::move(f.solution.angles)});
  }

  for (auto& c : cases) {
    if (opt.model_mutation) opt.model_mutation(c.spec, c.angles);
    const auto cert = gs_certificate(c.spec, c.angles);
    certificate.record(cert.certified ? 0.0 : 1.0, c.name + (cert.certified ? "" : ": " + cert.reason));
    if (!cert.certified) continue;
    const double e_theta = factorized_energy(c.spec, c.angles);
    const Eigen::MatrixXd h = dense_h(c.spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    minimum.record(std::abs(es.eigenvalues()(0) - e_theta), c.name);
    const auto space = c.spec.space();
    sectors.record(std::abs(sector_minimum(h, space, Parity::even) - sector_minimum(h, space, Parity::odd)), c.name);
  }
  out.push_back(certificate.entry());
  out.push_back(minimum.entry());
  out.push_back(sectors.entry());
}

void oracle_suite(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<VerifyEntry>& out) {
  Check neg_pair{"oracle", "pair negativity N+-", 1e-10};
  Check neg_block{"oracle", "block negativity N+-", 1e-10};
  Check conc{"oracle", "qubit-pair concurrence C+-", 1e-10};
  Check mix{"oracle", "mixture concurrence C0", 1e-10};
  Check global{"oracle", "global concurrence", 1e-10};
  Check step{"oracle", "magnetization step", 1e-10};
  Check schmidt{"oracle", "Schmidt rank-2 weights", 1e-10};

  RandomFactorizedOptions ro;
  ro.max_sites = 5;
  ro.max_dim = 1024;
  ro.canonical_angles = true;
  for (int k = 0; k < opt.oracle_configs; ++k) {
    const auto f = random_factorized(rng, ro);
    const auto& spins = f.spec.spins;
    const auto& angles = f.solution.angles;
    const std::size_t n = spins.size();
    const auto space = f.spec.space();
    const std::string label = case_label("config", k);

    std::vector<double> flipped(angles);
    for (auto& t : flipped) t = -t;
    const Eigen::VectorXd up = product_state(spins, angles);
    const Eigen::VectorXd down = product_state(spins, flipped);
    const Eigen::VectorXd plus = combine(up, down, 1.0);
    const Eigen::VectorXd minus = combine(up, down, -1.0);
    const double o = product_overlap(spins, angles);

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const SubsystemSelector b{i}, c{j};
        const auto lim = side_limits(angles, spins, b, c);
        const auto rp = reduced_density(space, plus, SubsystemSelector{i, j});
        const auto rm = reduced_density(space, minus, SubsystemSelector{i, j});
        neg_pair.record(std::max(std::abs(negativity(rp, c) - lim.n_plus), std::abs(negativity(rm, c) - lim.n_minus)),
                        label);
        if (spins[i].twice_s() == 1 && spins[j].twice_s() == 1) {
          conc.record(std::max(std::abs(wootters_concurrence(rp) - lim.c_plus),
                               std::abs(wootters_concurrence(rm) - lim.c_minus)),
                      label);
          const WeightedState mixture[] = {{0.5, view(plus)}, {0.5, view(minus)}};
          const auto r0 = reduced_density(space, mixture, SubsystemSelector{i, j});
          mix.record(std::abs(wootters_concurrence(r0) - lim.c_zero), label);
        }
      }
    }

    if (n >= 3) {
      const SubsystemSelector b{0, 1}, c{n - 1};
      const auto lim = side_limits(angles, spins, b, c);
      const auto a = b.united(c);
      neg_block.record(std::max(std::abs(negativity(reduced_density(space, plus, a), c) - lim.n_plus),
                                std::abs(negativity(reduced_density(space, minus, a), c) - lim.n_minus)),
                       label);
    }

    {
      const SubsystemSelector b{0};
      const auto rest = b.complement(n);
      const auto lim = concurrence_limits(subsystem_overlap(angles, spins, b), subsystem_overlap(angles, spins, rest),
                                          1.0, o);
      global.record(std::max(std::abs(entanglement_measures(reduced_density(space, plus, b)).global_concurrence -
                                      lim.plus),
                             std::abs(entanglement_measures(reduced_density(space, minus, b)).global_concurrence -
                                      lim.minus)),
                    label);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const double numeric = expectation_sz(space, minus, i) - expectation_sz(space, plus, i);
      step.record(std::abs(numeric - magnetization_step(angles, spins, i)), label);
    }

    {
      std::vector<std::size_t> half;
      for (std::size_t i = 0; i < std::max<std::size_t>(1, n / 2); ++i) half.push_back(i);
      const SubsystemSelector a(half);
      const auto w = schmidt_weights(subsystem_overlap(angles, spins, a),
                                     subsystem_overlap(angles, spins, a.complement(n)), o);
      double dev = 0.0;
      for (Parity p : {Parity::even, Parity::odd}) {
        const auto rho = reduced_density(space, p == Parity::even ? plus : minus, a);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho.matrix, Eigen::EigenvaluesOnly);
        std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(ev.begin(), ev.end(), std::greater<>());
        std::vector<double> expect = {w.weight(p, Parity::even), w.weight(p, Parity::odd)};
        std::sort(expect.begin(), expect.end(), std::greater<>());
        dev = std::max({dev, std::abs(ev[0] - expect[0]), ev.size() > 1 ? std::abs(ev[1] - expect[1]) : expect[1]});
        for (std::size_t r = 2; r < ev.size(); ++r) dev = std::max(dev, std::abs(ev[r]));
      }
      schmidt.record(dev, label);
    }
  }
  for (const Check* c : {&neg_pair, &neg_block, &conc, &mix, &global, &step, &schmidt}) out.push_back(c->entry());
}

void monogamy_suite(const VerifyOptions& opt, std::mt19937_64& rng, std::vector<VerifyEntry>& out) {
  Check identity{"monogamy", "C_BC^2 + C_BD^2 = C_B(CD)^2 [...]", 1e-12};
  std::uniform_real_distribution<double> u(0.0, 0.999);
  for (int k = 0; k < opt.monogamy_tuples; ++k) {
    const double ob = u(rng), oc = u(rng), od = u(rng), orest = u(rng);
    const double o = ob * oc * od * orest;
    for (Parity p : {Parity::even, Parity::odd}) {
      const auto t = monogamy_gap(ob, oc, od, orest, o, p);
      identity.record(std::abs(t.lhs - t.rhs), case_label("tuple", k));
    }
  }
  out.push_back(identity.entry());
}

void identity_suite(std::mt19937_64& rng, std::vector<VerifyEntry>& out) {
  Check alt{"identities", "cos(theta_o) cos(theta_e) = vy/vx", 1e-12};
  Check uni{"identities", "uniform closed form = generic form", 1e-12};
  Check unit{"identities", "C- = 1 when O_A = O_Abar", 1e-12};
  Check bit{"identities", "entropy -> 1 bit at O = 1e-4", 1e-6};

  std::uniform_real_distribution<double> u01(0.05, 0.95);
  std::uniform_int_distribution<int> ts(1, 3);
  for (int k = 0; k < 20; ++k) {
    const double vx = (k % 2 == 0 ? 1.0 : -1.0) * (0.5 + u01(rng));
    const double vy = vx * u01(rng);
    const SpinValue s(ts(rng));
    const std::size_t n = 4 + 2 * static_cast<std::size_t>(k % 3);
    const Topology topo = k % 4 < 2 ? Topology::open : Topology::cyclic;
    const auto a = alternating_solution(vx, vy, s, n, topo, FieldRatio{0.2 + 5.0 * u01(rng)});
    alt.record(std::abs(std::cos(a.theta_odd) * std::cos(a.theta_even) - vy / vx), case_label("solution", k));
  }

  for (int k = 0; k < 20; ++k) {
    const double chi = u01(rng);
    const int twice_b = ts(rng), twice_c = ts(rng);
    const int twice_total = twice_b + twice_c + ts(rng) + ts(rng);
    const auto lim = uniform_limits(chi, twice_total, twice_b, twice_c);
    OverlapSet o;
    const double theta = std::acos(std::sqrt(chi));
    o.b = std::pow(std::cos(theta), twice_b);
    o.c = std::pow(std::cos(theta), twice_c);
    o.complement = std::pow(std::cos(theta), twice_total - twice_b - twice_c);
    o.total = std::pow(std::cos(theta), twice_total);
    const auto gen = side_limits(o);
    uni.record(std::max({std::abs(lim.exact.c_plus - gen.c_plus), std::abs(lim.exact.c_minus - gen.c_minus),
                         std::abs(lim.exact.n_plus - gen.n_plus), std::abs(lim.exact.n_minus - gen.n_minus)}),
               case_label("chi", k));

    const double x = u01(rng);
    unit.record(std::abs(concurrence_limits(x, x, 1.0, x * x).minus - 1.0), case_label("overlap", k));
  }

  for (Parity p : {Parity::even, Parity::odd}) {
    bit.record(std::abs(bipartition_entropy(1e-4, 1e-4, 1e-8, p) - 1.0), p == Parity::even ? "plus" : "minus");
  }
  for (const Check* c : {&alt, &uni, &unit, &bit}) out.push_back(c->entry());
}

}  // namespace

Factorization random_factorized(std::mt19937_64& rng, const RandomFactorizedOptions& opt) {
  std::uniform_int_distribution<std::size_t> sites(opt.min_sites, opt.max_sites);
  std::uniform_int_distribution<int> twice_s(1, opt.max_twice_s);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  std::vector<SpinValue> spins;
  for (;;) {
    spins.clear();
    const std::size_t n = sites(rng);
    std::size_t dim = 1;
    for (std::size_t i = 0; i < n; ++i) {
      spins.emplace_back(twice_s(rng));
      dim *= static_cast<std::size_t>(spins.back().dim());
    }
    if (dim <= opt.max_dim) break;
  }
  const auto n = static_cast<Index>(spins.size());

  Eigen::MatrixXd vx = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd vz = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      if (i == j && spins[static_cast<std::size_t>(i)].twice_s() < 2) continue;
      if (i != j && unit(rng) < opt.sparsity) continue;
      double x, z;
      if (opt.certifiable) {
        x = 0.1 + 0.9 * unit(rng);
        z = x * sym(rng);
      } else {
        x = sym(rng);
        z = sym(rng);
      }
      vx(i, j) = vx(j, i) = x;
      vz(i, j) = vz(j, i) = z;
    }
  }

  std::vector<double> angles(spins.size());
  for (auto& t : angles) {
    if (opt.canonical_angles) {
      t = (0.1 + (0.5 * std::numbers::pi - 0.2) * unit(rng)) * (unit(rng) < 0.5 ? -1.0 : 1.0);
    } else {
      t = 0.1 + (std::numbers::pi - 0.2) * unit(rng);
    }
  }
  return factorize(std::move(spins), vx, vz, angles);
}

bool VerifyReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.passed; });
}

bool VerifyReport::suite_passed(const std::string& suite) const {
  bool any = false;
  for (const auto& e : entries) {
    if (e.suite != suite) continue;
    any = true;
    if (!e.passed) return false;
  }
  return any;
}

VerifyReport verify_suite(const VerifyOptions& options) {
  VerifyReport report;
  std::mt19937_64 rng(options.seed);
  auto guarded = [&](const std::string& suite, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report.entries.push_back({suite, "suite completed", false, 0.0, 0.0, e.what()});
    }
  };
  guarded("residual", [&] { residual_suite(options, rng, report.entries); });
  guarded("degeneracy", [&] { degeneracy_suite(options, rng, report.entries); });
  guarded("oracle", [&] { oracle_suite(options, rng, report.entries); });
  guarded("monogamy", [&] { monogamy_suite(options, rng, report.entries); });
  guarded("identities", [&] { identity_suite(rng, report.entries); });
  return report;
}

void write_verify_table(std::ostream& out, const VerifyReport& report) {
  for (const auto& e : report.entries) {
    out << std::left << std::setw(12) << e.suite << std::setw(40) << e.check << std::right << std::scientific
        << std::setprecision(2) << std::setw(11) << e.value << " <= " << std::setw(9) << e.threshold << "  "
        << (e.passed ? "pass" : "FAIL") << "  " << e.detail << '\n';
    out.unsetf(std::ios::floatfield);
  }
  out << (report.all_passed() ? "all suites pass" : "FAILURES") << '\n';
}

void write_verify_jsonl(std::ostream& out, const VerifyReport& report) {
  for (const auto& e : report.entries) {
    nlohmann::json j;
    j["suite"] = e.suite;
    j["check"] = e.check;
    j["passed"] = e.passed;
    j["value"] = e.value;
    j["threshold"] = e.threshold;
    j["detail"] = e.detail;
    out << j.dump() << '\n';
  }
}

}  // namespace sepspin
