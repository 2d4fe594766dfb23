#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "sepspin/factorization.hpp"
#include "sepspin/verify.hpp"

using namespace sepspin;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<int> twice_spins(const ModelSpec& spec) {
  std::vector<int> out;
  for (auto s : spec.spins) out.push_back(s.twice_s());
  return out;
}

/// ||H|Theta> - E|Theta>|| with H and |Theta> built by the test oracle.
double oracle_residual(const ModelSpec& spec, const std::vector<double>& angles, double energy) {
  const auto ts = twice_spins(spec);
  const MatrixXd h = oracle::hamiltonian(ts, spec.couplings.vx, spec.couplings.vy, spec.couplings.vz, spec.fields);
  const VectorXd v = oracle::product(ts, angles);
  return (h * v - energy * v).norm();
}

ModelSpec spec_from(const std::vector<SpinValue>& spins, const CouplingTensor& c, const VectorXd& b) {
  ModelSpec spec(spins);
  spec.couplings = c;
  spec.fields = b;
  return spec;
}

ModelSpec from_alternating(const AlternatingSolution& a, SpinValue s) {
  return spec_from(std::vector<SpinValue>(a.angles.size(), s), a.couplings, a.fields);
}

}  // namespace

TEST_SUITE("factorization") {
  TEST_CASE("derive_vy limits and a hand value") {
    MatrixXd vx(2, 2), vz(2, 2);
    vx << 0.0, 1.0, 1.0, 0.0;
    vz << 0.0, 0.3, 0.3, 0.0;
    const std::vector<double> zero = {0.0, 0.0};
    CHECK(derive_vy(vx, vz, zero) == vx);
    const std::vector<double> right = {0.5 * std::numbers::pi, 0.5 * std::numbers::pi};
    CHECK((derive_vy(vx, vz, right) - vz).norm() < 1e-15);
    vz.setZero();
    const std::vector<double> third = {std::numbers::pi / 3.0, std::numbers::pi / 3.0};
    const MatrixXd vy = derive_vy(vx, vz, third);
    CHECK(vy(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(vy(1, 0) == vy(0, 1));
  }

  TEST_CASE("derive_fields on a uniform open chain gives halved borders") {
    for (int ts = 1; ts <= 3; ++ts) {
      const SpinValue s(ts);
      const double chi = 0.6;
      const auto c = chain_couplings(6, 1.0, chi, 0.0, Topology::open);
      const std::vector<double> angles(6, std::acos(std::sqrt(chi)));
      const std::vector<SpinValue> spins(6, s);
      const auto f = derive_fields(c.vx, c.vz, angles, spins);
      const double bs = 2.0 * s.s() * std::sqrt(chi);
      CHECK(f.fields(0) == doctest::Approx(0.5 * bs).epsilon(1e-14));
      CHECK(f.fields(5) == doctest::Approx(0.5 * bs).epsilon(1e-14));
      for (int i = 1; i < 5; ++i) CHECK(f.fields(i) == doctest::Approx(bs).epsilon(1e-14));
    }
  }

  TEST_CASE("derive_fields flags every site when all angles vanish") {
    const auto c = chain_couplings(4, 1.0, 1.0, 0.4, Topology::open);
    const std::vector<double> angles(4, 0.0);
    const std::vector<SpinValue> spins(4, SpinValue(2));
    const auto f = derive_fields(c.vx, c.vz, angles, spins);
    for (bool free : f.field_free) CHECK(free);
    CHECK(f.fields.norm() == 0.0);
  }

  TEST_CASE("derive_fields for a spin one half pair by hand") {
    MatrixXd vx = MatrixXd::Zero(2, 2), vz = MatrixXd::Zero(2, 2);
    vx(0, 1) = vx(1, 0) = 1.0;
    const double theta = 0.8;
    const std::vector<double> angles = {theta, theta};
    const std::vector<SpinValue> spins = {SpinValue(1), SpinValue(1)};
    const auto f = derive_fields(vx, vz, angles, spins);
    CHECK(f.fields(0) == doctest::Approx(0.5 * std::cos(theta)).epsilon(1e-14));
    CHECK(f.fields(1) == doctest::Approx(0.5 * std::cos(theta)).epsilon(1e-14));
  }

  TEST_CASE("derive_fields rejects an inconsistent degenerate site") {
    MatrixXd vx = MatrixXd::Zero(2, 2), vz = MatrixXd::Zero(2, 2);
    vx(0, 1) = vx(1, 0) = 1.0;
    const std::vector<double> angles = {0.0, 0.7};
    const std::vector<SpinValue> spins = {SpinValue(1), SpinValue(1)};
    CHECK_THROWS_AS(derive_fields(vx, vz, angles, spins), SeparabilityError);
  }

  TEST_CASE("energy of free spins at theta = 0") {
    ModelSpec spec({SpinValue(1), SpinValue(3)});
    spec.fields << 0.7, -0.2;
    const std::vector<double> angles = {0.0, 0.0};
    CHECK(factorized_energy(spec, angles) == doctest::Approx(-(0.5 * 0.7 + 1.5 * -0.2)));
  }

  TEST_CASE("random factorized models are eigenstates under the oracle Hamiltonian") {
    std::mt19937_64 rng(31);
    RandomFactorizedOptions opt;
    opt.max_dim = 512;
    for (int k = 0; k < 25; ++k) {
      const auto f = random_factorized(rng, opt);
      CHECK(oracle_residual(f.spec, f.solution.angles, f.solution.energy) <= 1e-10);
      std::vector<double> flipped = f.solution.angles;
      for (auto& t : flipped) t = -t;
      CHECK(oracle_residual(f.spec, flipped, f.solution.energy) <= 1e-10);
      const auto r = eigen_residual(f.spec, f.solution.angles);
      CHECK(r.residual <= 1e-10);
      CHECK(r.partner_residual <= 1e-10);
      CHECK(std::abs(r.rayleigh - r.partner_rayleigh) <= 1e-10);
      CHECK(f.solution.overlap == doctest::Approx(product_overlap(f.spec.spins, f.solution.angles)).epsilon(1e-14));
    }
  }

  TEST_CASE("a perturbed field breaks the eigenstate") {
    std::mt19937_64 rng(37);
    RandomFactorizedOptions opt;
    opt.max_dim = 512;
    auto f = random_factorized(rng, opt);
    f.spec.fields(0) += 1e-3;
    CHECK(eigen_residual(f.spec, f.solution.angles).residual > 1e-4);
  }

  TEST_CASE("XXZ models keep |0> as an eigenstate for any field") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ModelSpec spec({SpinValue(1), SpinValue(2), SpinValue(3)});
    for (Eigen::Index i = 0; i < 3; ++i) {
      spec.fields(i) = u(rng);
      for (Eigen::Index j = i + 1; j < 3; ++j) {
        const double v = u(rng);
        spec.couplings.vx(i, j) = spec.couplings.vx(j, i) = v;
        spec.couplings.vy(i, j) = spec.couplings.vy(j, i) = v;
        spec.couplings.vz(i, j) = spec.couplings.vz(j, i) = u(rng);
      }
    }
    const std::vector<double> zero(3, 0.0);
    CHECK(eigen_residual(spec, zero).residual <= 1e-12);
  }

  TEST_CASE("certificate on ferromagnetic and broken chains") {
    const SpinValue s(1);
    const auto u = uniform_solution(chain_couplings(6, 1.0, 0.5, 0.0, Topology::open).vx,
                                    chain_couplings(6, 1.0, 0.5, 0.0, Topology::open).vz, 0.5,
                                    std::vector<SpinValue>(6, s));
    ModelSpec spec(std::vector<SpinValue>(6, s));
    spec.couplings = chain_couplings(6, 1.0, 0.5, 0.0, Topology::open);
    spec.fields = u.fields;
    const std::vector<double> angles(6, u.theta);
    CHECK(gs_certificate(spec, angles).certified);

    spec.couplings.vy(0, 1) = spec.couplings.vy(1, 0) = 1.5;
    const auto bad = gs_certificate(spec, angles);
    CHECK_FALSE(bad.certified);
    CHECK(bad.reason.find("(0,1)") != std::string::npos);

    spec.couplings = chain_couplings(6, 1.0, 0.5, 0.0, Topology::open);
    std::vector<double> negative = angles;
    negative[2] = -negative[2];
    CHECK_FALSE(gs_certificate(spec, negative).certified);
  }

  TEST_CASE("antiferromagnetic staggered angles are certified after the z gauge") {
    const SpinValue s(1);
    const double theta = 0.9;
    const std::size_t n = 6;
    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) angles[i] = (i % 2 == 0 ? 1.0 : -1.0) * theta;
    const auto c = chain_couplings(n, -1.0, 0.0, -0.3, Topology::open);
    const auto f = factorize(std::vector<SpinValue>(n, s), c.vx, c.vz, angles);
    CHECK_FALSE(f.solution.gs_certified);
    CHECK(eigen_residual(f.spec, angles).residual <= 1e-12);
    const auto g = gauge_positive_angles(f.spec, angles);
    CHECK(gs_certificate(g.spec, g.angles).certified);
    CHECK(eigen_residual(g.spec, g.angles).residual <= 1e-12);
    CHECK(factorized_energy(g.spec, g.angles) == doctest::Approx(f.solution.energy).epsilon(1e-12));
  }

  TEST_CASE("x rotation gauge preserves the eigenstate and canonicalizes the overlap") {
    std::mt19937_64 rng(43);
    RandomFactorizedOptions opt;
    opt.max_dim = 512;
    for (int k = 0; k < 10; ++k) {
      const auto f = random_factorized(rng, opt);
      const auto c = canonicalize(f.spec, f.solution.angles);
      for (double t : c.angles) CHECK(std::abs(t) <= 0.5 * std::numbers::pi + 1e-15);
      CHECK(product_overlap(c.spec.spins, c.angles) >= 0.0);
      CHECK(std::abs(product_overlap(c.spec.spins, c.angles)) ==
            doctest::Approx(std::abs(f.solution.overlap)).epsilon(1e-12));
      const auto r = eigen_residual(c.spec, c.angles);
      CHECK(r.residual <= 1e-10);
      CHECK(r.energy == doctest::Approx(f.solution.energy).epsilon(1e-12));
      const auto canon = canonical_angles(f.solution.angles);
      for (std::size_t i = 0; i < canon.size(); ++i) CHECK(canon[i] == doctest::Approx(c.angles[i]).epsilon(1e-14));
    }
  }

  TEST_CASE("uniform solution on an open chain") {
    for (int ts = 1; ts <= 3; ++ts) {
      const SpinValue s(ts);
      const double vx = 1.3, vy = 0.4;
      const auto c = chain_couplings(5, vx, vy, 0.0, Topology::open);
      const std::vector<SpinValue> spins(5, s);
      const auto u = uniform_solution(c, spins);
      const double bs = 2.0 * s.s() * std::sqrt(vx * vy);
      CHECK(u.chi == doctest::Approx(vy / vx).epsilon(1e-14));
      CHECK(u.fields(2) == doctest::Approx(bs).epsilon(1e-14));
      CHECK(u.fields(0) == doctest::Approx(0.5 * bs).epsilon(1e-14));
      CHECK(u.fields(4) == doctest::Approx(0.5 * bs).epsilon(1e-14));

      const std::vector<double> angles(5, u.theta);
      const auto spec = spec_from(spins, c, u.fields);
      CHECK(eigen_residual(spec, angles).residual <= 1e-10);
      CHECK(factorized_energy(spec, angles) == doctest::Approx(u.energy).epsilon(1e-12));
      CHECK(uniform_energy(c, spins) == doctest::Approx(u.energy).epsilon(1e-12));
    }
  }

  TEST_CASE("uniform solution round-trips through derive_vy and derive_fields") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<SpinValue> spins = {SpinValue(1), SpinValue(2), SpinValue(3), SpinValue(2)};
    MatrixXd vx = MatrixXd::Zero(4, 4), vz = MatrixXd::Zero(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = i; j < 4; ++j) {
        if (i == j && spins[static_cast<std::size_t>(i)].twice_s() < 2) continue;
        vx(i, j) = vx(j, i) = u(rng);
        vz(i, j) = vz(j, i) = u(rng);
      }
    }
    const auto sol = uniform_solution(vx, vz, 0.35, spins);
    const std::vector<double> angles(4, sol.theta);
    CHECK((derive_vy(vx, vz, angles) - sol.vy).norm() <= 1e-12);
    CHECK((derive_fields(vx, vz, angles, spins).fields - sol.fields).norm() <= 1e-12);
    CouplingTensor c(4);
    c.vx = vx;
    c.vy = sol.vy;
    c.vz = vz;
    CHECK(uniform_energy(c, spins) == doctest::Approx(sol.energy).epsilon(1e-12));
    CHECK(eigen_residual(spec_from(spins, c, sol.fields), angles).residual <= 1e-10);
  }

  TEST_CASE("uniform solution limits and errors") {
    const auto c = chain_couplings(4, 1.0, 1.0, 0.2, Topology::cyclic);
    const std::vector<SpinValue> spins(4, SpinValue(1));
    const auto xxz = uniform_solution(c, spins);
    CHECK(xxz.theta == 0.0);
    CHECK(xxz.fields_arbitrary);

    auto mixed = chain_couplings(4, 1.0, 0.5, 0.0, Topology::open);
    mixed.vy(2, 3) = mixed.vy(3, 2) = 0.7;
    CHECK_THROWS_AS(uniform_solution(mixed, spins), SeparabilityError);
    CHECK_THROWS_AS(uniform_solution(c.vx, c.vz, 1.5, spins), SeparabilityError);
  }

  TEST_CASE("uniform solution on a cyclic chain has equal fields") {
    const SpinValue s(2);
    const auto c = chain_couplings(6, 1.0, 0.3, 0.1, Topology::cyclic);
    const std::vector<SpinValue> spins(6, s);
    const auto u = uniform_solution(c, spins);
    for (int i = 0; i < 6; ++i) CHECK(u.fields(i) == doctest::Approx(2.0 * s.s() * 0.9 * std::sqrt(u.chi)));
    CHECK(eigen_residual(spec_from(spins, c, u.fields), std::vector<double>(6, u.theta)).residual <= 1e-10);
  }

  TEST_CASE("isotropic pairs get vy = vx inside a uniform solution") {
    MatrixXd vx = MatrixXd::Zero(3, 3), vz = MatrixXd::Zero(3, 3);
    vx(0, 1) = vx(1, 0) = 1.0;
    vx(1, 2) = vx(2, 1) = 0.5;
    vz(1, 2) = vz(2, 1) = 0.5;
    const auto u = uniform_solution(vx, vz, 0.4, std::vector<SpinValue>(3, SpinValue(1)));
    CHECK(u.vy(1, 2) == doctest::Approx(0.5));
    CHECK(u.vy(0, 1) == doctest::Approx(0.4));
  }

  TEST_CASE("alternating solution hand example") {
    const auto a = alternating_solution(1.0, 0.25, SpinValue(1), 6, Topology::open, FieldRatio{4.0});
    CHECK(a.b_even == doctest::Approx(1.0));
    CHECK(a.b_odd == doctest::Approx(0.25));
    CHECK(std::pow(std::cos(a.theta_odd), 2) == doctest::Approx(0.125 / 1.0625).epsilon(1e-14));
    CHECK(std::pow(std::cos(a.theta_even), 2) == doctest::Approx(1.0625 / 2.0).epsilon(1e-14));
    CHECK(std::cos(a.theta_odd) * std::cos(a.theta_even) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(a.fields(0) == doctest::Approx(0.125));  // odd border
    CHECK(a.fields(1) == doctest::Approx(1.0));
    CHECK(a.fields(2) == doctest::Approx(0.25));
    CHECK(a.fields(5) == doctest::Approx(0.5));  // even border
    CHECK(eigen_residual(from_alternating(a, SpinValue(1)), a.angles).residual <= 1e-10);
  }

  TEST_CASE("alternating solution with odd length ends on the odd sublattice") {
    const auto a = alternating_solution(1.0, 0.5, SpinValue(2), 5, Topology::open, OddField{0.6});
    CHECK(a.fields(4) == doctest::Approx(0.5 * a.b_odd));
    CHECK(a.b_even * a.b_odd == doctest::Approx(4.0 * 0.5));
    CHECK(eigen_residual(from_alternating(a, SpinValue(2)), a.angles).residual <= 1e-10);
  }

  TEST_CASE("alternating solution reduces to the uniform one at eta = 1") {
    const SpinValue s(3);
    const auto a = alternating_solution(1.0, 0.6, s, 6, Topology::cyclic, FieldRatio{1.0});
    const auto u = uniform_solution(a.couplings, std::vector<SpinValue>(6, s));
    CHECK(a.theta_odd == doctest::Approx(u.theta).epsilon(1e-12));
    CHECK(a.theta_even == doctest::Approx(u.theta).epsilon(1e-12));
    CHECK((a.fields - u.fields).norm() <= 1e-12);
  }

  TEST_CASE("alternating solution at large b_e") {
    const double chi = 0.4;
    const auto a = alternating_solution(1.0, chi, SpinValue(1), 6, Topology::open, FieldRatio{1e6});
    CHECK(std::cos(a.theta_even) == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::cos(a.theta_odd) == doctest::Approx(chi).epsilon(1e-5));
  }

  TEST_CASE("antiferromagnetic alternating solution") {
    const auto a = alternating_solution(-1.0, -0.5, SpinValue(2), 6, Topology::open, FieldRatio{3.0});
    CHECK(a.theta_odd > 0.0);
    CHECK(a.theta_even < 0.0);
    const auto spec = from_alternating(a, SpinValue(2));
    CHECK(eigen_residual(spec, a.angles).residual <= 1e-10);
    const auto g = gauge_positive_angles(spec, a.angles);
    CHECK(gs_certificate(g.spec, g.angles).certified);
  }

  TEST_CASE("alternating solution errors") {
    CHECK_THROWS_AS(alternating_solution(1.0, 0.5, SpinValue(1), 5, Topology::cyclic, FieldRatio{2.0}),
                    SeparabilityError);
    CHECK_THROWS_AS(alternating_solution(1.0, 1.5, SpinValue(1), 6, Topology::open, FieldRatio{2.0}),
                    SeparabilityError);
    CHECK_THROWS_AS(alternating_solution(1.0, -0.5, SpinValue(1), 6, Topology::open, FieldRatio{2.0}),
                    SeparabilityError);
    CHECK_THROWS_AS(alternating_solution(1.0, 0.5, SpinValue(1), 6, Topology::open, FieldRatio{0.0}),
                    SeparabilityError);
    CHECK_THROWS_AS(alternating_solution(1.0, 0.5, SpinValue(1), 6, Topology::open, OddField{-1.0}),
                    SeparabilityError);
  }
}
