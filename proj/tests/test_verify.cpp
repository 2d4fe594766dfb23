#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sepspin/verify.hpp"

using namespace sepspin;

TEST_SUITE("verify") {
  TEST_CASE("every suite passes on the unmodified library") {
    const auto report = verify_suite();
    for (const auto& e : report.entries) {
      INFO(e.suite << " / " << e.check << ": " << e.value << " > " << e.threshold << " " << e.detail);
      CHECK(e.passed);
    }
    for (const char* suite : {"residual", "degeneracy", "oracle", "monogamy", "identities"})
      CHECK(report.suite_passed(suite));
  }

  TEST_CASE("a sign error in the derived vy is caught") {
    VerifyOptions opt;
    opt.model_mutation = [](ModelSpec& spec, std::span<const double> angles) {
      const auto n = static_cast<Eigen::Index>(spec.size());
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
          spec.couplings.vy(i, j) = spec.couplings.vx(i, j) * std::cos(angles[i]) * std::cos(angles[j]) -
                                    spec.couplings.vz(i, j) * std::sin(angles[i]) * std::sin(angles[j]);
    };
    const auto report = verify_suite(opt);
    CHECK_FALSE(report.suite_passed("residual"));
    CHECK_FALSE(report.all_passed());
  }

  TEST_CASE("an unhalved border field is caught") {
    VerifyOptions opt;
    opt.model_mutation = [](ModelSpec& spec, std::span<const double>) { spec.fields(0) *= 2.0; };
    const auto report = verify_suite(opt);
    CHECK_FALSE(report.suite_passed("degeneracy"));
  }

  TEST_CASE("writers emit one line per entry") {
    VerifyOptions opt;
    opt.residual_configs = 2;
    opt.certified_configs = 2;
    opt.oracle_configs = 2;
    opt.monogamy_tuples = 2;
    const auto report = verify_suite(opt);
    std::ostringstream jsonl;
    write_verify_jsonl(jsonl, report);
    std::size_t lines = 0;
    for (char ch : jsonl.str()) lines += ch == '\n';
    CHECK(lines == report.entries.size());
  }
}
