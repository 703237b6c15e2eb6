#include "doctest.h"
#include "nogolab/report.hpp"

using namespace nogolab;
using namespace nogolab::harness;

TEST_SUITE("report") {

TEST_CASE("pearson chi-square on hand-computed counts") {
  std::vector<double> uniform4(4, 0.25);

  auto [s0, p0] = chi_square({100, 100, 100, 100}, uniform4, 400);
  CHECK(s0 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p0 == doctest::Approx(1.0).epsilon(1e-12));

  // sum (O-E)^2/E = (900 + 100 + 100 + 100) / 100 = 12
  auto [s1, p1] = chi_square({130, 90, 90, 90}, uniform4, 400);
  CHECK(s1 == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(p1 > 0.006);
  CHECK(p1 < 0.009);  // chi-square(12, df=3) upper tail ~ 0.0074
}

TEST_CASE("sparse expected bins are rejected") {
  std::vector<double> expected{0.999, 0.001};
  CHECK_THROWS_AS(chi_square({999, 1}, expected, 1000), SparseBins);
}

TEST_CASE("two-sample statistic vanishes on identical counts") {
  auto [s, p] = chi_square_two_sample({50, 30, 20}, {50, 30, 20});
  CHECK(s == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
  auto [s2, p2] = chi_square_two_sample({100, 0}, {0, 100});
  CHECK(s2 == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(p2 < 1e-6);
}

TEST_CASE("json serialization round-trips losslessly") {
  ExperimentReport r;
  r.name = "clone-check";
  r.params["m"] = "4";
  r.params["n"] = "2";
  r.seed = 7;
  r.metrics["min_clone_fidelity"] = 0.99999999999999989;
  r.metrics["max_unitarity_residual"] = 3.0000000000000001e-16;
  r.bound = 1e-9;
  r.passed = true;
  r.runtime_ms = 12.5;

  ExperimentReport back = from_json(to_json(r));
  CHECK(back.name == r.name);
  CHECK(back.params == r.params);
  CHECK(back.seed == r.seed);
  CHECK(back.passed == r.passed);
  REQUIRE(back.bound.has_value());
  CHECK(*back.bound == *r.bound);
  REQUIRE(back.metrics.size() == r.metrics.size());
  for (const auto& [k, v] : r.metrics) CHECK(back.metrics.at(k) == v);
}

TEST_CASE("fingerprint covers metrics only and is replay-stable") {
  ExperimentReport a, b;
  a.name = b.name = "rohc";
  a.metrics["x"] = b.metrics["x"] = 0.125;
  a.runtime_ms = 1.0;
  b.runtime_ms = 99.0;  // runtime must not affect the fingerprint
  CHECK(metrics_fingerprint(a) == metrics_fingerprint(b));
  b.metrics["x"] = 0.1250000000000001;
  CHECK(metrics_fingerprint(a) != metrics_fingerprint(b));
}

TEST_CASE("csv projection mentions every metric key") {
  ExperimentReport r;
  r.name = "lemma-a";
  r.metrics["min_slack"] = 0.25;
  r.passed = true;
  std::string csv = to_csv(r);
  CHECK(csv.find("min_slack") != std::string::npos);
  CHECK(csv.find("lemma-a") != std::string::npos);
}

}
