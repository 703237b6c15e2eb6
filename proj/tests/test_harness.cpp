#include "doctest.h"
#include "nogolab/harness.hpp"

using namespace nogolab;
using namespace nogolab::harness;

TEST_SUITE("harness") {

TEST_CASE("catalog holds exactly the documented experiments") {
  const auto& names = experiment_catalog();
  CHECK(names.size() == 13);
  for (const char* expect :
       {"clone-check", "impostor-identity", "impostor-dist", "impostor-bound",
        "ratio-bound", "nogo-equiv", "lemma-a", "bbbv-swap", "telegraph-reductions",
        "collisions", "rohc", "composition", "nepke-demo"}) {
    bool found = false;
    for (const auto& n : names) found = found || (n == expect);
    CHECK_MESSAGE(found, expect);
  }
}

TEST_CASE("unknown names and over-cap sizes are rejected") {
  RunConfig cfg;
  cfg.experiment = "does-not-exist";
  CHECK_THROWS_AS(run_experiment(cfg), UnknownExperiment);
  cfg.experiment = "clone-check";
  cfg.m = m_cap() + 1;
  CHECK_THROWS_AS(run_experiment(cfg), CapExceeded);
  cfg.m = 2;
  cfg.trials = 0;
  CHECK_THROWS_AS(run_experiment(cfg), InconsistentInputs);
}

TEST_CASE("clone-check at m=4, n=2 passes with fidelity 1") {
  RunConfig cfg;
  cfg.experiment = "clone-check";
  cfg.m = 4;
  cfg.n = 2;
  cfg.trials = 3;
  cfg.seed = 7;
  auto rep = run_experiment(cfg);
  CHECK(rep.passed);
  CHECK(rep.metrics.at("min_clone_fidelity") >= 1.0 - 1e-9);
  CHECK(rep.metrics.at("max_unitarity_residual") <= 1e-9);
  CHECK(rep.name == "clone-check");
  CHECK(rep.params.at("m") == "4");
}

TEST_CASE("rohc suite reports a vanishing NO acceptance norm") {
  RunConfig cfg;
  cfg.experiment = "rohc";
  cfg.m = 3;
  cfg.n = 1;
  cfg.trials = 6;
  cfg.seed = 11;
  auto rep = run_experiment(cfg);
  CHECK(rep.passed);
  CHECK(rep.metrics.at("max_no_acceptance_norm") <= 1e-9);
  CHECK(rep.metrics.at("min_yes_completeness") >= 1.0 - 1e-9);
}

TEST_CASE("replaying a config reproduces bit-identical metrics") {
  RunConfig cfg;
  cfg.experiment = "lemma-a";
  cfg.trials = 200;
  cfg.seed = 99;
  auto a = run_experiment(cfg);
  auto b = run_experiment(cfg);
  CHECK(metrics_fingerprint(a) == metrics_fingerprint(b));
  cfg.seed = 100;
  auto c = run_experiment(cfg);
  CHECK(metrics_fingerprint(a) != metrics_fingerprint(c));
}

TEST_CASE("reports render in both formats") {
  RunConfig cfg;
  cfg.experiment = "lemma-a";
  cfg.trials = 50;
  cfg.seed = 1;
  auto rep = run_experiment(cfg);
  std::string js = render_report(rep, "json");
  CHECK(js.find("min_slack") != std::string::npos);
  std::string csv = render_report(rep, "csv");
  CHECK(csv.find("min_slack") != std::string::npos);
  CHECK_THROWS_AS(render_report(rep, "yaml"), InconsistentInputs);
  // canonical JSON round-trip preserves the fingerprint
  CHECK(metrics_fingerprint(from_json(js)) == metrics_fingerprint(rep));
}

TEST_CASE("tolerance override is honored and restored") {
  const double before = default_tol();
  RunConfig cfg;
  cfg.experiment = "lemma-a";
  cfg.trials = 10;
  cfg.seed = 2;
  cfg.tol = 1e-6;
  auto rep = run_experiment(cfg);
  CHECK(rep.passed);
  CHECK(default_tol() == before);
}

}
