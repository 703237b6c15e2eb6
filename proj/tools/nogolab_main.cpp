// nogolab: run one catalog experiment and emit its report.
// Exit code 0 iff the experiment passed, 1 if it ran but failed, 2 on error.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "nogolab/harness.hpp"

int main(int argc, char** argv) {
  using namespace nogolab;

  CLI::App app{"nogolab: cloning-vs-telegraphing experiment runner"};
  harness::RunConfig cfg;
  std::string catalog_help = "experiment name:";
  for (const auto& name : harness::experiment_catalog()) catalog_help += " " + name;

  double tol_value = 0.0;
  app.add_option("experiment", cfg.experiment, catalog_help)->required();
  app.add_option("--m", cfg.m, "domain bit-width");
  app.add_option("--n", cfg.n, "codomain bit-width");
  app.add_option("--trials", cfg.trials, "trials / seeds / bundles");
  app.add_option("--seed", cfg.seed, "experiment seed");
  app.add_option("--k", cfg.k, "collision target k");
  app.add_option("--eta", cfg.eta, "success / noise parameter eta");
  auto* tol_opt = app.add_option("--tol", tol_value, "override the default 1e-9 tolerance");
  app.add_option("--out", cfg.out, "write the report to this path");
  app.add_option("--format", cfg.format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  CLI11_PARSE(app, argc, argv);
  if (tol_opt->count() > 0) cfg.tol = tol_value;

  // memory guard override: two-register operators grow as (2^m+1)^4
  if (const char* cap = std::getenv("NOGOLAB_CAP")) {
    const int v = std::atoi(cap);
    if (v >= 1) m_cap() = v;
  }

  try {
    harness::ExperimentReport rep = harness::run_experiment(cfg);
    const std::string text = harness::render_report(rep, cfg.format);
    std::cout << text << "\n";
    if (!cfg.out.empty()) {
      std::ofstream os(cfg.out);
      if (!os) {
        std::cerr << "error: cannot write " << cfg.out << "\n";
        return 2;
      }
      os << text << "\n";
    }
    return rep.passed ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
