// harness.hpp
// Experiment catalog and dispatch. Each experiment wires module operations
// into a seeded, reproducible run that yields one ExperimentReport.
//
// Catalog: clone-check, impostor-identity, impostor-dist, impostor-bound,
// ratio-bound, nogo-equiv, lemma-a, bbbv-swap, telegraph-reductions,
// collisions, rohc, composition, nepke-demo.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nogolab/report.hpp"

namespace nogolab::harness {

struct RunConfig {
  std::string experiment;
  int m = 4;
  int n = 2;
  uint64_t trials = 10;
  int k = 4;
  double eta = 1.0;
  std::optional<double> tol;  // overrides default_tol() for the run
  uint64_t seed = 1;
  std::string out;            // report file path; empty = stdout only
  std::string format = "json";
};

const std::vector<std::string>& experiment_catalog();

// Dispatch on cfg.experiment; deterministic given cfg.seed.
// Throws UnknownExperiment for names outside the catalog and CapExceeded
// when m is over the cap.
ExperimentReport run_experiment(const RunConfig& cfg);

// Render per cfg.format ("json" canonical, "csv" flat projection).
std::string render_report(const ExperimentReport& r, const std::string& format);

}  // namespace nogolab::harness
