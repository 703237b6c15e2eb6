// report.hpp
// ExperimentReport plus serialization (JSON canonical, CSV projection) and
// the Pearson chi-square helpers used by the sampling-equivalence tests.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nogolab/common.hpp"

namespace nogolab::harness {

struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> params;
  uint64_t seed = 0;
  std::map<std::string, double> metrics;  // ordered map -> stable serialization
  std::optional<double> bound;
  bool passed = false;
  double runtime_ms = 0.0;
};

// Canonical JSON (floats at 17 significant digits, keys sorted).
std::string to_json(const ExperimentReport& r);
ExperimentReport from_json(const std::string& text);

// Flat CSV projection: header row of metric keys + name/seed/bound/passed.
std::string to_csv(const ExperimentReport& r);

// Serialize only the metrics map; used for bit-identical replay checks
// (runtime_ms deliberately excluded).
std::string metrics_fingerprint(const ExperimentReport& r);

// Pearson one-sample chi-square: observed counts vs expected probabilities.
// Requires every expected*total >= 5 (SparseBins otherwise).
std::pair<double, double> chi_square(const std::vector<uint64_t>& observed,
                                     const std::vector<double>& expected,
                                     uint64_t total);

// Two-sample chi-square over paired counts (equal totals):
// stat = sum (o1-o2)^2/(o1+o2) over occupied bins, df = occupied - 1.
std::pair<double, double> chi_square_two_sample(const std::vector<uint64_t>& o1,
                                                const std::vector<uint64_t>& o2);

// Upper-tail p-value of the chi-square distribution.
double chi_square_pvalue(double stat, double dof);

}  // namespace nogolab::harness
