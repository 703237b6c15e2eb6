#include "nogolab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

namespace nogolab::harness {

namespace {
std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

std::string to_json(const ExperimentReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["seed"] = r.seed;
  // Floats carried as 17-significant-digit strings so the canonical file is
  // byte-stable regardless of the JSON library's float formatter.
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = fmt17(v);
  j["metrics"] = metrics;
  if (r.bound) j["bound"] = fmt17(*r.bound); else j["bound"] = nullptr;
  j["passed"] = r.passed;
  j["runtime_ms"] = r.runtime_ms;
  return j.dump(2);
}

ExperimentReport from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  ExperimentReport r;
  r.name = j.at("name").get<std::string>();
  for (auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
  r.seed = j.at("seed").get<uint64_t>();
  for (auto& [k, v] : j.at("metrics").items()) r.metrics[k] = std::stod(v.get<std::string>());
  if (!j.at("bound").is_null()) r.bound = std::stod(j.at("bound").get<std::string>());
  r.passed = j.at("passed").get<bool>();
  r.runtime_ms = j.at("runtime_ms").get<double>();
  return r;
}

std::string to_csv(const ExperimentReport& r) {
  std::ostringstream head, row;
  head << "name,seed,passed,bound";
  row << r.name << "," << r.seed << "," << (r.passed ? 1 : 0) << ",";
  if (r.bound) row << fmt17(*r.bound);
  for (const auto& [k, v] : r.metrics) {
    head << "," << k;
    row << "," << fmt17(v);
  }
  return head.str() + "\n" + row.str() + "\n";
}

std::string metrics_fingerprint(const ExperimentReport& r) {
  std::ostringstream os;
  for (const auto& [k, v] : r.metrics) os << k << "=" << fmt17(v) << ";";
  return os.str();
}

double chi_square_pvalue(double stat, double dof) {
  if (stat <= 0.0) return 1.0;
  if (dof <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

std::pair<double, double> chi_square(const std::vector<uint64_t>& observed,
                                     const std::vector<double>& expected,
                                     uint64_t total) {
  if (observed.size() != expected.size()) throw DimensionMismatch("chi_square bins");
  double psum = 0.0;
  for (double e : expected) psum += e;
  if (std::abs(psum - 1.0) > default_tol() * expected.size() + 1e-9)
    throw OutOfRange("expected probabilities must sum to 1");
  double stat = 0.0;
  for (size_t k = 0; k < observed.size(); ++k) {
    const double e = expected[k] * double(total);
    if (e < 5.0) throw SparseBins("expected bin count below 5");
    const double d = double(observed[k]) - e;
    stat += d * d / e;
  }
  return {stat, chi_square_pvalue(stat, double(observed.size()) - 1.0)};
}

std::pair<double, double> chi_square_two_sample(const std::vector<uint64_t>& o1,
                                                const std::vector<uint64_t>& o2) {
  if (o1.size() != o2.size()) throw DimensionMismatch("chi_square_two_sample bins");
  double stat = 0.0;
  size_t occupied = 0;
  for (size_t k = 0; k < o1.size(); ++k) {
    const double a = double(o1[k]), b = double(o2[k]);
    if (a + b == 0.0) continue;
    ++occupied;
    const double d = a - b;
    stat += d * d / (a + b);
  }
  if (occupied < 2) throw SparseBins("fewer than two occupied bins");
  return {stat, chi_square_pvalue(stat, double(occupied) - 1.0)};
}

}  // namespace nogolab::harness
