// common.hpp
// Shared scalar/matrix aliases, tolerance knobs, and the error taxonomy.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nogolab {

using cx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

// Global absolute tolerance for exact-linear-algebra checks. Overridable
// (e.g. via the CLI --tol flag); everything numeric reads it at call time.
inline double& default_tol() {
  static double tol = 1e-9;
  return tol;
}

// Hard cap on the domain bit-width m; two-register operators grow as
// (2^m+1)^4 so this guards memory. NOGOLAB_CAP overrides it in the CLI.
inline int& m_cap() {
  static int cap = 6;
  return cap;
}

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { explicit DimensionMismatch(const std::string& w = "DimensionMismatch") : Error(w) {} };
struct DegenerateOutcome : Error { explicit DegenerateOutcome(const std::string& w = "DegenerateOutcome") : Error(w) {} };
struct NotOrthonormal : Error { explicit NotOrthonormal(const std::string& w = "NotOrthonormal") : Error(w) {} };
struct NoPreimage : Error { explicit NoPreimage(const std::string& w = "NoPreimage") : Error(w) {} };
struct CapExceeded : Error { explicit CapExceeded(const std::string& w = "CapExceeded") : Error(w) {} };
struct CodomainTooSmall : Error { explicit CodomainTooSmall(const std::string& w = "CodomainTooSmall") : Error(w) {} };
struct InconsistentInputs : Error { explicit InconsistentInputs(const std::string& w = "InconsistentInputs") : Error(w) {} };
struct InsufficientTrials : Error { explicit InsufficientTrials(const std::string& w = "InsufficientTrials") : Error(w) {} };
struct NotOrthogonal : Error { explicit NotOrthogonal(const std::string& w = "NotOrthogonal") : Error(w) {} };
struct NoMessageObserved : Error { explicit NoMessageObserved(const std::string& w = "NoMessageObserved") : Error(w) {} };
struct UnknownSlot : Error { explicit UnknownSlot(const std::string& w = "UnknownSlot") : Error(w) {} };
struct NotClassicalOracle : Error { explicit NotClassicalOracle(const std::string& w = "NotClassicalOracle") : Error(w) {} };
struct InconsistentModification : Error { explicit InconsistentModification(const std::string& w = "InconsistentModification") : Error(w) {} };
struct OutOfRange : Error { explicit OutOfRange(const std::string& w = "OutOfRange") : Error(w) {} };
struct SamplerFailure : Error { explicit SamplerFailure(const std::string& w = "SamplerFailure") : Error(w) {} };
struct UnknownExperiment : Error { explicit UnknownExperiment(const std::string& w = "UnknownExperiment") : Error(w) {} };
struct SparseBins : Error { explicit SparseBins(const std::string& w = "SparseBins") : Error(w) {} };

}  // namespace nogolab
