// qcore.hpp
// Exact dense complex linear algebra: states, density matrices, unitaries,
// projective measurement, fidelity, norms. Basis convention everywhere:
// computational indices 0..2^m-1, the distinguished bottom symbol at 2^m.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nogolab/common.hpp"
#include "nogolab/rng.hpp"

namespace nogolab::qcore {

struct PureState {
  Vec amp;
  std::string dim_tag;  // e.g. "augmented(4)" or "qubits(3)"

  PureState() = default;
  PureState(Vec a, std::string tag);  // validates unit norm

  Eigen::Index dim() const { return amp.size(); }
};

struct DensityMatrix {
  Mat rho;
  std::string dim_tag;

  DensityMatrix() = default;
  DensityMatrix(Mat r, std::string tag);  // validates Hermitian, trace 1, PSD

  Eigen::Index dim() const { return rho.rows(); }
};

enum class OpKind { unitary, projector, general };

struct OperatorMatrix {
  Mat mat;
  OpKind kind = OpKind::general;

  OperatorMatrix() = default;
  OperatorMatrix(Mat m, OpKind k);  // validates the claimed kind

  Eigen::Index dim() const { return mat.rows(); }
};

struct Pvm {
  std::vector<Mat> operators;

  explicit Pvm(std::vector<Mat> ops);  // validates completeness + orthogonality
  Eigen::Index dim() const { return operators.empty() ? 0 : operators[0].rows(); }
};

// The computational-basis PVM on a d-dimensional space.
Pvm computational_pvm(Eigen::Index d);

PureState tensor(const PureState& a, const PureState& b);
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);
Mat kron(const Mat& a, const Mat& b);
Vec kron_vec(const Vec& a, const Vec& b);

PureState apply(const OperatorMatrix& u, const PureState& s);
DensityMatrix apply(const OperatorMatrix& u, const DensityMatrix& s);

// <psi| rho |psi>
double fidelity(const DensityMatrix& rho, const PureState& psi);
// |<a|b>|^2 convenience for pure inputs
double pure_fidelity(const PureState& a, const PureState& b);

DensityMatrix to_density(const PureState& psi);

// Exact outcome distribution tr(Pi_k rho); sums to 1.
std::vector<double> exact_distribution(const Pvm& pvm, const DensityMatrix& rho);
std::vector<double> exact_distribution(const Pvm& pvm, const PureState& psi);

// Sampled projective measurement; returns (outcome, post-measurement state).
std::pair<int, DensityMatrix> measure(const Pvm& pvm, const DensityMatrix& rho, RngStream& rng);
std::pair<int, PureState> measure(const Pvm& pvm, const PureState& psi, RngStream& rng);

// Largest singular value (exact SVD; no normal-equation squaring, which
// would lose half the digits near zero and break 1e-9 residual checks).
double operator_norm(const Mat& a);
inline double operator_norm(const OperatorMatrix& a) { return operator_norm(a.mat); }

// Haar-ish random unitary: QR of a complex Gaussian matrix with the R
// diagonal phases folded in. Deterministic given the stream.
Mat random_unitary(Eigen::Index d, RngStream& rng);
// Random unit vector (complex Gaussian, normalized).
Vec random_unit_vector(Eigen::Index d, RngStream& rng);

}  // namespace nogolab::qcore
