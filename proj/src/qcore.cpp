#include "nogolab/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace nogolab::qcore {

PureState::PureState(Vec a, std::string tag) : amp(std::move(a)), dim_tag(std::move(tag)) {
  double nrm = amp.norm();
  if (std::abs(nrm - 1.0) > default_tol())
    throw DimensionMismatch("PureState norm " + std::to_string(nrm) + " != 1");
}

DensityMatrix::DensityMatrix(Mat r, std::string tag) : rho(std::move(r)), dim_tag(std::move(tag)) {
  if (rho.rows() != rho.cols()) throw DimensionMismatch("DensityMatrix not square");
  const double tol = default_tol();
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw DimensionMismatch("DensityMatrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw DimensionMismatch("DensityMatrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol)
    throw DimensionMismatch("DensityMatrix not PSD");
}

OperatorMatrix::OperatorMatrix(Mat m, OpKind k) : mat(std::move(m)), kind(k) {
  if (mat.rows() != mat.cols()) throw DimensionMismatch("OperatorMatrix not square");
  const double tol = default_tol();
  const Eigen::Index d = mat.rows();
  if (kind == OpKind::unitary) {
    Mat r = mat.adjoint() * mat - Mat::Identity(d, d);
    if (operator_norm(r) > tol) throw DimensionMismatch("claimed unitary is not");
  } else if (kind == OpKind::projector) {
    if ((mat - mat.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw DimensionMismatch("claimed projector not Hermitian");
    if (operator_norm(Mat(mat * mat - mat)) > tol)
      throw DimensionMismatch("claimed projector not idempotent");
  }
}

Pvm::Pvm(std::vector<Mat> ops) : operators(std::move(ops)) {
  if (operators.empty()) throw DimensionMismatch("empty Pvm");
  const double tol = default_tol();
  const Eigen::Index d = operators[0].rows();
  Mat sum = Mat::Zero(d, d);
  for (const auto& p : operators) {
    if (p.rows() != d || p.cols() != d) throw DimensionMismatch("Pvm element shape");
    sum += p;
  }
  if (operator_norm(Mat(sum - Mat::Identity(d, d))) > tol)
    throw DimensionMismatch("Pvm not complete");
  for (size_t j = 0; j < operators.size(); ++j)
    for (size_t k = j + 1; k < operators.size(); ++k)
      if (operator_norm(Mat(operators[j] * operators[k])) > tol)
        throw DimensionMismatch("Pvm elements not orthogonal");
}

Pvm computational_pvm(Eigen::Index d) {
  std::vector<Mat> ops;
  ops.reserve(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Mat p = Mat::Zero(d, d);
    p(k, k) = 1.0;
    ops.push_back(std::move(p));
  }
  return Pvm(std::move(ops));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec kron_vec(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState out;
  out.amp = kron_vec(a.amp, b.amp);
  out.dim_tag = a.dim_tag + "*" + b.dim_tag;
  return out;
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out;
  out.mat = kron(a.mat, b.mat);
  out.kind = (a.kind == b.kind) ? a.kind : OpKind::general;
  return out;
}

PureState apply(const OperatorMatrix& u, const PureState& s) {
  if (u.dim() != s.dim()) throw DimensionMismatch("apply: operator vs state");
  PureState out;
  out.amp = u.mat * s.amp;
  out.dim_tag = s.dim_tag;
  return out;
}

DensityMatrix apply(const OperatorMatrix& u, const DensityMatrix& s) {
  if (u.dim() != s.dim()) throw DimensionMismatch("apply: operator vs density");
  DensityMatrix out;
  out.rho = u.mat * s.rho * u.mat.adjoint();
  out.dim_tag = s.dim_tag;
  return out;
}

double fidelity(const DensityMatrix& rho, const PureState& psi) {
  if (rho.dim() != psi.dim()) throw DimensionMismatch("fidelity");
  cx v = psi.amp.dot(rho.rho * psi.amp);  // Eigen dot conjugates the left arg
  return v.real();
}

double pure_fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("pure_fidelity");
  return std::norm(a.amp.dot(b.amp));
}

DensityMatrix to_density(const PureState& psi) {
  DensityMatrix out;
  out.rho = psi.amp * psi.amp.adjoint();
  out.dim_tag = psi.dim_tag;
  return out;
}

std::vector<double> exact_distribution(const Pvm& pvm, const DensityMatrix& rho) {
  if (pvm.dim() != rho.dim()) throw DimensionMismatch("exact_distribution");
  std::vector<double> probs;
  probs.reserve(pvm.operators.size());
  for (const auto& p : pvm.operators) probs.push_back((p * rho.rho).trace().real());
  return probs;
}

std::vector<double> exact_distribution(const Pvm& pvm, const PureState& psi) {
  if (pvm.dim() != psi.dim()) throw DimensionMismatch("exact_distribution");
  std::vector<double> probs;
  probs.reserve(pvm.operators.size());
  for (const auto& p : pvm.operators)
    probs.push_back(psi.amp.dot(p * psi.amp).real());
  return probs;
}

namespace {
int sample_outcome(const std::vector<double>& probs, RngStream& rng) {
  // Resample guard: a drawn outcome with vanishing probability would give a
  // meaningless post-state, so redraw (DegenerateOutcome after 64 tries).
  for (int attempt = 0; attempt < 64; ++attempt) {
    double u = rng.uniform();
    double acc = 0.0;
    int pick = static_cast<int>(probs.size()) - 1;
    for (size_t k = 0; k < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) { pick = static_cast<int>(k); break; }
    }
    if (probs[pick] >= 1e-12) return pick;
  }
  throw DegenerateOutcome();
}
}  // namespace

std::pair<int, DensityMatrix> measure(const Pvm& pvm, const DensityMatrix& rho, RngStream& rng) {
  auto probs = exact_distribution(pvm, rho);
  int k = sample_outcome(probs, rng);
  DensityMatrix post;
  post.rho = pvm.operators[k] * rho.rho * pvm.operators[k] / probs[k];
  post.dim_tag = rho.dim_tag;
  return {k, post};
}

std::pair<int, PureState> measure(const Pvm& pvm, const PureState& psi, RngStream& rng) {
  auto probs = exact_distribution(pvm, psi);
  int k = sample_outcome(probs, rng);
  PureState post;
  post.amp = (pvm.operators[k] * psi.amp) / std::sqrt(probs[k]);
  post.dim_tag = psi.dim_tag;
  return {k, post};
}

double operator_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  if (a.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  Eigen::BDCSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

Mat random_unitary(Eigen::Index d, RngStream& rng) {
  Mat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      g(i, j) = cx(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    cx rjj = r(j, j);
    cx phase = (std::abs(rjj) > 0) ? rjj / std::abs(rjj) : cx(1, 0);
    q.col(j) *= phase;
  }
  return q;
}

Vec random_unit_vector(Eigen::Index d, RngStream& rng) {
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = cx(rng.normal(), rng.normal());
  v.normalize();
  return v;
}

}  // namespace nogolab::qcore
