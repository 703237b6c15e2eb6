#include "nogolab/complexity.hpp"

#include <cmath>

namespace nogolab::complexity {

using qcore::kron;
using qcore::kron_vec;

RohcInstance generate_rohc(int m, int n, Truth truth, RngStream& rng) {
  RohcInstance inst;
  inst.h = scheme::sample_random_function(m, n, rng);
  inst.truth = truth;
  const Eigen::Index d2 = scheme::aug_dim(m) * scheme::aug_dim(m);
  if (truth == Truth::YES) {
    inst.z = scheme::sample_label(inst.h, rng);
    inst.c = scheme::z_cloning_oracle(inst.h, *inst.z);
  } else {
    OperatorMatrix id;
    id.mat = Mat::Identity(d2, d2);
    id.kind = qcore::OpKind::unitary;
    inst.c = id;
  }
  return inst;
}

namespace {
// A = (I - |bot><bot|)_2 * C * (. (x) bot): maps a witness to the
// accepted component of the oracle's second register.
Mat acceptance_map(const RohcInstance& inst) {
  const Eigen::Index d = scheme::aug_dim(inst.h.m);
  const Eigen::Index bot = scheme::bot_index(inst.h.m);
  Mat a = Mat::Zero(d * d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Vec in = Vec::Zero(d * d);
    in(j * d + bot) = 1.0;
    Vec out = inst.c.mat * in;
    for (Eigen::Index x = 0; x < d; ++x) out(x * d + bot) = 0.0;  // project off bot_2
    a.col(j) = out;
  }
  return a;
}
}  // namespace

double rohc_verify(const RohcInstance& inst, const PureState& witness) {
  const Eigen::Index d = scheme::aug_dim(inst.h.m);
  if (witness.dim() != d) throw DimensionMismatch("witness space");
  Vec in = kron_vec(witness.amp, scheme::bot_state(inst.h.m).amp);
  Vec out = inst.c.mat * in;
  const Eigen::Index bot = scheme::bot_index(inst.h.m);
  for (Eigen::Index x = 0; x < d; ++x) out(x * d + bot) = 0.0;
  return out.squaredNorm();
}

DensityMatrix rohc_clone(const RohcInstance& inst, const PureState& witness) {
  const Eigen::Index d = scheme::aug_dim(inst.h.m);
  if (witness.dim() != d) throw DimensionMismatch("witness space");
  Vec in = kron_vec(witness.amp, scheme::bot_state(inst.h.m).amp);
  Vec out = inst.c.mat * in;
  DensityMatrix rho;
  rho.rho = out * out.adjoint();
  rho.dim_tag = witness.dim_tag + "*" + witness.dim_tag;
  return rho;
}

Mat acceptance_operator(const RohcInstance& inst) {
  Mat a = acceptance_map(inst);
  return a.adjoint() * a;
}

double composition_fidelity(double c, double f) {
  if (c < 0.0 || c > 1.0 || f < 0.0 || f > 1.0) throw OutOfRange("composition_fidelity");
  return c * c * f - 2.0 * std::sqrt((1.0 - c * c) * (1.0 - f));
}

CombinedResult combined_verifier_cloner(const VerifierCloner& vc, const PureState& witness,
                                        RngStream& rng, bool exact_mode) {
  const Eigen::Index d = witness.dim();
  if (vc.accept_projector.rows() != d) throw DimensionMismatch("verifier projector");
  const Mat& p = vc.accept_projector;
  CombinedResult res;
  res.accept_probability = witness.amp.dot(p * witness.amp).real();
  res.accepted = exact_mode ? true : (rng.uniform() < res.accept_probability);
  Mat rho = witness.amp * witness.amp.adjoint();
  Mat q = Mat::Identity(d, d) - p;
  res.disturbed.rho = p * rho * p + q * rho * q;
  res.disturbed.dim_tag = witness.dim_tag;
  res.cloned = vc.cloner(res.disturbed);
  return res;
}

Mat partial_cloner_unitary(const PureState& psi, const PureState& bot, double angle) {
  const Eigen::Index d = psi.dim();
  if (bot.dim() != d) throw DimensionMismatch();
  Vec a = kron_vec(psi.amp, bot.amp);   // psi (x) bot
  Vec t = kron_vec(psi.amp, psi.amp);   // psi (x) psi
  // psi is orthogonal to bot, so <a|t> = 0 and (a, t) span a plane
  const double c = std::cos(angle), s = std::sin(angle);
  Mat u = Mat::Identity(d * d, d * d);
  u += (c - 1.0) * (a * a.adjoint() + t * t.adjoint())
     + s * (t * a.adjoint() - a * t.adjoint());
  return u;
}

}  // namespace nogolab::complexity
