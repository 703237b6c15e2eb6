// complexity.hpp
// The hidden-cloner oracle promise problem (YES: a z-cloning oracle,
// NO: identity), its verifier/cloner pair, the exact acceptance operator,
// and the combined verifier-cloner with its fidelity-loss composition.
#pragma once

#include <functional>
#include <optional>

#include "nogolab/report.hpp"
#include "nogolab/scheme.hpp"

namespace nogolab::complexity {

using qcore::DensityMatrix;
using qcore::OperatorMatrix;
using qcore::PureState;

enum class Truth { YES, NO };

struct RohcInstance {
  scheme::ClassicalFunction h;
  OperatorMatrix c;  // unitary on augmented(m) (x) augmented(m)
  Truth truth = Truth::NO;
  std::optional<uint32_t> z;  // YES only
};

RohcInstance generate_rohc(int m, int n, Truth truth, RngStream& rng);

// Pass witness (x) bot to the oracle, measure the second register against
// bot: acceptance probability ||(I - |bot><bot|)_2 C (psi (x) bot)||^2.
double rohc_verify(const RohcInstance& inst, const PureState& witness);

// The cloner is just a wrapper for the oracle.
DensityMatrix rohc_clone(const RohcInstance& inst, const PureState& witness);

// Hermitian M with <psi|M|psi> = rohc_verify(inst, psi) for every witness;
// top eigenvalue = max acceptance over witnesses (exact soundness check).
Mat acceptance_operator(const RohcInstance& inst);

// c^2 f - 2 sqrt((1 - c^2)(1 - f))
double composition_fidelity(double c, double f);

struct VerifierCloner {
  Mat accept_projector;  // on the witness space
  std::function<DensityMatrix(const DensityMatrix&)> cloner;  // -> two registers
  double c = 1.0, f = 1.0, s = 0.0;  // targets, informational
  std::string instance_tag;          // instance-aware variant metadata
};

struct CombinedResult {
  bool accepted = false;         // sampled (ignored in exact mode)
  double accept_probability = 0.0;
  DensityMatrix disturbed;       // rho~ = P rho P + (I-P) rho (I-P)
  DensityMatrix cloned;          // cloner(rho~)
};

// Compute-measure-uncompute the verifier, then clone the post-measurement
// mixture. exact_mode skips outcome sampling and hands the cloner the exact
// rho~ (both modes compute rho~ in closed form).
CombinedResult combined_verifier_cloner(const VerifierCloner& vc, const PureState& witness,
                                        RngStream& rng, bool exact_mode = false);

// Two-register unitary steering psi (x) bot toward psi (x) psi by a Givens
// rotation of the given angle; its clone fidelity on psi is sin(angle)^2.
// Used to build verifier-cloner pairs with a prescribed f.
Mat partial_cloner_unitary(const PureState& psi, const PureState& bot, double angle);

}  // namespace nogolab::complexity
