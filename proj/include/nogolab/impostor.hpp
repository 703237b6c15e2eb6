// impostor.hpp
// The impostor-oracle stage: private/impostor function sampling, the
// U1/U2/U2-hat decomposition of the impostor cloning oracle, the rotation
// spectrum between the impostor and private preimage bases, and the
// sampling-equivalence and preimage-ratio experiments.
//
// Register layout for the sandwich operators: one ancilla qubit in front of
// two augmented(m) registers, basis index b*d^2 + x*d + y with d = 2^m + 1.
// The ancilla is initialized to |0>; operator identities are therefore
// checked on the ancilla-0 input columns (all output rows kept, so any
// leakage into ancilla-1 counts against the residual).
#pragma once

#include "nogolab/report.hpp"
#include "nogolab/scheme.hpp"

namespace nogolab::impostor {

using scheme::ClassicalFunction;
using qcore::OperatorMatrix;

struct ImpostorBundle {
  ClassicalFunction h;
  ClassicalFunction h_private;   // codomain excludes z
  ClassicalFunction h_impostor;  // z where h hits z, h_private elsewhere
  uint32_t z = 0;
  int k_z = 0;                     // |h^{-1}(z)|
  std::vector<int> k_i;            // per label i: |h_impostor^{-1}(i)|, i != z
  std::vector<int> k_z_to_i;       // per label i: |{x : h(x)=z, h_private(x)=i}|
};

// Each entry uniform over {0,1}^n \ {z}.
ClassicalFunction sample_private_function(const ClassicalFunction& h, uint32_t z, RngStream& rng);

// h_impostor(x) = z when h(x) = z, else h_private(x).
ClassicalFunction build_impostor(const ClassicalFunction& h, const ClassicalFunction& h_private, uint32_t z);

ImpostorBundle make_bundle(const ClassicalFunction& h, uint32_t z, RngStream& rng);
// Random h, z drawn as the image of a random domain element.
ImpostorBundle sample_bundle(int m, int n, RngStream& rng);

OperatorMatrix exact_impostor_cloner(const ImpostorBundle& b);

// Ancilla flip controlled on "first main register is a preimage of z in h".
OperatorMatrix build_u1(const ImpostorBundle& b);
// Ancilla-1 block: z-cloning oracle; ancilla-0 block: impostor cloner.
OperatorMatrix build_u2(const ImpostorBundle& b);
// Ancilla-1 block: z-cloning oracle; ancilla-0 block: private-function cloner.
OperatorMatrix build_u2_hat(const ImpostorBundle& b);
// U1 * U2_hat * U1.
OperatorMatrix efficient_impostor_cloner(const ImpostorBundle& b);

// Query accounting for one application of the efficient cloner.
struct QueryBudget {
  int h_queries = 2;       // the two U1 ancilla flips
  int z_clone_queries = 1; // the controlled z-cloning block
};
QueryBudget query_budget();

struct RotationEntry {
  uint32_t label = 0;
  int k_i = 0;
  int k_z_to_i = 0;
  double theta = 0.0;            // arccos(sqrt(k_i/(k_i+k_z_to_i)))
  double lambda = 0.0;           // sqrt(2(1-cos theta))
  double inner_explicit = 0.0;   // <psi_i|psi_hat_i> from explicit states
  double lambda_explicit = 0.0;  // sqrt(2(1-inner_explicit))
};

// One entry per label i != z with k_i + k_z_to_i > 0.
std::vector<RotationEntry> rotation_spectrum(const ImpostorBundle& b);
double max_lambda(const std::vector<RotationEntry>& spec);

// Explicit rotation unitary on augmented(m): rotates psi_i toward the
// reassigned-preimage direction by theta_i in each (disjoint) plane.
// Degenerate planes (k_i = 0, so the impostor-side vector vanishes) are
// left as identity; the spectrum still reports their lambda = sqrt(2).
Mat build_u3(const ImpostorBundle& b);

// Delta = ||C_hat - I (x) C_impostor||_op on ancilla-0 input columns,
// checked against 4*max|lambda|; also reconstructs U3 and evaluates the
// five-factor identity U1 (U3+ (x) U3+) U2 (U3 (x) U3) U1 (both rotation
// orientations; the smaller residual is reported).
harness::ExperimentReport hat_distance_check(const ImpostorBundle& b);

harness::ExperimentReport ratio_bound_report(const ImpostorBundle& b);
// Counts-only Monte-Carlo (no matrices), reachable at large m.
harness::ExperimentReport ratio_bound_counts(int m, int n, int num_seeds, RngStream& rng);

enum class SamplingArm { faithful, mutated, selftest };
// Chi-square comparison of (z, H_impostor) from the construction against
// (z, H) from rejection sampling of the image-weighted joint distribution.
// mutated: the private function may output z (should be detected);
// selftest: both arms use the construction (null calibration).
harness::ExperimentReport sampling_equivalence_test(int m, int n, uint64_t trials,
                                                    RngStream& rng,
                                                    SamplingArm arm = SamplingArm::faithful);

// Optional check of the fixed-point (bot,bot) construction of a controlled
// z-cloner: verifies C_z fixes bot (x) bot and that the reduced sandwich
// matches the directly assembled controlled block matrix.
double footnote_controlled_clone_residual(const ImpostorBundle& b);

double u1_u2_commutator_norm(const ImpostorBundle& b);

}  // namespace nogolab::impostor
