// nogo.hpp
// Task interfaces (clone / telegraph / reconstruct), the two reduction
// theorems, the orthogonal-with-duplication equivalence constructions, the
// overlap lemma, oracle-swap (hybrid-argument) machinery with query
// magnitudes, and the multi-collision extraction experiment.
#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nogolab/report.hpp"
#include "nogolab/scheme.hpp"

namespace nogolab::nogo {

using qcore::DensityMatrix;
using qcore::PureState;

struct TelegraphProtocol {
  // send may be randomized over messages for a fixed input state
  std::function<std::string(const PureState&, RngStream&)> send;
  std::function<DensityMatrix(const std::string&)> receive;
  int message_budget_bits = 256;
};

struct Reconstructor {
  std::function<DensityMatrix(const std::string&)> reconstruct;
  int advice_budget_bits = 256;
};

// Send once, Receive twice independently; one sampled branch of the mixture
// (receive already returns the exact mixed output for its own randomness,
// the mixture over messages is realized by trial averaging).
DensityMatrix clone_via_telegraph(const TelegraphProtocol& p, const PureState& psi, RngStream& rng);

// Sample send() `trials` times, evaluate the receive fidelity of each
// distinct message against psi, return the argmax message and its fidelity.
std::pair<std::string, double> reconstructor_via_telegraph(const TelegraphProtocol& p,
                                                           const PureState& psi,
                                                           uint64_t trials, RngStream& rng);

// True iff every pairwise |<psi_i|psi_j>|^2 is within tol of 0 or of 1.
bool is_orthogonal_with_duplication(const std::vector<PureState>& states, double tol);

// For each pair with fractional overlap g (0 < |g| < 1), the constraint
// g = g^2 * x forces |x| = 1/|g| > 1, which no inner product of normalized
// states can reach. Returns the largest required |x| over all pairs
// (1.0 when the set is orthogonal-with-duplication).
double required_junk_overlap(const std::vector<PureState>& states, double tol);

// Measure in the completed basis, transmit the index, re-prepare.
TelegraphProtocol perfect_telegraph_for_orthogonal(const std::vector<PureState>& states);

// Wrap a perfect protocol so receive returns
// eta * |psi_c><psi_c| + (1 - eta) * |junk><junk| with junk orthogonal to
// every scheme state (exact, controllable eta).
TelegraphProtocol noised_protocol(const std::vector<PureState>& states, double eta,
                                  const PureState& junk);

// p1*p2 - 2*sqrt((1-p1)(1-p2)); may be negative, callers clamp for display.
double lemma_bound(double p1, double p2);

struct FixedUnitary {
  Mat u;
};
struct OracleCall {
  std::string slot;
  int target_bits = 0;  // query input register = basis index >> target_bits
};
using CircuitStep = std::variant<FixedUnitary, OracleCall>;

struct AdversaryCircuit {
  Vec initial;
  std::vector<CircuitStep> steps;
  // measured in the computational basis of the circuit's space
};

using OracleAssignment = std::map<std::string, Mat>;

struct CircuitRun {
  Vec final_state;
  std::vector<double> distribution;  // computational-basis outcome probabilities
};

CircuitRun run_circuit(const AdversaryCircuit& c, const OracleAssignment& oracles);

// q_y(|phi_i>) at each call time of `slot`, from the exact pre-call state.
// The slot's oracle must be a classical XOR oracle (permutation preserving
// the input register); NotClassicalOracle otherwise.
std::vector<double> query_magnitude(const AdversaryCircuit& c, const OracleAssignment& oracles,
                                    const std::string& slot, uint64_t y);

// F: set of (step index of an oracle call, query input value).
// eps = 2*sqrt(T * sum of query magnitudes over F); the factor 2 is the
// constant the hybrid-argument proof actually yields (per-call error
// ||(U - U')w|| <= 2||w||); the unnormalized sqrt(T * sum) is also reported.
harness::ExperimentReport oracle_swap_check(const AdversaryCircuit& c,
                                            const OracleAssignment& oracles,
                                            const OracleAssignment& modified,
                                            const std::set<std::pair<int, uint64_t>>& F);

// The hidden-cloner vs dummy configuration: the z-cloning oracle expressed
// as a classical indicator-function XOR oracle through the basis change
// D = C * (B (x) B); the dummy oracle maps to the identity.
struct HiddenClonerSwapConfig {
  scheme::ClassicalFunction h;
  uint32_t z = 0;
  AdversaryCircuit circuit;
  OracleAssignment with_cloner;  // indicator XOR oracle
  OracleAssignment with_dummy;   // identity
  std::set<std::pair<int, uint64_t>> F;
  uint64_t marked_input = 0;  // w0: the relabeled psi_z pair subspace
  Mat d_change;               // the basis change D itself
};

HiddenClonerSwapConfig make_hidden_cloner_swap_config(int m, int n, int calls, RngStream& rng);

harness::ExperimentReport collision_experiment(const Reconstructor& r,
                                               const scheme::ClassicalFunction& f,
                                               uint32_t z, int k, double eta,
                                               RngStream& rng,
                                               const std::string& advice = "");

}  // namespace nogolab::nogo
