#include "nogolab/nogo.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

namespace nogolab::nogo {

using qcore::kron;
using qcore::kron_vec;
using qcore::operator_norm;

DensityMatrix clone_via_telegraph(const TelegraphProtocol& p, const PureState& psi, RngStream& rng) {
  const Eigen::Index d = psi.dim();
  try {
    std::string c = p.send(psi, rng);
    if (int(c.size()) * 8 > p.message_budget_bits) throw Error("message budget exceeded");
    DensityMatrix r1 = p.receive(c);
    DensityMatrix r2 = p.receive(c);
    DensityMatrix out;
    out.rho = kron(r1.rho, r2.rho);
    out.dim_tag = r1.dim_tag + "*" + r2.dim_tag;
    return out;
  } catch (const Error&) {
    // protocol failures become zero-fidelity outcomes, never exceptions
    DensityMatrix out;
    out.rho = Mat::Identity(d * d, d * d) / double(d * d);
    out.dim_tag = psi.dim_tag + "*" + psi.dim_tag;
    return out;
  }
}

std::pair<std::string, double> reconstructor_via_telegraph(const TelegraphProtocol& p,
                                                           const PureState& psi,
                                                           uint64_t trials, RngStream& rng) {
  if (trials == 0) throw NoMessageObserved();
  std::map<std::string, double> fid;  // ordered map: deterministic tie-break
  for (uint64_t t = 0; t < trials; ++t) {
    RngStream trial = rng.child(t);
    std::string c = p.send(psi, trial);
    if (!fid.count(c)) fid[c] = qcore::fidelity(p.receive(c), psi);
  }
  auto best = fid.begin();
  for (auto it = fid.begin(); it != fid.end(); ++it)
    if (it->second > best->second) best = it;
  return {best->first, best->second};
}

bool is_orthogonal_with_duplication(const std::vector<PureState>& states, double tol) {
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = i + 1; j < states.size(); ++j) {
      if (states[i].dim() != states[j].dim()) throw DimensionMismatch();
      double o = std::norm(states[i].amp.dot(states[j].amp));
      if (o > tol && std::abs(o - 1.0) > tol) return false;
    }
  return true;
}

double required_junk_overlap(const std::vector<PureState>& states, double tol) {
  double worst = 1.0;
  for (size_t i = 0; i < states.size(); ++i)
    for (size_t j = i + 1; j < states.size(); ++j) {
      double g = std::abs(states[i].amp.dot(states[j].amp));
      if (g > tol && g < 1.0 - tol) worst = std::max(worst, 1.0 / g);
    }
  return worst;
}

namespace {
// Distinct representatives up to global phase, plus per-state index map.
std::pair<std::vector<Vec>, std::vector<int>> dedupe_up_to_phase(
    const std::vector<PureState>& states, double tol) {
  std::vector<Vec> reps;
  std::vector<int> idx(states.size(), -1);
  for (size_t i = 0; i < states.size(); ++i) {
    for (size_t r = 0; r < reps.size(); ++r)
      if (std::abs(std::norm(reps[r].dot(states[i].amp)) - 1.0) <= tol) {
        idx[i] = int(r);
        break;
      }
    if (idx[i] < 0) {
      reps.push_back(states[i].amp);
      idx[i] = int(reps.size()) - 1;
    }
  }
  return {reps, idx};
}
}  // namespace

TelegraphProtocol perfect_telegraph_for_orthogonal(const std::vector<PureState>& states) {
  const double tol = default_tol();
  if (states.empty()) throw NotOrthogonal("empty set");
  if (!is_orthogonal_with_duplication(states, tol)) throw NotOrthogonal();
  auto [reps, unused] = dedupe_up_to_phase(states, tol);
  (void)unused;
  const Eigen::Index d = states[0].dim();
  const std::string tag = states[0].dim_tag;

  auto shared_reps = std::make_shared<std::vector<Vec>>(std::move(reps));
  TelegraphProtocol p;
  p.send = [shared_reps, d](const PureState& s, RngStream& rng) -> std::string {
    // projective measurement in the completed basis: the set projectors
    // first, the remainder lumped into one outcome
    std::vector<double> probs;
    double acc = 0.0;
    for (const auto& r : *shared_reps) {
      double q = std::norm(r.dot(s.amp));
      probs.push_back(q);
      acc += q;
    }
    probs.push_back(std::max(0.0, 1.0 - acc));
    double u = rng.uniform();
    double cum = 0.0;
    for (size_t k = 0; k < probs.size(); ++k) {
      cum += probs[k];
      if (u < cum) return (k < shared_reps->size()) ? std::to_string(k) : std::string("rest");
    }
    return "rest";
  };
  p.receive = [shared_reps, d, tag](const std::string& c) -> DensityMatrix {
    DensityMatrix out;
    out.dim_tag = tag;
    if (c == "rest") {
      out.rho = Mat::Identity(d, d) / double(d);
      return out;
    }
    size_t k = std::stoul(c);
    if (k >= shared_reps->size()) throw Error("unknown message");
    const Vec& v = (*shared_reps)[k];
    out.rho = v * v.adjoint();
    return out;
  };
  return p;
}

TelegraphProtocol noised_protocol(const std::vector<PureState>& states, double eta,
                                  const PureState& junk) {
  if (eta < 0.0 || eta > 1.0) throw OutOfRange("eta");
  TelegraphProtocol base = perfect_telegraph_for_orthogonal(states);
  Vec j = junk.amp;
  auto base_receive = base.receive;
  TelegraphProtocol p;
  p.send = base.send;
  p.message_budget_bits = base.message_budget_bits;
  p.receive = [base_receive, eta, j](const std::string& c) -> DensityMatrix {
    DensityMatrix good = base_receive(c);
    DensityMatrix out;
    out.dim_tag = good.dim_tag;
    out.rho = eta * good.rho + (1.0 - eta) * (j * j.adjoint());
    return out;
  };
  return p;
}

double lemma_bound(double p1, double p2) {
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0) throw OutOfRange("lemma_bound");
  return p1 * p2 - 2.0 * std::sqrt((1.0 - p1) * (1.0 - p2));
}

namespace {
const Mat& slot_matrix(const OracleAssignment& oracles, const std::string& slot) {
  auto it = oracles.find(slot);
  if (it == oracles.end()) throw UnknownSlot("slot " + slot);
  return it->second;
}

// Classical XOR oracle: a 0/1 permutation whose basis map preserves the
// input register (all bits above target_bits).
void check_classical_xor(const Mat& u, int target_bits) {
  const double tol = default_tol();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    int ones = 0;
    Eigen::Index row = -1;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      double a = std::abs(u(i, j));
      if (a > tol) {
        if (std::abs(a - 1.0) > tol) throw NotClassicalOracle("non-unit entry");
        ++ones;
        row = i;
      }
    }
    if (ones != 1) throw NotClassicalOracle("not a permutation");
    if ((row >> target_bits) != (j >> target_bits))
      throw NotClassicalOracle("input register not preserved");
  }
}

struct Trace {
  Vec final_state;
  std::vector<Vec> pre_call_states;  // indexed by oracle-call order
  std::vector<int> call_steps;       // step index of each call
  std::vector<std::string> call_slots;
  std::vector<int> call_target_bits;
};

Trace evolve(const AdversaryCircuit& c, const OracleAssignment& oracles) {
  Trace tr;
  Vec v = c.initial;
  for (size_t s = 0; s < c.steps.size(); ++s) {
    if (std::holds_alternative<FixedUnitary>(c.steps[s])) {
      const Mat& u = std::get<FixedUnitary>(c.steps[s]).u;
      if (u.cols() != v.size()) throw DimensionMismatch("circuit step");
      v = u * v;
    } else {
      const auto& call = std::get<OracleCall>(c.steps[s]);
      const Mat& u = slot_matrix(oracles, call.slot);
      if (u.cols() != v.size()) throw DimensionMismatch("oracle step");
      tr.pre_call_states.push_back(v);
      tr.call_steps.push_back(int(s));
      tr.call_slots.push_back(call.slot);
      tr.call_target_bits.push_back(call.target_bits);
      v = u * v;
    }
  }
  tr.final_state = v;
  return tr;
}
}  // namespace

CircuitRun run_circuit(const AdversaryCircuit& c, const OracleAssignment& oracles) {
  Trace tr = evolve(c, oracles);
  CircuitRun run;
  run.final_state = tr.final_state;
  run.distribution.resize(tr.final_state.size());
  for (Eigen::Index i = 0; i < tr.final_state.size(); ++i)
    run.distribution[i] = std::norm(tr.final_state(i));
  return run;
}

std::vector<double> query_magnitude(const AdversaryCircuit& c, const OracleAssignment& oracles,
                                    const std::string& slot, uint64_t y) {
  Trace tr = evolve(c, oracles);
  std::vector<double> out;
  for (size_t q = 0; q < tr.pre_call_states.size(); ++q) {
    if (tr.call_slots[q] != slot) continue;
    check_classical_xor(slot_matrix(oracles, slot), tr.call_target_bits[q]);
    const Vec& v = tr.pre_call_states[q];
    double mass = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if ((uint64_t(i) >> tr.call_target_bits[q]) == y) mass += std::norm(v(i));
    out.push_back(mass);
  }
  if (out.empty()) throw UnknownSlot("slot never called: " + slot);
  return out;
}

harness::ExperimentReport oracle_swap_check(const AdversaryCircuit& c,
                                            const OracleAssignment& oracles,
                                            const OracleAssignment& modified,
                                            const std::set<std::pair<int, uint64_t>>& F) {
  harness::ExperimentReport r;
  r.name = "oracle-swap-check";

  if (oracles.size() != modified.size()) throw InconsistentModification("slot sets differ");
  Trace tr = evolve(c, oracles);

  // Where do the assignments differ, and is every difference covered by F
  // at every call time of the affected slot?
  std::set<std::string> modified_slots;
  for (const auto& [slot, u] : oracles) {
    auto it = modified.find(slot);
    if (it == modified.end()) throw InconsistentModification("missing slot " + slot);
    const Mat& u2 = it->second;
    if (u.rows() != u2.rows()) throw InconsistentModification("slot dims differ");
    // all calls to one slot must agree on the register split
    int tb = -1;
    std::vector<int> call_times;
    for (size_t q = 0; q < tr.call_slots.size(); ++q)
      if (tr.call_slots[q] == slot) {
        if (tb >= 0 && tb != tr.call_target_bits[q])
          throw InconsistentModification("inconsistent register split for slot " + slot);
        tb = tr.call_target_bits[q];
        call_times.push_back(tr.call_steps[q]);
      }
    std::set<uint64_t> diff_inputs;
    for (Eigen::Index j = 0; j < u.cols(); ++j)
      if ((u.col(j) - u2.col(j)).norm() > default_tol())
        diff_inputs.insert(tb >= 0 ? (uint64_t(j) >> tb) : uint64_t(j));
    if (diff_inputs.empty()) continue;
    if (call_times.empty())
      throw InconsistentModification("modified slot never called: " + slot);
    check_classical_xor(u, tb);
    check_classical_xor(u2, tb);
    for (uint64_t y : diff_inputs)
      for (int t : call_times)
        if (!F.count({t, y}))
          throw InconsistentModification("difference outside F");
    modified_slots.insert(slot);
  }

  // query mass over F, from the unmodified run
  double mass = 0.0;
  int T = 0;
  for (size_t q = 0; q < tr.call_slots.size(); ++q) {
    if (!modified_slots.count(tr.call_slots[q])) continue;
    ++T;
    const Vec& v = tr.pre_call_states[q];
    for (const auto& [t, y] : F) {
      if (t != tr.call_steps[q]) continue;
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if ((uint64_t(i) >> tr.call_target_bits[q]) == y) mass += std::norm(v(i));
    }
  }

  const double eps_unnormalized = std::sqrt(double(T) * mass);
  const double eps = 2.0 * eps_unnormalized;

  Trace tr2 = evolve(c, modified);
  const double distance = (tr.final_state - tr2.final_state).norm();
  double tv = 0.0;
  for (Eigen::Index i = 0; i < tr.final_state.size(); ++i)
    tv += std::abs(std::norm(tr.final_state(i)) - std::norm(tr2.final_state(i)));
  tv *= 0.5;

  const double tol = default_tol();
  r.metrics["calls"] = double(T);
  r.metrics["query_mass"] = mass;
  r.metrics["eps"] = eps;
  r.metrics["eps_unnormalized"] = eps_unnormalized;
  r.metrics["distance"] = distance;
  r.metrics["tv"] = tv;
  r.bound = eps;
  r.passed = (distance <= eps + tol) && (tv <= 4.0 * eps + tol) &&
             (tv <= 4.0 * distance + tol);
  return r;
}

HiddenClonerSwapConfig make_hidden_cloner_swap_config(int m, int n, int calls, RngStream& rng) {
  HiddenClonerSwapConfig cfg;
  cfg.h = scheme::sample_random_function(m, n, rng);
  cfg.z = scheme::sample_label(cfg.h, rng);

  const Eigen::Index d = scheme::aug_dim(m);
  const Eigen::Index d2 = d * d;

  // B maps the basis {bot, psi_z, completion...} to the computational basis.
  Mat basis = Mat::Zero(d, d);
  basis.col(0) = scheme::bot_state(m).amp;
  basis.col(1) = scheme::preimage_state(cfg.h, cfg.z).amp;
  Eigen::Index have = 2;
  for (Eigen::Index cand = 0; cand < d && have < d; ++cand) {
    Vec v = Vec::Zero(d);
    v(cand) = 1.0;
    for (Eigen::Index j = 0; j < have; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    if (v.norm() > 0.5) {  // computational candidates are either mostly kept or killed
      basis.col(have++) = v / v.norm();
    }
  }
  if (have != d) throw SamplerFailure("basis completion failed");
  Mat b = basis.adjoint();

  // after B (x) B: psi_z (x) bot -> index d, psi_z (x) psi_z -> index d + 1;
  // the permutation C moves them to the (w=0) pair {0, 1}
  Mat cperm = Mat::Identity(d2, d2);
  cperm(0, 0) = cperm(d, d) = 0.0;
  cperm(0, d) = cperm(d, 0) = 1.0;
  cperm(1, 1) = cperm(d + 1, d + 1) = 0.0;
  cperm(1, d + 1) = cperm(d + 1, 1) = 1.0;
  cfg.d_change = cperm * kron(b, b);
  cfg.marked_input = 0;

  // indicator XOR oracle: flips the last bit exactly on the marked w
  Mat oyes = Mat::Identity(d2, d2);
  oyes(0, 0) = oyes(1, 1) = 0.0;
  oyes(0, 1) = oyes(1, 0) = 1.0;
  cfg.with_cloner["clone"] = oyes;
  cfg.with_dummy["clone"] = Mat::Identity(d2, d2);

  // adversary: random interludes around the oracle calls, starting from a
  // random pair state with the second register blank, in the relabeled basis
  Vec first = Vec::Zero(d);
  first.head(d - 1) = qcore::random_unit_vector(d - 1, rng);
  Vec start = kron_vec(first, scheme::bot_state(m).amp);
  cfg.circuit.initial = cfg.d_change * start;
  for (int q = 0; q < calls; ++q) {
    cfg.circuit.steps.push_back(FixedUnitary{qcore::random_unitary(d2, rng)});
    cfg.circuit.steps.push_back(OracleCall{"clone", 1});
    cfg.F.insert({int(cfg.circuit.steps.size()) - 1, cfg.marked_input});
  }
  cfg.circuit.steps.push_back(FixedUnitary{qcore::random_unitary(d2, rng)});
  return cfg;
}

harness::ExperimentReport collision_experiment(const Reconstructor& r,
                                               const scheme::ClassicalFunction& f,
                                               uint32_t z, int k, double eta,
                                               RngStream& rng, const std::string& advice) {
  harness::ExperimentReport rep;
  rep.name = "collision-experiment";
  rep.params["m"] = std::to_string(f.m);
  rep.params["n"] = std::to_string(f.n);
  rep.params["k"] = std::to_string(k);
  auto pre = scheme::preimages(f, z);
  if (pre.empty()) throw NoPreimage();
  if (eta <= 0.0 || eta > 1.0) throw OutOfRange("eta");

  const int runs = int(std::ceil(8.0 * k / eta));
  const Eigen::Index d = scheme::aug_dim(f.m);
  std::set<uint32_t> distinct;
  int valid_hits = 0;
  for (int t = 0; t < runs; ++t) {
    RngStream trial = rng.child(uint64_t(t));
    DensityMatrix rho = r.reconstruct(advice);
    if (rho.dim() != d) throw DimensionMismatch("reconstructor output space");
    // computational-basis measurement via the exact diagonal
    double u = trial.uniform();
    double acc = 0.0;
    Eigen::Index outcome = d - 1;
    for (Eigen::Index i = 0; i < d; ++i) {
      acc += rho.rho(i, i).real();
      if (u < acc) { outcome = i; break; }
    }
    if (outcome < Eigen::Index(f.table.size()) && f.table[outcome] == z) {
      ++valid_hits;
      distinct.insert(uint32_t(outcome));
    }
  }
  rep.metrics["runs"] = double(runs);
  rep.metrics["valid_hits"] = double(valid_hits);
  rep.metrics["distinct_preimages"] = double(distinct.size());
  rep.metrics["disjoint_collisions"] = double(distinct.size() / 2);
  rep.bound = 2.0 * k;
  rep.passed = int(distinct.size()) >= 2 * k;
  return rep;
}

}  // namespace nogolab::nogo
