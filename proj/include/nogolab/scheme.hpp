// scheme.hpp
// Classical function tables, preimage superposition states, the XOR oracle,
// cloning oracles, and the assembled scheme (oracles {H, C_H} plus the
// image-weighted label distribution).
#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "nogolab/qcore.hpp"

namespace nogolab::scheme {

using qcore::OperatorMatrix;
using qcore::PureState;

struct ClassicalFunction {
  int m = 0;  // domain bit-width
  int n = 0;  // codomain bit-width
  std::vector<uint32_t> table;  // 2^m entries, each < 2^n

  uint32_t operator()(uint32_t x) const { return table[x]; }
  size_t domain_size() const { return table.size(); }
};

void validate(const ClassicalFunction& f);

// Augmented-space dimension 2^m + 1; the bottom symbol lives at index 2^m.
inline Eigen::Index aug_dim(int m) { return (Eigen::Index(1) << m) + 1; }
inline Eigen::Index bot_index(int m) { return Eigen::Index(1) << m; }
PureState bot_state(int m);

ClassicalFunction sample_random_function(int m, int n, RngStream& rng,
                                         bool strict_mode = false);

std::vector<uint32_t> preimages(const ClassicalFunction& f, uint32_t z);
std::set<uint32_t> image_labels(const ClassicalFunction& f);

// Uniform positive superposition over f^{-1}(z) in augmented(m).
// Throws NoPreimage when the preimage set is empty (never a zero vector).
PureState preimage_state(const ClassicalFunction& f, uint32_t z);

// |x>|y> -> |x>|y xor f(x)> on m+n bits; a permutation and an involution.
OperatorMatrix xor_oracle(const ClassicalFunction& f);

// Cloning oracle for an orthonormal set over augmented(m):
// I + sum_i |psi_i><psi_i| (x) (|psi_i><bot| + |bot><psi_i| - |bot><bot| - |psi_i><psi_i|).
// Swaps psi_i (x) bot <-> psi_i (x) psi_i, identity on the complement.
OperatorMatrix cloning_oracle_for_set(const std::vector<PureState>& states, int m);

// Cloning oracle relative to f: the set is all preimage superposition states.
OperatorMatrix full_cloning_oracle(const ClassicalFunction& f);

// z-cloning oracle: singleton set {psi_z}.
OperatorMatrix z_cloning_oracle(const ClassicalFunction& f, uint32_t z);

struct SchemeInstance {
  ClassicalFunction h;
  OperatorMatrix xor_oracle;
  OperatorMatrix clone_oracle;
  std::set<uint32_t> labels_in_image;
};

SchemeInstance make_scheme(const ClassicalFunction& h);

// z <- H(x) for uniform x; P(z) = |H^{-1}(z)| / 2^m exactly.
uint32_t sample_label(const ClassicalFunction& h, RngStream& rng);
std::vector<double> sample_label_distribution(const ClassicalFunction& h);

// Verification for label z: fidelity with psi_z.
double verify(const PureState& state, uint32_t z, const ClassicalFunction& f);
double verify(const qcore::DensityMatrix& state, uint32_t z, const ClassicalFunction& f);

// Text fixture format: one line per domain point, "x_bits y_bits".
std::string to_text(const ClassicalFunction& f);
ClassicalFunction from_text(const std::string& text);

}  // namespace nogolab::scheme
