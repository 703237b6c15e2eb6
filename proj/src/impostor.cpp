#include "nogolab/impostor.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace nogolab::impostor {

using scheme::aug_dim;
using scheme::bot_index;
using scheme::preimage_state;
using qcore::kron;
using qcore::operator_norm;

ClassicalFunction sample_private_function(const ClassicalFunction& h, uint32_t z, RngStream& rng) {
  if (h.n < 1) throw CodomainTooSmall();
  const uint64_t codomain = uint64_t(1) << h.n;
  if (codomain < 2) throw CodomainTooSmall("cannot exclude z from a singleton codomain");
  ClassicalFunction f;
  f.m = h.m;
  f.n = h.n;
  f.table.resize(h.table.size());
  for (auto& v : f.table) {
    uint32_t r = static_cast<uint32_t>(rng.below(codomain - 1));
    v = (r < z) ? r : r + 1;
  }
  return f;
}

namespace {
ClassicalFunction splice_impostor(const ClassicalFunction& h, const ClassicalFunction& hp, uint32_t z) {
  ClassicalFunction f;
  f.m = h.m;
  f.n = h.n;
  f.table.resize(h.table.size());
  for (size_t x = 0; x < h.table.size(); ++x)
    f.table[x] = (h.table[x] == z) ? z : hp.table[x];
  return f;
}
}  // namespace

ClassicalFunction build_impostor(const ClassicalFunction& h, const ClassicalFunction& h_private, uint32_t z) {
  if (h_private.m != h.m || h_private.n != h.n) throw InconsistentInputs("width mismatch");
  for (uint32_t v : h_private.table)
    if (v == z) throw InconsistentInputs("private function outputs z");
  return splice_impostor(h, h_private, z);
}

ImpostorBundle make_bundle(const ClassicalFunction& h, uint32_t z, RngStream& rng) {
  ImpostorBundle b;
  b.h = h;
  b.z = z;
  b.h_private = sample_private_function(h, z, rng);
  b.h_impostor = build_impostor(h, b.h_private, z);
  const size_t labels = size_t(1) << h.n;
  b.k_i.assign(labels, 0);
  b.k_z_to_i.assign(labels, 0);
  for (size_t x = 0; x < h.table.size(); ++x) {
    if (h.table[x] == z) {
      ++b.k_z;
      ++b.k_z_to_i[b.h_private.table[x]];
    } else {
      ++b.k_i[b.h_impostor.table[x]];
    }
  }
  return b;
}

ImpostorBundle sample_bundle(int m, int n, RngStream& rng) {
  ClassicalFunction h = scheme::sample_random_function(m, n, rng);
  uint32_t z = scheme::sample_label(h, rng);
  return make_bundle(h, z, rng);
}

OperatorMatrix exact_impostor_cloner(const ImpostorBundle& b) {
  return scheme::full_cloning_oracle(b.h_impostor);
}

OperatorMatrix build_u1(const ImpostorBundle& b) {
  const Eigen::Index d = aug_dim(b.h.m);
  const Eigen::Index d2 = d * d;
  Mat u = Mat::Zero(2 * d2, 2 * d2);
  for (Eigen::Index anc = 0; anc < 2; ++anc)
    for (Eigen::Index x = 0; x < d; ++x) {
      const bool flip = (x < bot_index(b.h.m)) && (b.h.table[x] == b.z);
      const Eigen::Index out_anc = flip ? (1 - anc) : anc;
      for (Eigen::Index y = 0; y < d; ++y)
        u(out_anc * d2 + x * d + y, anc * d2 + x * d + y) = 1.0;
    }
  OperatorMatrix op;
  op.mat = std::move(u);
  op.kind = qcore::OpKind::general;
  return op;
}

namespace {
Mat controlled_blocks(const Mat& block1, const Mat& block0) {
  const Eigen::Index d2 = block1.rows();
  Mat u = Mat::Zero(2 * d2, 2 * d2);
  u.topLeftCorner(d2, d2) = block0;
  u.bottomRightCorner(d2, d2) = block1;
  return u;
}
}  // namespace

OperatorMatrix build_u2(const ImpostorBundle& b) {
  Mat cz = scheme::z_cloning_oracle(b.h_impostor, b.z).mat;
  Mat cimp = exact_impostor_cloner(b).mat;
  OperatorMatrix op;
  op.mat = controlled_blocks(cz, cimp);
  op.kind = qcore::OpKind::general;
  return op;
}

OperatorMatrix build_u2_hat(const ImpostorBundle& b) {
  Mat cz = scheme::z_cloning_oracle(b.h_impostor, b.z).mat;
  Mat cpriv = scheme::full_cloning_oracle(b.h_private).mat;
  OperatorMatrix op;
  op.mat = controlled_blocks(cz, cpriv);
  op.kind = qcore::OpKind::general;
  return op;
}

OperatorMatrix efficient_impostor_cloner(const ImpostorBundle& b) {
  Mat u1 = build_u1(b).mat;
  Mat u2h = build_u2_hat(b).mat;
  OperatorMatrix op;
  op.mat = u1 * u2h * u1;
  op.kind = qcore::OpKind::general;
  return op;
}

QueryBudget query_budget() { return QueryBudget{}; }

namespace {
// Unit vector over the h-preimages of z that the private function sends to i.
Vec reassigned_direction(const ImpostorBundle& b, uint32_t i) {
  const Eigen::Index d = aug_dim(b.h.m);
  Vec v = Vec::Zero(d);
  int count = 0;
  for (size_t x = 0; x < b.h.table.size(); ++x)
    if (b.h.table[x] == b.z && b.h_private.table[x] == i) {
      v(Eigen::Index(x)) = 1.0;
      ++count;
    }
  if (count > 0) v /= std::sqrt(double(count));
  return v;
}
}  // namespace

std::vector<RotationEntry> rotation_spectrum(const ImpostorBundle& b) {
  std::vector<RotationEntry> spec;
  const uint32_t labels = uint32_t(1) << b.h.n;
  for (uint32_t i = 0; i < labels; ++i) {
    if (i == b.z) continue;
    const int ki = b.k_i[i];
    const int kzi = b.k_z_to_i[i];
    if (ki + kzi == 0) continue;
    RotationEntry e;
    e.label = i;
    e.k_i = ki;
    e.k_z_to_i = kzi;
    e.theta = std::acos(std::sqrt(double(ki) / double(ki + kzi)));
    e.lambda = std::sqrt(2.0 * (1.0 - std::cos(e.theta)));
    // cross-check: psi_hat_i is exactly the private-function preimage state,
    // and <psi_i|psi_hat_i> reduces to the same count ratio
    if (ki > 0) {
      Vec psi_imp = preimage_state(b.h_impostor, i).amp;
      Vec psi_hat = preimage_state(b.h_private, i).amp;
      e.inner_explicit = psi_imp.dot(psi_hat).real();
    } else {
      e.inner_explicit = 0.0;  // impostor-side state is empty
    }
    e.lambda_explicit = std::sqrt(2.0 * (1.0 - e.inner_explicit));
    spec.push_back(e);
  }
  return spec;
}

double max_lambda(const std::vector<RotationEntry>& spec) {
  double mx = 0.0;
  for (const auto& e : spec) mx = std::max(mx, e.lambda);
  return mx;
}

Mat build_u3(const ImpostorBundle& b) {
  const Eigen::Index d = aug_dim(b.h.m);
  Mat u = Mat::Identity(d, d);
  for (const auto& e : rotation_spectrum(b)) {
    if (e.k_z_to_i == 0) continue;  // theta = 0, plane unchanged
    if (e.k_i == 0) continue;       // degenerate plane, identity (see header)
    Vec psi = preimage_state(b.h_impostor, e.label).amp;
    Vec p = reassigned_direction(b, e.label);
    const double c = std::cos(e.theta), s = std::sin(e.theta);
    u += (c - 1.0) * (psi * psi.adjoint() + p * p.adjoint())
       + s * (p * psi.adjoint() - psi * p.adjoint());
  }
  return u;
}

harness::ExperimentReport hat_distance_check(const ImpostorBundle& b) {
  const auto t0 = std::chrono::steady_clock::now();
  harness::ExperimentReport r;
  r.name = "hat-distance-check";
  r.params["m"] = std::to_string(b.h.m);
  r.params["n"] = std::to_string(b.h.n);
  r.params["z"] = std::to_string(b.z);

  const Eigen::Index d = aug_dim(b.h.m);
  const Eigen::Index d2 = d * d;
  Mat u1 = build_u1(b).mat;
  Mat u2 = build_u2(b).mat;
  Mat u2h = build_u2_hat(b).mat;
  Mat chat = u1 * u2h * u1;
  Mat cimp = exact_impostor_cloner(b).mat;
  Mat icimp = controlled_blocks(cimp, cimp);  // I (x) C_impostor

  auto anc0_residual = [&](const Mat& a, const Mat& ref) {
    return operator_norm(Mat((a - ref).leftCols(d2)));
  };

  const double decomp = anc0_residual(u1 * u2 * u1, icimp);
  const double delta = anc0_residual(chat, icimp);

  auto spec = rotation_spectrum(b);
  double cross = 0.0;
  for (const auto& e : spec)
    cross = std::max(cross, std::abs(e.lambda - e.lambda_explicit));
  const double maxlam = max_lambda(spec);

  Mat u3 = build_u3(b);
  const double u3_unitarity = operator_norm(Mat(u3.adjoint() * u3 - Mat::Identity(d, d)));
  double five = std::numeric_limits<double>::infinity();
  for (int orient = 0; orient < 2; ++orient) {
    Mat v = (orient == 0) ? u3 : Mat(u3.adjoint());
    Mat vv = controlled_blocks(kron(v, v), kron(v, v));
    Mat five_factor = u1 * vv.adjoint() * u2 * vv * u1;
    five = std::min(five, anc0_residual(chat, five_factor));
    r.metrics[orient == 0 ? "five_factor_residual_fwd" : "five_factor_residual_rev"] =
        anc0_residual(chat, five_factor);
  }

  const double tol = default_tol();
  r.metrics["decomposition_residual"] = decomp;
  r.metrics["delta"] = delta;
  r.metrics["max_lambda"] = maxlam;
  r.metrics["four_max_lambda"] = 4.0 * maxlam;
  r.metrics["spectrum_crosscheck_residual"] = cross;
  r.metrics["u3_unitarity_residual"] = u3_unitarity;
  r.metrics["five_factor_residual"] = five;
  r.bound = 4.0 * maxlam;
  r.passed = (decomp <= tol) && (delta <= 4.0 * maxlam + tol) && (cross <= tol) &&
             (u3_unitarity <= tol) && (five <= tol);
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

harness::ExperimentReport ratio_bound_report(const ImpostorBundle& b) {
  harness::ExperimentReport r;
  r.name = "ratio-bound";
  r.params["m"] = std::to_string(b.h.m);
  r.params["n"] = std::to_string(b.h.n);
  const double bound = 72.0 * b.h.n / std::pow(2.0, b.h.n);
  double max_ratio = 0.0;
  bool sub_a = true;  // every relevant k_i > (1/2) 2^{m-n}
  const double half = 0.5 * std::pow(2.0, b.h.m - b.h.n);
  for (const auto& e : rotation_spectrum(b)) {
    max_ratio = std::max(max_ratio, double(e.k_z_to_i) / double(e.k_i + e.k_z_to_i));
    if (double(e.k_i) <= half) sub_a = false;
  }
  const bool sub_b = (double(b.k_z) > half) && (double(b.k_z) < 6.0 * half);
  const double c_bound = 36.0 * b.h.n * std::pow(2.0, b.h.m - 2 * b.h.n);
  bool sub_c = true;
  for (const auto& e : rotation_spectrum(b))
    if (double(e.k_z_to_i) >= c_bound) sub_c = false;
  r.metrics["max_ratio"] = max_ratio;
  r.metrics["sub_bound_a"] = sub_a ? 1.0 : 0.0;
  r.metrics["sub_bound_b"] = sub_b ? 1.0 : 0.0;
  r.metrics["sub_bound_c"] = sub_c ? 1.0 : 0.0;
  r.metrics["vacuous"] = (bound > 1.0) ? 1.0 : 0.0;
  r.bound = bound;
  r.passed = max_ratio <= bound;
  return r;
}

harness::ExperimentReport ratio_bound_counts(int m, int n, int num_seeds, RngStream& rng) {
  harness::ExperimentReport r;
  r.name = "ratio-bound-counts";
  r.params["m"] = std::to_string(m);
  r.params["n"] = std::to_string(n);
  r.params["seeds"] = std::to_string(num_seeds);
  const double bound = 72.0 * n / std::pow(2.0, n);
  const size_t labels = size_t(1) << n;
  int within = 0;
  double worst = 0.0;
  for (int s = 0; s < num_seeds; ++s) {
    RngStream trial = rng.child(uint64_t(s));
    // counts-only: sample the table directly, no cap and no matrices
    std::vector<uint32_t> table(size_t(1) << m);
    for (auto& v : table) v = static_cast<uint32_t>(trial.below(labels));
    uint32_t z = table[trial.below(table.size())];
    std::vector<int> ki(labels, 0), kzi(labels, 0);
    for (size_t x = 0; x < table.size(); ++x) {
      if (table[x] == z) {
        uint32_t rr = static_cast<uint32_t>(trial.below(labels - 1));
        uint32_t priv = (rr < z) ? rr : rr + 1;
        ++kzi[priv];
      } else {
        ++ki[table[x]];
      }
    }
    double mx = 0.0;
    for (size_t i = 0; i < labels; ++i) {
      if (i == z || ki[i] + kzi[i] == 0) continue;
      mx = std::max(mx, double(kzi[i]) / double(ki[i] + kzi[i]));
    }
    worst = std::max(worst, mx);
    if (mx <= bound) ++within;
  }
  r.metrics["within_bound_fraction"] = double(within) / double(num_seeds);
  r.metrics["worst_ratio"] = worst;
  r.metrics["vacuous"] = (bound > 1.0) ? 1.0 : 0.0;
  r.bound = bound;
  r.passed = within >= (num_seeds * 99 + 99) / 100;
  return r;
}

harness::ExperimentReport sampling_equivalence_test(int m, int n, uint64_t trials,
                                                    RngStream& rng, SamplingArm arm) {
  harness::ExperimentReport r;
  r.name = "sampling-equivalence";
  r.params["m"] = std::to_string(m);
  r.params["n"] = std::to_string(n);
  r.params["trials"] = std::to_string(trials);
  r.params["arm"] = (arm == SamplingArm::faithful) ? "faithful"
                   : (arm == SamplingArm::mutated) ? "mutated" : "selftest";

  const uint64_t M = uint64_t(1) << m;
  const int table_bits = n * int(M);
  if (table_bits + n > 24) throw CapExceeded("joint outcome space too large to bin");
  // smallest reachable joint probability is 2^{-nM}/M (tables with k_z = 1)
  if (double(trials) * std::pow(2.0, -double(n) * double(M)) / double(M) < 5.0)
    throw InsufficientTrials("expected bin count below 5");

  const size_t bins = size_t(1) << (table_bits + n);
  std::vector<uint64_t> o1(bins, 0), o2(bins, 0);

  auto pack = [&](uint32_t z, const std::vector<uint32_t>& table) {
    uint64_t key = 0;
    for (uint32_t v : table) key = (key << n) | v;
    return (uint64_t(z) << table_bits) | key;
  };

  const uint64_t codomain = uint64_t(1) << n;
  for (uint64_t t = 0; t < trials; ++t) {
    // construction arm: H, z = H(x*), private resample, splice
    RngStream a = rng.child(2 * t);
    ClassicalFunction h = scheme::sample_random_function(m, n, a);
    uint32_t z = scheme::sample_label(h, a);
    std::vector<uint32_t> himp(h.table.size());
    for (size_t x = 0; x < h.table.size(); ++x) {
      if (h.table[x] == z) {
        himp[x] = z;
      } else if (arm == SamplingArm::mutated) {
        // broken private function: may output z
        himp[x] = static_cast<uint32_t>(a.below(codomain));
      } else {
        uint32_t rr = static_cast<uint32_t>(a.below(codomain - 1));
        himp[x] = (rr < z) ? rr : rr + 1;
      }
    }
    ++o1[pack(z, himp)];

    // reference arm: rejection-sample the image-weighted joint (z, H)
    RngStream bstream = rng.child(2 * t + 1);
    for (;;) {
      ClassicalFunction href = scheme::sample_random_function(m, n, bstream);
      uint64_t xstar = bstream.below(M);
      uint32_t zref = static_cast<uint32_t>(bstream.below(codomain));
      if (href.table[xstar] != zref) continue;
      if (arm == SamplingArm::selftest) {
        // null calibration: reference arm also uses the construction
        std::vector<uint32_t> himp2(href.table.size());
        for (size_t x = 0; x < href.table.size(); ++x) {
          if (href.table[x] == zref) {
            himp2[x] = zref;
          } else {
            uint32_t rr = static_cast<uint32_t>(bstream.below(codomain - 1));
            himp2[x] = (rr < zref) ? rr : rr + 1;
          }
        }
        ++o2[pack(zref, himp2)];
      } else {
        ++o2[pack(zref, href.table)];
      }
      break;
    }
  }

  auto [stat, p] = harness::chi_square_two_sample(o1, o2);
  r.metrics["chi_square"] = stat;
  r.metrics["p_value"] = p;
  r.bound = 0.001;
  // mutated arm is expected to be *detected*
  r.passed = (arm == SamplingArm::mutated) ? (p < 0.001) : (p > 0.001);
  return r;
}

double footnote_controlled_clone_residual(const ImpostorBundle& b) {
  const Eigen::Index d = aug_dim(b.h.m);
  const Eigen::Index d2 = d * d;
  Mat cz = scheme::z_cloning_oracle(b.h_impostor, b.z).mat;
  Vec botbot = Vec::Zero(d2);
  botbot(bot_index(b.h.m) * d + bot_index(b.h.m)) = 1.0;
  Vec fixed = cz * botbot;
  // swap-sandwich on the stashed bot(x)bot pair reduces to
  // |1><1| (x) C_z + <botbot|C_z|botbot> |0><0| (x) I when C_z leaves the
  // stash unentangled; the leak term quantifies any entanglement
  const cx alpha = botbot.dot(fixed);
  const double leak = (fixed - alpha * botbot).norm();
  Mat reduced = controlled_blocks(cz, Mat(alpha * Mat::Identity(d2, d2)));
  Mat direct = controlled_blocks(cz, Mat::Identity(d2, d2));
  return operator_norm(Mat(direct - reduced)) + leak;
}

double u1_u2_commutator_norm(const ImpostorBundle& b) {
  Mat u1 = build_u1(b).mat;
  Mat u2 = build_u2(b).mat;
  return operator_norm(Mat(u1 * u2 - u2 * u1));
}

}  // namespace nogolab::impostor
