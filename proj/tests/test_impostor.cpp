#include <cmath>

#include "doctest.h"
#include "nogolab/impostor.hpp"

using namespace nogolab;
using namespace nogolab::impostor;
using scheme::ClassicalFunction;

namespace {
ClassicalFunction alternating_f() {
  // m=2, n=1: 00->0, 01->1, 10->0, 11->1
  ClassicalFunction f;
  f.m = 2;
  f.n = 1;
  f.table = {0, 1, 0, 1};
  return f;
}
}  // namespace

TEST_SUITE("impostor") {

TEST_CASE("private functions avoid the target label") {
  RngStream rng(3);
  auto h = scheme::sample_random_function(3, 2, rng);
  const uint32_t z = scheme::sample_label(h, rng);
  auto priv = sample_private_function(h, z, rng);
  for (uint32_t v : priv.table) {
    CHECK(v != z);
    CHECK(v < 4);
  }
}

TEST_CASE("impostor agrees with h on z-preimages and with the private map elsewhere") {
  RngStream rng(9);
  auto h = scheme::sample_random_function(3, 2, rng);
  const uint32_t z = scheme::sample_label(h, rng);
  auto priv = sample_private_function(h, z, rng);
  auto imp = build_impostor(h, priv, z);
  for (uint32_t x = 0; x < h.table.size(); ++x) {
    if (h.table[x] == z)
      CHECK(imp.table[x] == z);
    else
      CHECK(imp.table[x] == priv.table[x]);
  }

  ClassicalFunction bad_priv = priv;
  bad_priv.table[0] = z;  // a private function must never emit z
  CHECK_THROWS_AS(build_impostor(h, bad_priv, z), InconsistentInputs);
}

TEST_CASE("rotation spectrum closed form on a hand-checked bundle") {
  // h alternates, z=0: k_z=2; the single other label has k_i=2 reassigned
  // preimages and k_{z->i}=2, so theta = pi/4 and |lambda| = sqrt(2 - sqrt 2)
  RngStream rng(1);
  auto b = make_bundle(alternating_f(), 0, rng);
  CHECK(b.k_z == 2);
  auto spec = rotation_spectrum(b);
  REQUIRE(spec.size() == 1);
  CHECK(spec[0].label == 1);
  CHECK(spec[0].k_i == 2);
  CHECK(spec[0].k_z_to_i == 2);
  const double pi = 3.14159265358979323846;
  CHECK(spec[0].theta == doctest::Approx(pi / 4.0).epsilon(1e-12));
  CHECK(spec[0].lambda ==
        doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
  CHECK(spec[0].lambda_explicit == doctest::Approx(spec[0].lambda).epsilon(1e-9));
  CHECK(max_lambda(spec) == doctest::Approx(spec[0].lambda).epsilon(1e-12));
}

TEST_CASE("spectrum closed form matches explicit inner products on sampled bundles") {
  RngStream rng(21);
  for (int s = 0; s < 5; ++s) {
    RngStream child = rng.child(s);
    auto b = sample_bundle(3, 1, child);
    for (const auto& e : rotation_spectrum(b))
      CHECK(std::abs(e.lambda - e.lambda_explicit) < 1e-9);
  }
}

TEST_CASE("ancilla flip is an involution and the sandwich reproduces the impostor cloner") {
  RngStream rng(12);
  auto b = sample_bundle(3, 1, rng);
  const Eigen::Index d = scheme::aug_dim(b.h.m);
  const Eigen::Index big = 2 * d * d;

  Mat u1 = build_u1(b).mat;
  CHECK((u1 * u1 - Mat::Identity(big, big)).norm() < 1e-12);

  // with the ancilla prepared in |0>, U1 U2 U1 acts as I (x) C_impostor
  Mat prod = u1 * build_u2(b).mat * u1;
  Mat ref = qcore::kron(Mat::Identity(2, 2), exact_impostor_cloner(b).mat);
  CHECK(qcore::operator_norm(Mat((prod - ref).leftCols(d * d))) < 1e-9);
}

TEST_CASE("hat distance check: identities, bound, and the known rough corner") {
  RngStream rng(31);
  auto b = sample_bundle(3, 1, rng);
  auto rep = hat_distance_check(b);
  CHECK(rep.metrics.at("decomposition_residual") < 1e-9);
  CHECK(rep.metrics.at("spectrum_crosscheck_residual") < 1e-9);
  CHECK(rep.metrics.at("u3_unitarity_residual") < 1e-9);
  CHECK(rep.metrics.at("delta") <=
        rep.metrics.at("four_max_lambda") + 1e-9);
  // the rotation-sandwich reconstruction is only an approximation of the
  // private-block sandwich; its residual is order one, by design reported
  // rather than hidden (the distance bound above is the meaningful check)
  CHECK(rep.metrics.at("five_factor_residual") > 0.01);
}

TEST_CASE("query budget of the efficient cloner") {
  auto qb = query_budget();
  CHECK(qb.h_queries == 2);
  CHECK(qb.z_clone_queries == 1);
}

TEST_CASE("controlled-clone footnote construction has no leakage") {
  RngStream rng(44);
  auto b = sample_bundle(3, 1, rng);
  CHECK(footnote_controlled_clone_residual(b) < 1e-9);
  CHECK(std::isfinite(u1_u2_commutator_norm(b)));
}

TEST_CASE("sampling equivalence: faithful passes, mutated is caught") {
  RngStream r0(7), r1(8);
  auto faithful = sampling_equivalence_test(2, 1, 20000, r0, SamplingArm::faithful);
  CHECK(faithful.metrics.at("p_value") > 0.001);
  CHECK(faithful.passed);
  auto mutated = sampling_equivalence_test(2, 1, 20000, r1, SamplingArm::mutated);
  CHECK(mutated.metrics.at("p_value") < 0.001);
  CHECK(mutated.passed);  // a mutated arm passes by being detected

  RngStream r2(9);
  CHECK_THROWS_AS(sampling_equivalence_test(3, 1, 10, r2, SamplingArm::faithful),
                  InsufficientTrials);
  RngStream r3(10);
  CHECK_THROWS_AS(sampling_equivalence_test(5, 1, 100000, r3, SamplingArm::faithful),
                  CapExceeded);
}

TEST_CASE("counts-only ratio sweep runs at larger m and flags vacuous bounds") {
  RngStream rng(2);
  auto rep = ratio_bound_counts(6, 2, 50, rng);
  CHECK(rep.metrics.count("within_bound_fraction") == 1);
  CHECK(rep.metrics.count("worst_ratio") == 1);
  // 72 n 2^-n > 1 at desk scale, so the bound is trivially satisfied
  CHECK(rep.metrics.at("vacuous") == 1.0);
  CHECK(rep.passed);
}

}
