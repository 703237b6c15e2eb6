#include <cmath>

#include "doctest.h"
#include "nogolab/scheme.hpp"

using namespace nogolab;
using namespace nogolab::scheme;
using qcore::operator_norm;

namespace {
ClassicalFunction fixed_f() {
  // m=2, n=1: 00->0, 01->0, 10->1, 11->0
  ClassicalFunction f;
  f.m = 2;
  f.n = 1;
  f.table = {0, 0, 1, 0};
  return f;
}
}  // namespace

TEST_SUITE("scheme") {

TEST_CASE("preimage bookkeeping on a fixed function") {
  auto f = fixed_f();
  CHECK(preimages(f, 0) == std::vector<uint32_t>{0, 1, 3});
  CHECK(preimages(f, 1) == std::vector<uint32_t>{2});
  CHECK(image_labels(f) == std::set<uint32_t>{0, 1});

  PureState psi0 = preimage_state(f, 0);
  CHECK(psi0.dim() == 5);
  CHECK(std::abs(psi0.amp(0) - cx(1.0 / std::sqrt(3.0), 0)) < 1e-12);
  CHECK(std::abs(psi0.amp(2)) == 0.0);
  CHECK(std::abs(psi0.amp(4)) == 0.0);  // no weight on the bottom symbol

  ClassicalFunction all_zero = f;
  all_zero.table = {0, 0, 0, 0};
  CHECK_THROWS_AS(preimage_state(all_zero, 1), NoPreimage);
}

TEST_CASE("verification probability of a basis preimage is 1/k") {
  auto f = fixed_f();
  Vec e0 = Vec::Zero(5);
  e0(0) = 1.0;
  CHECK(verify(PureState(e0, "augmented(2)"), 0, f) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(verify(preimage_state(f, 0), 0, f) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verify(preimage_state(f, 1), 0, f) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("label sampling follows the image-weighted distribution") {
  auto f = fixed_f();
  auto dist = sample_label_distribution(f);
  REQUIRE(dist.size() == 2);
  CHECK(dist[0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(dist[1] == doctest::Approx(0.25).epsilon(1e-15));

  RngStream rng(17);
  int zeros = 0;
  const int reps = 4000;
  for (int i = 0; i < reps; ++i)
    if (sample_label(f, rng) == 0) ++zeros;
  CHECK(std::abs(double(zeros) / reps - 0.75) < 0.05);
}

TEST_CASE("xor oracle is a self-inverse permutation") {
  auto f = fixed_f();
  auto u = xor_oracle(f);
  CHECK(u.dim() == 8);
  CHECK(operator_norm(Mat(u.mat * u.mat - Mat::Identity(8, 8))) < 1e-12);
  for (Eigen::Index j = 0; j < 8; ++j) CHECK(u.mat.col(j).norm() == doctest::Approx(1.0));
  // 10|0 -> 10|1 since f(10) = 1
  CHECK(u.mat(5, 4) == cx(1, 0));
}

TEST_CASE("cloning oracle swaps psi (x) bot with psi (x) psi and fixes the rest") {
  auto f = fixed_f();
  auto c = full_cloning_oracle(f);
  const Eigen::Index d = aug_dim(f.m);
  Vec bot = bot_state(f.m).amp;
  for (uint32_t z : image_labels(f)) {
    Vec psi = preimage_state(f, z).amp;
    Vec in = qcore::kron_vec(psi, bot);
    Vec target = qcore::kron_vec(psi, psi);
    CHECK((c.mat * in - target).norm() < 1e-12);
    CHECK((c.mat * target - in).norm() < 1e-12);  // involution on the swap plane
  }
  Vec botbot = qcore::kron_vec(bot, bot);
  CHECK((c.mat * botbot - botbot).norm() < 1e-12);
  CHECK(operator_norm(Mat(c.mat.adjoint() * c.mat - Mat::Identity(d * d, d * d))) < 1e-9);
  CHECK(operator_norm(Mat(c.mat * c.mat - Mat::Identity(d * d, d * d))) < 1e-9);
}

TEST_CASE("cloning oracle rejects invalid sets") {
  RngStream rng(5);
  Vec v1 = Vec::Zero(5);
  v1(0) = 1.0;
  Vec v2 = Vec::Zero(5);
  v2(0) = std::sqrt(0.5);
  v2(1) = std::sqrt(0.5);
  std::vector<PureState> overlapping{PureState(v1, "augmented(2)"),
                                     PureState(v2, "augmented(2)")};
  CHECK_THROWS_AS(cloning_oracle_for_set(overlapping, 2), NotOrthonormal);

  Vec with_bot = Vec::Zero(5);
  with_bot(4) = 1.0;
  CHECK_THROWS_AS(cloning_oracle_for_set({PureState(with_bot, "augmented(2)")}, 2),
                  NotOrthonormal);
}

TEST_CASE("function sampling respects the cap and strict mode") {
  RngStream rng(1);
  CHECK_THROWS_AS(sample_random_function(7, 2, rng), CapExceeded);
  CHECK_THROWS_AS(sample_random_function(3, 2, rng, /*strict_mode=*/true),
                  InconsistentInputs);
  auto f = sample_random_function(4, 2, rng);
  CHECK(f.table.size() == 16);
  for (uint32_t v : f.table) CHECK(v < 4);
}

TEST_CASE("text fixtures round-trip") {
  auto f = fixed_f();
  auto g = from_text(to_text(f));
  CHECK(g.m == f.m);
  CHECK(g.n == f.n);
  CHECK(g.table == f.table);
  CHECK_THROWS_AS(from_text(""), InconsistentInputs);
  CHECK_THROWS_AS(from_text("00 0\n01 1\n"), InconsistentInputs);  // wrong row count
}

TEST_CASE("scheme assembly exposes consistent oracles") {
  auto inst = make_scheme(fixed_f());
  CHECK(inst.labels_in_image == std::set<uint32_t>{0, 1});
  CHECK(inst.xor_oracle.dim() == 8);
  CHECK(inst.clone_oracle.dim() == 25);
}

}
