#include "doctest.h"
#include "nogolab/crypto.hpp"

using namespace nogolab;
using namespace nogolab::crypto;
using qcore::to_density;

TEST_SUITE("crypto") {

TEST_CASE("key generation yields a perfectly verifying secret key") {
  RngStream rng(3);
  auto s = ne_gen(4, 1, rng);
  CHECK(complexity::rohc_verify(s.inst, s.keys.sk) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.keys.pk == instance_id(s.inst));
}

TEST_CASE("encryption round-trips with the honest key and refuses junk witnesses") {
  RngStream rng(5);
  auto s = ne_gen(3, 1, rng);
  auto we = scheme_witness_encryption(s);
  const std::vector<uint8_t> msg = {1, 2, 3, 4, 5};
  auto ct = ne_enc(we, s.keys.pk, msg, rng);
  CHECK(ct.blob.size() > msg.size());
  CHECK(ct.blob[0] == 1);  // versioned blob

  auto got = we.dec(s.keys.pk, ct, to_density(s.keys.sk));
  REQUIRE(got.has_value());
  CHECK(*got == msg);

  // a witness with zero acceptance never opens the ciphertext
  auto junk = to_density(scheme::bot_state(3));
  CHECK_FALSE(we.dec(s.keys.pk, ct, junk).has_value());

  // and neither does the honest key against a different instance id
  CHECK_FALSE(we.dec("some other instance", ct, to_density(s.keys.sk)).has_value());

  CHECK_THROWS_AS(ne_enc(we, s.keys.pk, {}, rng), InconsistentInputs);
}

TEST_CASE("decryption refreshes the key; the refreshed key keeps decrypting") {
  RngStream rng(7);
  auto s = ne_gen(3, 1, rng);
  auto we = scheme_witness_encryption(s);
  const std::vector<uint8_t> msg = {9, 9, 9};
  auto ct = ne_enc(we, s.keys.pk, msg, rng);

  qcore::DensityMatrix sk = to_density(s.keys.sk);
  for (int step = 0; step < 3; ++step) {
    auto res = ne_dec(we, s, sk, ct);
    REQUIRE(res.message.has_value());
    CHECK(*res.message == msg);
    CHECK(res.refreshed_sk.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    sk = res.refreshed_sk;
  }
  // psi_z is an eigenvector of the verifier, so refreshing never degrades it
  CHECK(scheme::verify(sk, *s.inst.z, s.inst.h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the cloning oracle duplicates the secret key exactly") {
  RngStream rng(11);
  auto s = ne_gen(3, 2, rng);
  auto [k1, k2] = clone_secret_key(s, s.keys.sk);
  CHECK(scheme::verify(k1, *s.inst.z, s.inst.h) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scheme::verify(k2, *s.inst.z, s.inst.h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exfiltration game: a lossless classical channel leaks everything") {
  RngStream rng(13);
  auto s = ne_gen(3, 1, rng);
  auto we = scheme_witness_encryption(s);
  auto leaky = nogo::perfect_telegraph_for_orthogonal({s.keys.sk});
  RngStream game(17);
  CHECK(exfiltration_advantage(s, we, leaky, 32, game) == doctest::Approx(1.0));

  // a channel that destroys the key gives (near) zero advantage
  nogo::TelegraphProtocol dead;
  dead.send = [](const qcore::PureState&, RngStream&) { return std::string("x"); };
  const Eigen::Index d = scheme::aug_dim(3);
  dead.receive = [d](const std::string&) {
    qcore::DensityMatrix dm;
    dm.rho = Mat::Identity(d, d) / double(d);
    dm.dim_tag = "augmented(3)";
    return dm;
  };
  RngStream game2(19);
  CHECK(exfiltration_advantage(s, we, dead, 64, game2) < 0.5);
}

}
