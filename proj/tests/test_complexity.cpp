#include <Eigen/Eigenvalues>
#include <cmath>

#include "doctest.h"
#include "nogolab/complexity.hpp"

using namespace nogolab;
using namespace nogolab::complexity;
using qcore::PureState;

TEST_SUITE("complexity") {

TEST_CASE("YES instances accept their witness with certainty") {
  RngStream rng(3);
  auto inst = generate_rohc(4, 2, Truth::YES, rng);
  REQUIRE(inst.z.has_value());
  PureState witness = scheme::preimage_state(inst.h, *inst.z);
  CHECK(rohc_verify(inst, witness) == doctest::Approx(1.0).epsilon(1e-12));

  // the acceptance operator's top eigenpair is (1, psi_z)
  Mat acc = acceptance_operator(inst);
  Eigen::SelfAdjointEigenSolver<Mat> es(acc);
  const Eigen::Index last = acc.rows() - 1;
  CHECK(es.eigenvalues()(last) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::norm(witness.amp.dot(es.eigenvectors().col(last))) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("NO instances accept nothing") {
  RngStream rng(4);
  auto inst = generate_rohc(4, 2, Truth::NO, rng);
  CHECK_FALSE(inst.z.has_value());
  CHECK(qcore::operator_norm(acceptance_operator(inst)) < 1e-9);
  RngStream wrng(5);
  PureState random_witness(qcore::random_unit_vector(scheme::aug_dim(4), wrng),
                           "augmented(4)");
  CHECK(rohc_verify(inst, random_witness) < 1e-9);
}

TEST_CASE("acceptance operator reproduces the verifier on random witnesses") {
  RngStream rng(6);
  auto inst = generate_rohc(3, 1, Truth::YES, rng);
  Mat acc = acceptance_operator(inst);
  const Eigen::Index d = scheme::aug_dim(3);
  for (int t = 0; t < 10; ++t) {
    PureState w(qcore::random_unit_vector(d, rng), "augmented(3)");
    CHECK(std::abs(rohc_verify(inst, w) - w.amp.dot(acc * w.amp).real()) < 1e-9);
  }
}

TEST_CASE("cloning a YES witness yields two exact copies") {
  RngStream rng(7);
  auto inst = generate_rohc(3, 2, Truth::YES, rng);
  PureState witness = scheme::preimage_state(inst.h, *inst.z);
  auto two = rohc_clone(inst, witness);
  CHECK(qcore::fidelity(two, qcore::tensor(witness, witness)) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("composition fidelity closed form") {
  CHECK(composition_fidelity(0.9, 0.9) == doctest::Approx(0.45332).epsilon(1e-5));
  CHECK(composition_fidelity(1.0, 0.8) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(composition_fidelity(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // monotone nondecreasing in both arguments, spot grid
  double prev = -10.0;
  for (double c = 0.1; c <= 1.0; c += 0.1) {
    double v = composition_fidelity(c, 0.7);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK_THROWS_AS(composition_fidelity(1.2, 0.5), OutOfRange);
}

TEST_CASE("partial cloner hits the prescribed fidelity") {
  RngStream rng(8);
  const Eigen::Index d = scheme::aug_dim(3);
  Vec v = Vec::Zero(d);
  v.head(d - 1) = qcore::random_unit_vector(d - 1, rng);
  PureState psi(v, "augmented(3)");
  PureState bot = scheme::bot_state(3);
  const double angle = 0.7;
  Mat u = partial_cloner_unitary(psi, bot, angle);
  CHECK(qcore::operator_norm(Mat(u.adjoint() * u - Mat::Identity(d * d, d * d))) < 1e-9);
  double f = std::norm(
      qcore::kron_vec(psi.amp, psi.amp).dot(u * qcore::kron_vec(psi.amp, bot.amp)));
  CHECK(f == doctest::Approx(std::sin(angle) * std::sin(angle)).epsilon(1e-12));
}

TEST_CASE("combined verifier-cloner: exact disturbance and the composition bound") {
  RngStream rng(9);
  const Eigen::Index d = scheme::aug_dim(3);
  Vec v = Vec::Zero(d);
  v.head(d - 1) = qcore::random_unit_vector(d - 1, rng);
  PureState psi(v, "augmented(3)");
  PureState bot = scheme::bot_state(3);

  // rank-1 verifier with overlap 0.9, cloner with fidelity 0.9
  Vec g = qcore::random_unit_vector(d, rng);
  g -= psi.amp.dot(g) * psi.amp;
  g -= bot.amp.dot(g) * bot.amp;
  g.normalize();
  Vec dir = std::sqrt(0.9) * psi.amp + std::sqrt(0.1) * g;
  Mat u = partial_cloner_unitary(psi, bot, std::asin(std::sqrt(0.9)));
  VerifierCloner vc;
  vc.accept_projector = dir * dir.adjoint();
  vc.cloner = [u, &bot](const qcore::DensityMatrix& dm) {
    qcore::DensityMatrix out;
    out.rho = u * qcore::kron(dm.rho, Mat(bot.amp * bot.amp.adjoint())) * u.adjoint();
    out.dim_tag = dm.dim_tag + "*" + dm.dim_tag;
    return out;
  };

  auto res = combined_verifier_cloner(vc, psi, rng, /*exact_mode=*/true);
  CHECK(res.accept_probability == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(res.disturbed.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  const double clone_fid = qcore::fidelity(res.cloned, qcore::tensor(psi, psi));
  CHECK(clone_fid >= composition_fidelity(0.9, 0.9) - 1e-9);
}

}
