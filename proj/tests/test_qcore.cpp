#include <cmath>

#include "doctest.h"
#include "nogolab/qcore.hpp"

using namespace nogolab;
using namespace nogolab::qcore;

TEST_SUITE("qcore") {

TEST_CASE("pure state construction validates the norm") {
  Vec good(2);
  good << cx(1, 0), cx(0, 0);
  CHECK_NOTHROW(PureState(good, "qubits(1)"));
  Vec bad(2);
  bad << cx(0.5, 0), cx(0.5, 0);
  CHECK_THROWS_AS(PureState(bad, "qubits(1)"), DimensionMismatch);
}

TEST_CASE("density matrix construction rejects non-states") {
  Mat ok = Mat::Zero(2, 2);
  ok(0, 0) = 0.5;
  ok(1, 1) = 0.5;
  CHECK_NOTHROW(DensityMatrix(ok, "qubits(1)"));
  Mat bad_trace = Mat::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix(bad_trace, "qubits(1)"), DimensionMismatch);
  Mat not_psd = Mat::Zero(2, 2);
  not_psd(0, 0) = 1.5;
  not_psd(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix(not_psd, "qubits(1)"), DimensionMismatch);
}

TEST_CASE("operator norm matches a diagonal phase gap") {
  const double pi = 3.14159265358979323846;
  Mat u = Mat::Identity(2, 2);
  u(1, 1) = std::polar(1.0, pi / 6.0);
  // largest singular value of diag(0, e^{i pi/6} - 1) is 2 sin(pi/12)
  CHECK(operator_norm(Mat(u - Mat::Identity(2, 2))) ==
        doctest::Approx(2.0 * std::sin(pi / 12.0)).epsilon(1e-12));
  CHECK(operator_norm(Mat(Mat::Zero(3, 3))) == 0.0);
}

TEST_CASE("random unitaries are unitary and stream-deterministic") {
  RngStream a(42), b(42), c(43);
  Mat u1 = random_unitary(6, a);
  Mat u2 = random_unitary(6, b);
  Mat u3 = random_unitary(6, c);
  CHECK(operator_norm(Mat(u1.adjoint() * u1 - Mat::Identity(6, 6))) < 1e-12);
  CHECK((u1 - u2).norm() == 0.0);
  CHECK((u1 - u3).norm() > 1e-3);
}

TEST_CASE("fidelity and tensor behave on pure states") {
  RngStream rng(7);
  Vec v = random_unit_vector(4, rng);
  PureState psi(v, "qubits(2)");
  CHECK(fidelity(to_density(psi), psi) == doctest::Approx(1.0).epsilon(1e-12));
  PureState two = tensor(psi, psi);
  CHECK(two.dim() == 16);
  CHECK(pure_fidelity(two, two) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact distributions are normalized and measurement is consistent") {
  RngStream rng(11);
  Vec v = random_unit_vector(5, rng);
  PureState psi(v, "augmented(2)");
  Pvm pvm = computational_pvm(5);
  auto probs = exact_distribution(pvm, psi);
  double sum = 0.0;
  for (double p : probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  // a basis state measures to its own index with certainty
  Vec e2 = Vec::Zero(5);
  e2(2) = 1.0;
  RngStream mrng(3);
  auto [outcome, post] = measure(pvm, PureState(e2, "augmented(2)"), mrng);
  CHECK(outcome == 2);
  CHECK(pure_fidelity(post, PureState(e2, "augmented(2)")) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measurement replays bit-identically for a fixed stream") {
  RngStream rng(5);
  Vec v = random_unit_vector(4, rng);
  PureState psi(v, "qubits(2)");
  Pvm pvm = computational_pvm(4);
  RngStream s1(99), s2(99);
  auto [o1, p1] = measure(pvm, psi, s1);
  auto [o2, p2] = measure(pvm, psi, s2);
  CHECK(o1 == o2);
}

TEST_CASE("kron agrees with hand-computed blocks") {
  Mat a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  Mat k = kron(a, b);
  CHECK(k.rows() == 4);
  CHECK(k(0, 1) == cx(1, 0));
  CHECK(k(0, 3) == cx(2, 0));
  CHECK(k(2, 1) == cx(3, 0));
}

}
