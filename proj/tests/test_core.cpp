// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "gemini/core.hpp"
#include "gemini/rng.hpp"
#include "oracles.hpp"

using namespace gemini;

TEST_SUITE("core") {

TEST_CASE("marginal is the column mean") {
  Matrix m(2, 2);
  m << 1, 0, 0, 1;
  CHECK(marginal(SoftAssignment(m)).isApprox(Vector::Constant(2, 0.5)));

  Matrix one = Matrix::Constant(1, 4, 0.25);
  CHECK(marginal(SoftAssignment(one)).isApprox(Vector::Constant(4, 0.25)));

  Matrix p(4, 2);
  p << 0.8, 0.2, 0.2, 0.8, 0.8, 0.2, 0.8, 0.2;
  const Vector pi = marginal(SoftAssignment(p));
  CHECK(pi(0) == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(pi(1) == doctest::Approx(0.35).epsilon(1e-15));
}

TEST_CASE("marginal ignores row order") {
  Rng rng(3);
  const SoftAssignment P(oracle::random_probs(20, 4, rng));
  const auto perm = rng.permutation(20);
  CHECK((marginal(P) - marginal(P.select_rows(perm))).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("cluster weights") {
  Matrix m(2, 2);
  m << 1, 0, 0, 1;
  const Vector w = cluster_weights(SoftAssignment(m), 0);
  CHECK(w(0) == 1.0);
  CHECK(w(1) == 0.0);

  const Vector u = cluster_weights(SoftAssignment(Matrix::Constant(5, 3, 1.0 / 3.0)), 2);
  CHECK(u.isApprox(Vector::Constant(5, 0.2)));

  Matrix p(2, 2);
  p << 0.8, 0.2, 0.4, 0.6;
  const Vector v = cluster_weights(SoftAssignment(p), 0);
  CHECK(v(0) == doctest::Approx(2.0 / 3.0));
  CHECK(v(1) == doctest::Approx(1.0 / 3.0));

  Matrix dead(2, 2);
  dead << 1, 0, 1, 0;
  CHECK_THROWS_AS(cluster_weights(SoftAssignment(dead), 1), EmptyCluster);
}

TEST_CASE("cluster weights sum to one and ignore column scale") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix P = oracle::random_probs(15, 3, rng);
    for (Index k = 0; k < 3; ++k) {
      const Vector w = cluster_weights(SoftAssignment(P), k);
      CHECK(std::abs(w.sum() - 1.0) < 1e-12);
      Matrix scaled = P;
      scaled.col(k) *= 0.37;
      const Vector ws = cluster_weights(SoftAssignment::unchecked(scaled), k);
      CHECK((w - ws).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("nonempty clusters and argmax ties") {
  CHECK(nonempty_clusters(SoftAssignment(Matrix::Identity(3, 3))) == 3);
  Matrix all0(3, 2);
  all0 << 0.9, 0.1, 0.6, 0.4, 1, 0;
  CHECK(nonempty_clusters(SoftAssignment(all0)) == 1);
  Matrix tie(2, 2);
  tie << 0.5, 0.5, 0.9, 0.1;
  CHECK(nonempty_clusters(SoftAssignment(tie)) == 1);
  CHECK(argmax_labels(SoftAssignment(tie))[0] == 0);

  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const int K = 2 + static_cast<int>(rng.uniform_int(6));
    const int c = nonempty_clusters(SoftAssignment(oracle::random_probs(7, K, rng)));
    CHECK(c >= 1);
    CHECK(c <= K);
  }
}

TEST_CASE("soft assignment validation") {
  CHECK_THROWS_AS(SoftAssignment(Matrix::Constant(2, 1, 1.0)), DimensionMismatch);
  Matrix bad(1, 2);
  bad << 0.7, 0.7;
  CHECK_THROWS_AS(SoftAssignment{bad}, InvalidArgument);
  bad << 1.2, -0.2;
  CHECK_THROWS_AS(SoftAssignment{bad}, InvalidArgument);
  Matrix nearly(1, 2);
  nearly << 0.5, 0.5 + 5e-10;
  CHECK_NOTHROW(SoftAssignment{nearly});
}

TEST_CASE("data matrix rejects non-finite values") {
  Matrix X = Matrix::Zero(2, 2);
  X(1, 1) = std::nan("");
  CHECK_THROWS_AS(DataMatrix{X}, InvalidArgument);
  CHECK_THROWS_AS(DataMatrix{Matrix(0, 2)}, DimensionMismatch);
}

TEST_CASE("mode names") {
  CHECK(mode_from_string("ova") == Mode::OvA);
  CHECK(mode_from_string("OvO") == Mode::OvO);
  CHECK(to_string(Mode::OvO) == "ovo");
  CHECK_THROWS_AS(mode_from_string("ovx"), ConfigError);
}

TEST_CASE("rng streams are reproducible and independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng s1 = Rng(42).split(1), s2 = Rng(42).split(2);
  CHECK(s1.next_u64() != s2.next_u64());
  Rng g(1);
  double mean = 0.0, var = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = g.normal();
    mean += z;
    var += z * z;
  }
  mean /= n;
  var = var / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
  double gm = 0.0;
  for (int i = 0; i < n; ++i) gm += g.gamma(0.5);
  CHECK(gm / n == doctest::Approx(0.5).epsilon(0.02));
}

}  // TEST_SUITE
