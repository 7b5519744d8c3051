// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gemini/rng.hpp"
#include "gemini/transport.hpp"
#include "oracles.hpp"

using namespace gemini;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Vector random_histogram(int n, Rng& rng, double zero_prob = 0.0) {
  Vector w(n);
  for (int i = 0; i < n; ++i) w(i) = rng.uniform() < zero_prob ? 0.0 : rng.uniform();
  if (w.sum() == 0.0) w(0) = 1.0;
  return w / w.sum();
}

Matrix line_costs(const std::vector<double>& s) {
  const auto n = static_cast<Index>(s.size());
  Matrix C(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) C(i, j) = std::abs(s[i] - s[j]);
  return C;
}

void check_solution(const TransportSolution& sol, const Vector& a, const Vector& b,
                    const Matrix& C) {
  CHECK((sol.plan.rowwise().sum() - a).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK((sol.plan.colwise().sum().transpose() - b).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(std::abs(sol.value - sol.plan.cwiseProduct(C).sum()) <= 1e-8);
  CHECK((sol.plan.array() >= 0.0).all());
  for (Index i = 0; i < a.size(); ++i)
    for (Index j = 0; j < b.size(); ++j) {
      if (sol.plan(i, j) > 0.0) {
        CHECK(std::abs(sol.dual_u(i) + sol.dual_v(j) - C(i, j)) <= 1e-7);
      }
      if (a(i) >= kTransportPrune && b(j) >= kTransportPrune) {
        CHECK(sol.dual_u(i) + sol.dual_v(j) <= C(i, j) + 1e-9);
      }
    }
  // Strong duality.
  CHECK(std::abs(a.dot(sol.dual_u) + b.dot(sol.dual_v) - sol.value) <= 1e-8);
}

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("documented small problems") {
  Matrix C(2, 2);
  C << 0, 2, 2, 0;
  CHECK(exact_emd(vec({1, 0}), vec({0.5, 0.5}), C).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exact_emd(vec({0.5, 0.5}), vec({0, 1}), C).value == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(1);
  const Vector a = random_histogram(6, rng);
  Matrix D = line_costs({0, 1, 3, 4, 7, 8});
  const auto same = exact_emd(a, a, D);
  CHECK(same.value == 0.0);
  CHECK((same.plan - Matrix(a.asDiagonal())).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("one-dimensional oracle") {
  CHECK(wasserstein_1d_oracle({0, 1}, vec({0.3, 0.7}), vec({0.3, 0.7})) == 0.0);
  CHECK(wasserstein_1d_oracle({0, 2}, vec({1, 0}), vec({0, 1})) == 2.0);
  CHECK(wasserstein_1d_oracle({0, 1, 3}, vec({0.5, 0.5, 0}), vec({0, 0, 1})) == 2.5);
  CHECK_THROWS_AS(wasserstein_1d_oracle({0, 0}, vec({1, 0}), vec({0, 1})), InvalidArgument);
}

TEST_CASE("exact solver matches the line oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_int(16));
    std::vector<double> s(static_cast<std::size_t>(n));
    double x = rng.normal();
    for (auto& v : s) {
      v = x;
      x += 0.05 + rng.uniform();
    }
    const Vector a = random_histogram(n, rng, 0.2), b = random_histogram(n, rng, 0.2);
    const Matrix C = line_costs(s);
    const auto sol = exact_emd(a, b, C);
    CHECK(std::abs(sol.value - wasserstein_1d_oracle(s, a, b)) <= 1e-9);
    check_solution(sol, a, b, C);
  }
}

TEST_CASE("exact solver matches rational vertex enumeration") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(3));
    std::vector<oracle::Rational> ra(n), rb(n);
    Vector a(n), b(n);
    for (auto* pair : {&ra, &rb}) {
      int left = 16;
      for (int i = 0; i < n; ++i) {
        const int take = i + 1 == n ? left : static_cast<int>(rng.uniform_int(left + 1));
        (*pair)[i] = oracle::Rational(take, 16);
        left -= take;
      }
    }
    for (int i = 0; i < n; ++i) {
      a(i) = boost::rational_cast<double>(ra[i]);
      b(i) = boost::rational_cast<double>(rb[i]);
    }
    std::vector<std::vector<long long>> ic(n, std::vector<long long>(n));
    Matrix C(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ic[i][j] = static_cast<long long>(rng.uniform_int(10));
        C(i, j) = static_cast<double>(ic[i][j]);
      }
    const auto want = oracle::brute_force_emd(ra, rb, ic);
    CHECK(exact_emd(a, b, C).value == boost::rational_cast<double>(want));
  }
}

TEST_CASE("symmetry, scaling and triangle inequality") {
  Rng rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(7));
    Matrix pts(n, 2);
    for (Index i = 0; i < pts.size(); ++i) pts.data()[i] = rng.normal();
    Matrix C(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = (pts.row(i) - pts.row(j)).norm();
    const Vector a = random_histogram(n, rng), b = random_histogram(n, rng),
                 c = random_histogram(n, rng);
    const double ab = exact_emd(a, b, C).value;
    CHECK(std::abs(ab - exact_emd(b, a, Matrix(C.transpose())).value) <= 1e-12);
    CHECK(std::abs(3.5 * ab - exact_emd(a, b, Matrix(3.5 * C)).value) <= 1e-12);
    CHECK(exact_emd(a, c, C).value <= ab + exact_emd(b, c, C).value + 1e-12);
  }
}

TEST_CASE("solutions satisfy the optimality certificate on random costs") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(20));
    Matrix C(n, n);
    for (Index i = 0; i < C.size(); ++i) C.data()[i] = rng.uniform(0.0, 5.0);
    const Vector a = random_histogram(n, rng, 0.15), b = random_histogram(n, rng, 0.15);
    check_solution(exact_emd(a, b, C), a, b, C);
  }
}

TEST_CASE("duals are normalised and pruned weights are handled") {
  Matrix C(3, 3);
  C << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  const Vector a = vec({0, 0.5, 0.5}), b = vec({0.5, 0.5, 0});
  const auto sol = exact_emd(a, b, C);
  CHECK(sol.value == doctest::Approx(1.0));
  CHECK(sol.dual_u(1) == 0.0);
  CHECK(sol.plan.row(0).isZero());
  CHECK(sol.plan.col(2).isZero());
  check_solution(sol, a, b, C);
}

TEST_CASE("errors") {
  Matrix C = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(exact_emd(vec({0, 0}), vec({0.5, 0.5}), C), Degenerate);
  CHECK_THROWS_AS(exact_emd(vec({0.6, 0.6}), vec({0.5, 0.5}), C), InvalidArgument);
  CHECK_THROWS_AS(exact_emd(vec({1}), vec({0.5, 0.5}), C), DimensionMismatch);
  const GeometryMatrix K(Matrix::Identity(2, 2), GeometryMatrix::Tag::Kernel);
  CHECK_THROWS_AS(exact_emd(vec({1, 0}), vec({0, 1}), K), NotADistance);
}

TEST_CASE("Dirac approximations converge on the line") {
  // Cluster laws p(x|y) for x ~ N(0,1) and p(y=1|x) = sigmoid(2x). The exact
  // W1 between them comes from quadrature of the CDF gap.
  const auto sigmoid = [](double t) { return 1.0 / (1.0 + std::exp(-t)); };
  double truth = 0.0;
  {
    const double h = 1e-4;
    double F0 = 0.0, F1 = 0.0, m0 = 0.0, m1 = 0.0;
    std::vector<double> d0, d1;
    for (double x = -9.0; x <= 9.0; x += h) {
      const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
      d0.push_back(phi * (1.0 - sigmoid(2.0 * x)));
      d1.push_back(phi * sigmoid(2.0 * x));
      m0 += d0.back() * h;
      m1 += d1.back() * h;
    }
    for (std::size_t i = 0; i < d0.size(); ++i) {
      F0 += d0[i] * h / m0;
      F1 += d1[i] * h / m1;
      truth += std::abs(F0 - F1) * h;
    }
  }
  // Each repetition draws one pool and uses nested prefixes of it.
  const int reps = 64, largest = 1600;
  std::vector<int> sizes;
  for (int n = 50; n <= largest; n *= 2) sizes.push_back(n);
  std::vector<double> errors(sizes.size(), 0.0), steps(sizes.size() - 1, 0.0);
  for (int r = 0; r < reps; ++r) {
    Rng rng = Rng(555).split(static_cast<std::uint64_t>(r));
    std::vector<double> pool(static_cast<std::size_t>(largest));
    for (auto& v : pool) v = rng.normal();
    double previous = 0.0;
    for (std::size_t s = 0; s < sizes.size(); ++s) {
      const int n = sizes[s];
      std::vector<double> x(pool.begin(), pool.begin() + n);
      std::sort(x.begin(), x.end());
      Vector m0(n), m1(n);
      for (int i = 0; i < n; ++i) {
        m1(i) = sigmoid(2.0 * x[i]);
        m0(i) = 1.0 - m1(i);
      }
      m0 /= m0.sum();
      m1 /= m1.sum();
      const double line = wasserstein_1d_oracle(x, m0, m1);
      if (n <= 200 && r < 8) CHECK(std::abs(exact_emd(m0, m1, line_costs(x)).value - line) <= 1e-9);
      errors[s] += std::abs(line - truth) / reps;
      if (s > 0) steps[s - 1] += std::abs(line - previous) / reps;
      previous = line;
    }
  }
  CHECK(errors.back() < errors.front());
  CHECK(errors.back() < 0.5 * errors.front());
  CHECK(steps.back() < steps.front());
  CHECK(steps.back() < 0.5 * steps.front());
}

}  // TEST_SUITE
