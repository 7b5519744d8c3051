// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/synthdata.hpp"

#include <cmath>
#include <numbers>

#include "gemini/rng.hpp"

namespace gemini {

LabeledData gen_gaussian_mixture(const Matrix& means, double sigma, int n_per,
                                 std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
  if (n_per < 1) throw InvalidArgument("need at least one sample per component");
  if (means.rows() < 1 || means.cols() < 1) throw DimensionMismatch("means matrix is empty");
  const Index C = means.rows(), D = means.cols();
  Matrix X(C * n_per, D);
  LabelVector labels;
  labels.reserve(static_cast<std::size_t>(C * n_per));
  const Rng root(seed);
  for (Index c = 0; c < C; ++c) {
    Rng rng = root.split(static_cast<std::uint64_t>(c));
    for (int s = 0; s < n_per; ++s) {
      const Index row = c * n_per + s;
      for (Index d = 0; d < D; ++d) X(row, d) = means(c, d) + sigma * rng.normal();
      labels.push_back(static_cast<int>(c));
    }
  }
  return {DataMatrix(std::move(X)), std::move(labels)};
}

LabeledData gen_gstm(const GstmConfig& cfg) {
  if (!(cfg.alpha > 0.0) || !(cfg.sigma > 0.0)) throw InvalidArgument("alpha and sigma must be positive");
  if (!(cfg.rho > 0.0)) throw InvalidArgument("rho must be positive");
  if (cfg.n < 1) throw InvalidArgument("need at least one sample per component");
  const double a = cfg.alpha;
  Matrix means(4, 2);
  means << a, a, a, -a, -a, a, -a, -a;
  const int n = cfg.n;
  Matrix X(4 * n, 2);
  LabelVector labels;
  labels.reserve(static_cast<std::size_t>(4 * n));
  const Rng root(cfg.seed);
  for (int c = 0; c < 4; ++c) {
    Rng rng = root.split(static_cast<std::uint64_t>(c));
    for (int s = 0; s < n; ++s) {
      const double z0 = rng.normal(), z1 = rng.normal();
      double scale = cfg.sigma;
      if (c == 3) scale *= std::sqrt(cfg.rho / rng.chi_squared(cfg.rho));
      X(c * n + s, 0) = means(c, 0) + scale * z0;
      X(c * n + s, 1) = means(c, 1) + scale * z1;
      labels.push_back(c);
    }
  }
  return {DataMatrix(std::move(X)), std::move(labels)};
}

LabeledData gen_moons(int n, double radius, double noise, double offset, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("need at least one sample");
  if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
  if (!(noise >= 0.0)) throw InvalidArgument("noise must be nonnegative");
  Rng rng(seed);
  Matrix X(n, 2);
  LabelVector labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int label = rng.uniform() < 0.5 ? 0 : 1;
    const double theta = rng.uniform(0.0, std::numbers::pi);
    double x = radius * std::cos(theta), y = radius * std::sin(theta);
    if (label == 1) {
      x = radius - x;
      y = offset - y;
    }
    X(i, 0) = x + noise * rng.normal();
    X(i, 1) = y + noise * rng.normal();
    labels[static_cast<std::size_t>(i)] = label;
  }
  return {DataMatrix(std::move(X)), std::move(labels)};
}

SoftAssignment gen_dirichlet_predictions(int n, int K, double concentration, std::uint64_t seed) {
  if (!(concentration > 0.0)) throw InvalidArgument("concentration must be positive");
  if (n < 1 || K < 2) throw InvalidArgument("need n >= 1 and K >= 2");
  Rng rng(seed);
  Matrix P(n, K);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    do {
      total = 0.0;
      for (int k = 0; k < K; ++k) {
        P(i, k) = rng.gamma(concentration);
        total += P(i, k);
      }
    } while (!(total > 0.0));
    P.row(i) /= total;
  }
  return SoftAssignment(std::move(P));
}

}  // namespace gemini
