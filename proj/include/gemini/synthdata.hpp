// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "gemini/core.hpp"

namespace gemini {

struct LabeledData {
  DataMatrix X;
  LabelVector labels;
};

/// `n_per` isotropic Gaussian draws around each row of `means`, grouped by
/// component in row order.
LabeledData gen_gaussian_mixture(const Matrix& means, double sigma, int n_per,
                                 std::uint64_t seed);

struct GstmConfig {
  double alpha = 3.0;
  double sigma = 1.0;
  double rho = 1.0;
  int n = 250;
  std::uint64_t seed = 0;
};

/// Three Gaussians at (a,a), (a,-a), (-a,a) and a Student-t with rho degrees
/// of freedom at (-a,-a); labels 0..3.
LabeledData gen_gstm(const GstmConfig& cfg);

/// Two interleaved half circles. Cluster 0 lies on the upper half of the
/// circle of `radius` around the origin, cluster 1 on the lower half of the
/// circle around (radius, offset). Labels are Bernoulli(0.5).
LabeledData gen_moons(int n, double radius, double noise, double offset, std::uint64_t seed);

/// Rows drawn from a symmetric Dirichlet(concentration).
SoftAssignment gen_dirichlet_predictions(int n, int K, double concentration, std::uint64_t seed);

}  // namespace gemini
