// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gemini/core.hpp"
#include "gemini/geometry.hpp"
#include "gemini/train.hpp"

namespace gemini {

/// Adjusted Rand index (Hubert and Arabie).
double ari(const LabelVector& truth, const LabelVector& pred);

/// Fraction of runs placing i and j in the same cluster.
Matrix consensus_matrix(const std::vector<LabelVector>& runs);

/// CDF(q_high) - CDF(q_low) of the off-diagonal consensus values.
double pac_score(const std::vector<LabelVector>& runs, double q_low = 0.1, double q_high = 0.9);

double shannon_entropy(const Vector& p);
/// log(sum p^order) / (1 - order); order 1 gives the Shannon entropy.
double renyi_entropy(const Vector& p, double order = 2.0);

struct BiasRow {
  std::string objective;
  int batch = 0;
  double mse = 0.0;
  /// Standard error of the MSE over trials.
  double se = 0.0;
};

/// Mean squared error of batch estimates against the full-data value. Each
/// trial draws `batch` rows without replacement from its own seeded stream.
/// IPM objectives need `geometry` on the full data.
std::vector<BiasRow> estimator_bias(const SoftAssignment& P_full,
                                    const std::vector<Objective>& objectives,
                                    const std::vector<int>& batch_sizes, int trials,
                                    std::uint64_t seed, const GeometryMatrix* kernel = nullptr,
                                    const GeometryMatrix* distance = nullptr);

struct BoundaryDemoResult {
  double epsilon = 0.0;
  double beta = 0.0;
  double pi_b = 0.0;
  double mi_a = 0.0;
  double mi_b = 0.0;
  double delta = 0.0;
};

/// Closed-form MI of a boundary splitting a two-Gaussian mixture at its
/// midpoint (A) against one enclosing the segment between the means (B).
/// Both are softened by epsilon; beta is the data mass between the means.
BoundaryDemoResult boundary_demo(double epsilon, double beta);

/// Mass between the means of an equal-weight two-Gaussian mixture whose
/// means are `separation` standard deviations apart.
double mixture_mass_between_means(double separation);

/// Plug-in MI of both boundaries on `samples` draws from the mixture with
/// means 0 and separation*sigma (sigma = 1).
BoundaryDemoResult boundary_empirical(double epsilon, double separation, int samples,
                                      std::uint64_t seed);

struct KMeansResult {
  LabelVector labels;
  Matrix centroids;
  double inertia = 0.0;
};

/// Lloyd iterations from k-means++ seeds; best of n_init restarts.
KMeansResult kmeans(const DataMatrix& X, int K, std::uint64_t seed, int n_init = 10,
                    int max_iter = 300);

}  // namespace gemini
