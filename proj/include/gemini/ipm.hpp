// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gemini/core.hpp"
#include "gemini/geometry.hpp"

namespace gemini {

struct IpmOptions {
  /// MMD only: drop clusters with marginal below kEmptyMass instead of
  /// throwing EmptyCluster. Wasserstein always drops them.
  bool skip_empty = false;
};

struct ValueAndGrad {
  double value = 0.0;
  Matrix grad;
};

/// MMD GEMINI through the kernel trick. OvA: sum_k pi_k MMD(p(x|k), p(x));
/// OvO: sum over ordered pairs a != b of pi_a pi_b MMD(p(x|a), p(x|b)).
double mmd_gemini(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                  const IpmOptions& options = {});
Matrix mmd_gemini_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                       const IpmOptions& options = {});
ValueAndGrad mmd_gemini_value_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                                   const IpmOptions& options = {});

/// Wasserstein-1 GEMINI on weighted Dirac approximations of the cluster
/// distributions, solved exactly. Empty clusters contribute nothing.
double wasserstein_gemini(Mode mode, const SoftAssignment& P, const GeometryMatrix& D);
Matrix wasserstein_gemini_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& D);
ValueAndGrad wasserstein_gemini_value_grad(Mode mode, const SoftAssignment& P,
                                           const GeometryMatrix& D);

/// sum_{a<b} pi_a pi_b W(p(x|a), p(x|b)): half of the OvO value.
double wasserstein_ovo_distinct_pairs(const SoftAssignment& P, const GeometryMatrix& D);

/// M cluster pairs (a, b), a != b, each drawn uniformly among ordered distinct pairs.
struct PairSamplePlan {
  int M = 1;
  std::uint64_t seed = 0;
  std::vector<std::pair<int, int>> pairs;
};

PairSamplePlan make_pair_plan(int K, int M, std::uint64_t seed);

/// K(K-1)/(2M) * sum over sampled pairs of pi_a pi_b W(p(x|a), p(x|b)).
/// Unbiased for wasserstein_ovo_distinct_pairs.
double wasserstein_ovo_sampled(const SoftAssignment& P, const GeometryMatrix& D,
                               const PairSamplePlan& plan);
ValueAndGrad wasserstein_ovo_sampled_value_grad(const SoftAssignment& P, const GeometryMatrix& D,
                                                const PairSamplePlan& plan);

}  // namespace gemini
