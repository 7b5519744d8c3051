// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

// Seeded experiment recipes shared by the CLI `repro` commands and the
// acceptance binary. Sizes are chosen to run on a single core in seconds.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gemini/eval.hpp"
#include "gemini/models.hpp"
#include "gemini/synthdata.hpp"
#include "gemini/train.hpp"

namespace gemini {

struct Recipe {
  std::string name;
  LabeledData data;
  ModelSpec model;
  TrainConfig config;
};

struct RecipeOutcome {
  TrainResult result;
  LabelVector predicted;
  double ari = 0.0;
  int nonempty = 0;
};

RecipeOutcome run_recipe(const Recipe& recipe);

/// Three separated Gaussians with a free categorical table per sample.
/// `objective` is "mmd-ova" (linear kernel) or any f-divergence name.
Recipe categorical_recipe(const std::string& objective, std::uint64_t seed);

/// Gaussian/Student-t mixture on a fixed data seed, MMD-OvA MLP trained
/// from `train_seed`.
Recipe gstm_recipe(double rho, std::uint64_t train_seed, std::uint64_t data_seed = 0);
/// The data set alone, for the k-means baseline.
LabeledData gstm_data(double rho, std::uint64_t data_seed = 0);

/// Two moons with a shortest-path geometry for the IPM objectives.
Recipe moons_recipe(const std::string& objective, int clusters, std::uint64_t seed = 0);

struct BenchRow {
  std::string objective;
  int clusters = 0;
  /// Median over repeats of one value-and-gradient evaluation.
  double ms = 0.0;
};

/// The objectives timed by `bench`, in expected order of cost.
std::vector<std::string> bench_objectives();

/// Times one objective evaluation with gradient on N points in the plane
/// (linear kernel, Euclidean distance) for every K in `clusters`.
std::vector<BenchRow> run_bench(int n, const std::vector<int>& clusters, int repeats,
                                std::uint64_t seed);

/// Objectives reported by the bias study by default. Wasserstein is left out:
/// its full-data value at N=1000 takes minutes.
std::vector<std::string> bias_objectives();

/// Estimator bias of batch plug-ins on Dirichlet(1) predictions over N
/// Gaussian points in the plane.
std::vector<BiasRow> bias_study(int n, int K, const std::vector<std::string>& objectives,
                                const std::vector<int>& batches, int trials, std::uint64_t seed);

struct SeparationRow {
  std::string objective;
  double balanced = 0.0;  // clusters {-2} {0} {2}
  double merged = 0.0;    // clusters {-2, 0} {2}
};

/// Three collinear Gaussians; each objective evaluated on the true three-way
/// split and on a split that merges the two left components.
std::vector<SeparationRow> separation_study(int n_per, std::uint64_t seed);

/// Closed-form boundary comparison on a grid of epsilons and betas.
std::vector<BoundaryDemoResult> boundary_sweep(const std::vector<double>& epsilons,
                                               const std::vector<double>& betas);

}  // namespace gemini
