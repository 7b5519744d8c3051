// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gemini/core.hpp"
#include "gemini/fdiv.hpp"
#include "gemini/geometry.hpp"
#include "gemini/ipm.hpp"
#include "gemini/models.hpp"

namespace gemini {

enum class ObjectiveFamily { FDiv, Mmd, Wasserstein, WassersteinSampled };

struct Objective {
  ObjectiveFamily family = ObjectiveFamily::FDiv;
  FDivergence divergence = FDivergence::kl();
  Mode mode = Mode::OvA;
  int sampled_pairs = 1;  // WassersteinSampled only

  bool needs_geometry() const { return family != ObjectiveFamily::FDiv; }
  bool needs_kernel() const { return family == ObjectiveFamily::Mmd; }
  /// e.g. "kl-ova", "hellinger-ovo", "alpha2-ova", "mmd-ovo", "wasserstein-ova",
  /// "wasserstein-ovo-sampled".
  std::string name() const;
  static Objective parse(const std::string& name, int sampled_pairs = 1);
};

/// Value and dI/dP of an objective on one batch. Empty clusters contribute
/// zero. `pair_seed` drives the pair draw of the sampled estimator.
ValueAndGrad evaluate_objective(const Objective& objective, const SoftAssignment& P,
                                const GeometryMatrix* geometry, std::uint64_t pair_seed = 0);

/// Objective value used for reporting; the sampled estimator is replaced by
/// the exact distinct-pair sum it estimates.
double report_objective(const Objective& objective, const SoftAssignment& P,
                        const GeometryMatrix* geometry);

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Vector m;
  Vector v;
  int step = 0;
};

/// One bias-corrected Adam step that ASCENDS along `grad`.
void adam_update(Vector& params, const Vector& grad, AdamState& state, const AdamHyper& hyper);

struct TrainConfig {
  Objective objective;
  std::optional<GeometrySpec> geometry;
  int epochs = 100;
  /// 0 means full batch.
  int batch_size = 0;
  AdamHyper adam;
  std::uint64_t seed = 0;
  /// When false the wall-time column is recorded as 0 so histories are
  /// byte-identical across runs.
  bool record_timing = true;
};

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;
  int nonempty = 0;
  double ari = 0.0;  // NaN without labels
  double ms = 0.0;
};

using TrainHistory = std::vector<EpochRecord>;

struct TrainResult {
  ModelParams params;
  TrainHistory history;
};

/// Mini-batch gradient ascent on the GEMINI objective. Geometry is built on
/// the full data set and sliced per batch.
TrainResult train(const ModelSpec& spec, const DataMatrix& X, const TrainConfig& cfg,
                  const LabelVector* labels = nullptr);

/// Same, starting from given parameters and a prebuilt geometry (may be null).
TrainResult train_from(const ModelSpec& spec, ModelParams params, const DataMatrix& X,
                       const TrainConfig& cfg, const GeometryMatrix* geometry,
                       const LabelVector* labels = nullptr);

/// Diagnostics of a fitted model on the full data (one history row).
EpochRecord evaluate_model(const ModelSpec& spec, const ModelParams& params, const DataMatrix& X,
                           const Objective& objective, const GeometryMatrix* geometry,
                           const LabelVector* labels);

}  // namespace gemini
