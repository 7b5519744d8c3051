// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "gemini/eval.hpp"
#include "gemini/rng.hpp"

namespace gemini {

std::string Objective::name() const {
  const std::string mode_name(to_string(mode));
  switch (family) {
    case ObjectiveFamily::FDiv: return divergence.name() + "-" + mode_name;
    case ObjectiveFamily::Mmd: return "mmd-" + mode_name;
    case ObjectiveFamily::Wasserstein: return "wasserstein-" + mode_name;
    case ObjectiveFamily::WassersteinSampled: return "wasserstein-ovo-sampled";
  }
  return "unknown";
}

Objective Objective::parse(const std::string& name, int sampled_pairs) {
  Objective obj;
  if (name == "wasserstein-ovo-sampled") {
    if (sampled_pairs < 1) throw ConfigError("sampled pairs must be >= 1");
    obj.family = ObjectiveFamily::WassersteinSampled;
    obj.mode = Mode::OvO;
    obj.sampled_pairs = sampled_pairs;
    return obj;
  }
  const auto dash = name.rfind('-');
  if (dash == std::string::npos) throw ConfigError("objective '" + name + "' lacks a -ova/-ovo suffix");
  const std::string head = name.substr(0, dash);
  obj.mode = mode_from_string(name.substr(dash + 1));
  if (head == "mmd") {
    obj.family = ObjectiveFamily::Mmd;
  } else if (head == "wasserstein") {
    obj.family = ObjectiveFamily::Wasserstein;
  } else if (head.rfind("alpha", 0) == 0) {
    if (obj.mode != Mode::OvA) throw ConfigError("alpha objectives are OvA only");
    double alpha = 0.0;
    try {
      alpha = std::stod(head.substr(5));
    } catch (const std::exception&) {
      throw ConfigError("objective '" + name + "' has no alpha value");
    }
    obj.divergence = FDivergence::alpha_divergence(alpha);
  } else {
    obj.divergence = FDivergence{fdiv_kind_from_string(head)};
  }
  return obj;
}

ValueAndGrad evaluate_objective(const Objective& objective, const SoftAssignment& P,
                                const GeometryMatrix* geometry, std::uint64_t pair_seed) {
  if (objective.needs_geometry() && geometry == nullptr) {
    throw ConfigError(objective.name() + " needs a geometry");
  }
  switch (objective.family) {
    case ObjectiveFamily::FDiv: {
      const FDivOptions options{true};
      if (objective.divergence.kind == FDivKind::KL && objective.mode == Mode::OvA) {
        ValueAndGrad out;
        out.value = kl_ova_value_grad(P, out.grad, options);
        return out;
      }
      return {fdiv_gemini(objective.divergence, objective.mode, P, options),
              fdiv_gemini_grad(objective.divergence, objective.mode, P, options)};
    }
    case ObjectiveFamily::Mmd:
      return mmd_gemini_value_grad(objective.mode, P, *geometry, IpmOptions{true});
    case ObjectiveFamily::Wasserstein:
      return wasserstein_gemini_value_grad(objective.mode, P, *geometry);
    case ObjectiveFamily::WassersteinSampled:
      return wasserstein_ovo_sampled_value_grad(
          P, *geometry,
          make_pair_plan(static_cast<int>(P.k()), objective.sampled_pairs, pair_seed));
  }
  return {};
}

double report_objective(const Objective& objective, const SoftAssignment& P,
                        const GeometryMatrix* geometry) {
  if (objective.needs_geometry() && geometry == nullptr) {
    throw ConfigError(objective.name() + " needs a geometry");
  }
  // Same code path as training, so a re-evaluated checkpoint reproduces the
  // recorded history bit for bit.
  if (objective.family == ObjectiveFamily::WassersteinSampled) {
    return wasserstein_ovo_distinct_pairs(P, *geometry);
  }
  return evaluate_objective(objective, P, geometry).value;
}

void adam_update(Vector& params, const Vector& grad, AdamState& state, const AdamHyper& hyper) {
  if (grad.size() != params.size()) throw DimensionMismatch("gradient and parameter sizes differ");
  if (state.m.size() != params.size()) {
    state.m = Vector::Zero(params.size());
    state.v = Vector::Zero(params.size());
    state.step = 0;
  }
  ++state.step;
  state.m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * grad;
  state.v = hyper.beta2 * state.v + (1.0 - hyper.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(hyper.beta1, state.step);
  const double c2 = 1.0 - std::pow(hyper.beta2, state.step);
  params.array() += hyper.learning_rate * (state.m.array() / c1) /
                    ((state.v.array() / c2).sqrt() + hyper.epsilon);
}

EpochRecord evaluate_model(const ModelSpec& spec, const ModelParams& params, const DataMatrix& X,
                           const Objective& objective, const GeometryMatrix* geometry,
                           const LabelVector* labels) {
  const SoftAssignment P = forward(params, spec, X);
  EpochRecord rec;
  rec.objective = report_objective(objective, P, geometry);
  rec.nonempty = nonempty_clusters(P);
  rec.ari = labels ? ari(*labels, argmax_labels(P)) : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

TrainResult train(const ModelSpec& spec, const DataMatrix& X, const TrainConfig& cfg,
                  const LabelVector* labels) {
  std::optional<GeometryMatrix> geometry;
  if (cfg.objective.needs_geometry()) {
    if (!cfg.geometry) throw ConfigError(cfg.objective.name() + " needs a geometry spec");
    if (cfg.objective.needs_kernel() != cfg.geometry->is_kernel()) {
      throw ConfigError(cfg.objective.name() + (cfg.objective.needs_kernel()
                                                    ? " needs a kernel geometry"
                                                    : " needs a distance geometry"));
    }
    geometry = build_geometry(X, *cfg.geometry);
  }
  return train_from(spec, init_model(spec), X, cfg, geometry ? &*geometry : nullptr, labels);
}

TrainResult train_from(const ModelSpec& spec, ModelParams params, const DataMatrix& X,
                       const TrainConfig& cfg, const GeometryMatrix* geometry,
                       const LabelVector* labels) {
  const auto n = static_cast<int>(X.rows());
  if (cfg.objective.needs_geometry() && geometry == nullptr) {
    throw ConfigError(cfg.objective.name() + " needs a geometry");
  }
  if (geometry && geometry->size() != X.rows()) {
    throw DimensionMismatch("geometry size does not match the data");
  }
  if (cfg.batch_size < 0 || cfg.batch_size > n) {
    throw ConfigError("batch size " + std::to_string(cfg.batch_size) + " exceeds N = " +
                      std::to_string(n));
  }
  if (!(cfg.adam.learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
  if (cfg.epochs < 0) throw ConfigError("epochs must be nonnegative");
  if (labels && static_cast<int>(labels->size()) != n) {
    throw LengthMismatch("labels and data differ in length");
  }
  if (spec.kind == ModelKind::CategoricalTable && spec.n_samples != n) {
    throw DimensionMismatch("categorical table size does not match the data");
  }

  const int batch = cfg.batch_size == 0 ? n : cfg.batch_size;
  const bool full_batch = batch == n;
  Rng shuffle = Rng(cfg.seed).split(1);
  const Rng pair_streams = Rng(cfg.seed).split(2);

  TrainResult result;
  result.params = std::move(params);
  AdamState adam;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t step = 0;
  // Full batch: the end-of-epoch evaluation sees the parameters of the next
  // step, so its gradient is kept. The sampled estimator reports a different
  // quantity than it optimizes and is always recomputed.
  const bool reuse = full_batch && cfg.objective.family != ObjectiveFamily::WassersteinSampled;
  std::optional<ForwardPass> cached_pass;
  std::optional<ValueAndGrad> cached_vg;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    if (!full_batch) order = shuffle.permutation(n);
    for (int lo = 0; lo < n; lo += batch) {
      const int hi = std::min(n, lo + batch);
      ForwardPass pass;
      std::optional<GeometryMatrix> sliced;
      const GeometryMatrix* batch_geometry = geometry;
      if (cached_pass) {
        pass = std::move(*cached_pass);
        cached_pass.reset();
      } else if (full_batch) {
        pass = forward_pass(result.params, spec, X);
      } else {
        const std::vector<int> idx(order.begin() + lo, order.begin() + hi);
        pass = spec.kind == ModelKind::CategoricalTable
                   ? forward_pass(result.params, spec, X, idx)
                   : forward_pass(result.params, spec, X.select_rows(idx));
        if (geometry) {
          sliced = geometry->slice(idx);
          batch_geometry = &*sliced;
        }
      }
      ValueAndGrad vg;
      if (cached_vg) {
        vg = std::move(*cached_vg);
        cached_vg.reset();
      } else {
        vg = evaluate_objective(cfg.objective, SoftAssignment(pass.probs), batch_geometry,
                                pair_streams.split(step).seed());
      }
      if (!std::isfinite(vg.value) || !vg.grad.allFinite()) {
        throw NumericError("non-finite objective or gradient at epoch " + std::to_string(epoch));
      }
      const Vector g = backward(result.params, spec, pass, vg.grad);
      if (!g.allFinite()) throw NumericError("non-finite parameter gradient at epoch " + std::to_string(epoch));
      adam_update(result.params.values, g, adam, cfg.adam);
      if (!result.params.values.allFinite()) {
        throw NumericError("parameters diverged at epoch " + std::to_string(epoch));
      }
      ++step;
    }
    EpochRecord rec;
    if (reuse) {
      ForwardPass next = forward_pass(result.params, spec, X);
      const SoftAssignment P(next.probs);
      ValueAndGrad vg = evaluate_objective(cfg.objective, P, geometry);
      rec.objective = vg.value;
      rec.nonempty = nonempty_clusters(P);
      rec.ari = labels ? ari(*labels, argmax_labels(P)) : std::numeric_limits<double>::quiet_NaN();
      if (vg.grad.allFinite()) {
        cached_pass = std::move(next);
        cached_vg = std::move(vg);
      }
    } else {
      rec = evaluate_model(spec, result.params, X, cfg.objective, geometry, labels);
    }
    if (!std::isfinite(rec.objective)) {
      throw NumericError("non-finite objective at the end of epoch " + std::to_string(epoch));
    }
    rec.epoch = epoch;
    if (cfg.record_timing) {
      rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    result.history.push_back(rec);
  }
  return result;
}

}  // namespace gemini
