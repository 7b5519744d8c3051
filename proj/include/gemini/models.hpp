// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gemini/core.hpp"

namespace gemini {

enum class ModelKind { CategoricalTable, Logistic, Mlp };

std::string to_string(ModelKind kind);
ModelKind model_kind_from_string(const std::string& name);

struct ModelSpec {
  ModelKind kind = ModelKind::Logistic;
  int n_samples = 0;          // CategoricalTable: number of rows in the logit table
  int input_dim = 0;          // Logistic / Mlp
  std::vector<int> hidden;    // Mlp hidden widths, ReLU activations
  int clusters = 2;
  std::uint64_t seed = 0;
  /// Standard deviation of Gaussian noise on the initial table logits.
  double init_scale = 0.0;

  static ModelSpec categorical_table(int n_samples, int clusters, std::uint64_t seed = 0);
  static ModelSpec logistic(int input_dim, int clusters, std::uint64_t seed = 0);
  static ModelSpec mlp(int input_dim, std::vector<int> hidden, int clusters,
                       std::uint64_t seed = 0);

  void validate() const;
  /// Layer widths from input to logits (empty for the table model).
  std::vector<int> layer_sizes() const;
};

/// Named slice of the flat parameter vector, stored column-major.
struct ParamBlock {
  std::string name;
  Index rows = 0;
  Index cols = 0;
  Index offset = 0;
};

struct ModelParams {
  Vector values;
  std::vector<ParamBlock> blocks;

  Index size() const { return values.size(); }
  Eigen::Map<const Matrix> block(std::size_t b) const;
  Eigen::Map<Matrix> block(std::size_t b);
};

/// Empty layout for `spec` with all parameters set to zero.
ModelParams zero_params(const ModelSpec& spec);

/// Weights ~ U(-sqrt(1/fan_in), +sqrt(1/fan_in)), zero biases, table logits
/// zero plus optional N(0, init_scale^2) noise. Deterministic per spec.seed.
ModelParams init_model(const ModelSpec& spec);

/// Intermediate values of one forward pass, reused by backward.
struct ForwardPass {
  std::vector<Matrix> pre;   // pre-activations per layer (last is logits)
  std::vector<Matrix> post;  // inputs to each layer (post[0] is X)
  std::vector<int> rows;     // table rows used (table model)
  Matrix probs;
};

/// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& logits);

/// `rows` selects table rows for the categorical model; when empty, rows
/// 0..X.rows()-1 are used. Other models ignore it.
ForwardPass forward_pass(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                         const std::vector<int>& rows = {});
SoftAssignment forward(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                       const std::vector<int>& rows = {});

/// Gradient of a scalar L with respect to every parameter given dL/dP.
Vector backward(const ModelParams& params, const ModelSpec& spec, const ForwardPass& pass,
                const Matrix& dL_dP);
Vector backward(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                const Matrix& dL_dP, const std::vector<int>& rows = {});

}  // namespace gemini
