// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/models.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "gemini/rng.hpp"

namespace gemini {

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::CategoricalTable: return "categorical_table";
    case ModelKind::Logistic: return "logistic";
    case ModelKind::Mlp: return "mlp";
  }
  return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "categorical_table" || name == "categorical" || name == "table") {
    return ModelKind::CategoricalTable;
  }
  if (name == "logistic") return ModelKind::Logistic;
  if (name == "mlp") return ModelKind::Mlp;
  throw ConfigError("unknown model kind '" + name + "'");
}

ModelSpec ModelSpec::categorical_table(int n_samples, int clusters, std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::CategoricalTable;
  spec.n_samples = n_samples;
  spec.clusters = clusters;
  spec.seed = seed;
  return spec;
}

ModelSpec ModelSpec::logistic(int input_dim, int clusters, std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::Logistic;
  spec.input_dim = input_dim;
  spec.clusters = clusters;
  spec.seed = seed;
  return spec;
}

ModelSpec ModelSpec::mlp(int input_dim, std::vector<int> hidden, int clusters,
                         std::uint64_t seed) {
  ModelSpec spec;
  spec.kind = ModelKind::Mlp;
  spec.input_dim = input_dim;
  spec.hidden = std::move(hidden);
  spec.clusters = clusters;
  spec.seed = seed;
  return spec;
}

void ModelSpec::validate() const {
  if (clusters < 2) throw ConfigError("a model needs at least 2 output clusters");
  if (init_scale < 0.0) throw ConfigError("init_scale must be nonnegative");
  switch (kind) {
    case ModelKind::CategoricalTable:
      if (n_samples < 1) throw ConfigError("categorical table needs n_samples >= 1");
      break;
    case ModelKind::Logistic:
      if (input_dim < 1) throw ConfigError("logistic model needs input_dim >= 1");
      break;
    case ModelKind::Mlp:
      if (input_dim < 1) throw ConfigError("mlp needs input_dim >= 1");
      if (hidden.empty()) throw ConfigError("mlp needs at least one hidden layer");
      for (int h : hidden) {
        if (h < 1) throw ConfigError("hidden sizes must be >= 1");
      }
      break;
  }
}

std::vector<int> ModelSpec::layer_sizes() const {
  if (kind == ModelKind::CategoricalTable) return {};
  std::vector<int> sizes{input_dim};
  if (kind == ModelKind::Mlp) sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(clusters);
  return sizes;
}

Eigen::Map<const Matrix> ModelParams::block(std::size_t b) const {
  const ParamBlock& pb = blocks[b];
  return {values.data() + pb.offset, pb.rows, pb.cols};
}

Eigen::Map<Matrix> ModelParams::block(std::size_t b) {
  const ParamBlock& pb = blocks[b];
  return {values.data() + pb.offset, pb.rows, pb.cols};
}

ModelParams zero_params(const ModelSpec& spec) {
  spec.validate();
  ModelParams params;
  Index offset = 0;
  const auto add = [&](std::string name, Index rows, Index cols) {
    params.blocks.push_back({std::move(name), rows, cols, offset});
    offset += rows * cols;
  };
  if (spec.kind == ModelKind::CategoricalTable) {
    add("logits", spec.n_samples, spec.clusters);
  } else {
    const auto sizes = spec.layer_sizes();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      add("W" + std::to_string(l), sizes[l], sizes[l + 1]);
      add("b" + std::to_string(l), 1, sizes[l + 1]);
    }
  }
  params.values = Vector::Zero(offset);
  return params;
}

ModelParams init_model(const ModelSpec& spec) {
  ModelParams params = zero_params(spec);
  Rng rng(spec.seed);
  if (spec.kind == ModelKind::CategoricalTable) {
    if (spec.init_scale > 0.0) {
      for (Index i = 0; i < params.size(); ++i) params.values(i) = spec.init_scale * rng.normal();
    }
    return params;
  }
  for (std::size_t b = 0; b < params.blocks.size(); b += 2) {
    auto W = params.block(b);
    const double bound = std::sqrt(1.0 / static_cast<double>(W.rows()));
    for (Index c = 0; c < W.cols(); ++c)
      for (Index r = 0; r < W.rows(); ++r) W(r, c) = rng.uniform(-bound, bound);
  }
  return params;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Index i = 0; i < logits.rows(); ++i) {
    if (!logits.row(i).allFinite()) throw NumericError("non-finite logit at row " + std::to_string(i));
    const double top = logits.row(i).maxCoeff();
    double total = 0.0;
    for (Index k = 0; k < logits.cols(); ++k) {
      out(i, k) = std::exp(logits(i, k) - top);
      total += out(i, k);
    }
    out.row(i) /= total;
  }
  return out;
}

ForwardPass forward_pass(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                         const std::vector<int>& rows) {
  ForwardPass pass;
  if (spec.kind == ModelKind::CategoricalTable) {
    const auto table = params.block(0);
    if (rows.empty()) {
      if (X.rows() != table.rows()) {
        throw DimensionMismatch("categorical table has " + std::to_string(table.rows()) +
                                " rows but the data has " + std::to_string(X.rows()));
      }
      pass.rows.resize(static_cast<std::size_t>(X.rows()));
      std::iota(pass.rows.begin(), pass.rows.end(), 0);
    } else {
      pass.rows = rows;
    }
    Matrix logits(static_cast<Index>(pass.rows.size()), table.cols());
    for (Index r = 0; r < logits.rows(); ++r) {
      const int row = pass.rows[static_cast<std::size_t>(r)];
      if (row < 0 || row >= table.rows()) throw DimensionMismatch("table row index out of range");
      logits.row(r) = table.row(row);
    }
    pass.probs = softmax_rows(logits);
    pass.pre.push_back(std::move(logits));
    return pass;
  }
  if (X.cols() != spec.input_dim) {
    throw DimensionMismatch("model expects " + std::to_string(spec.input_dim) +
                            " features but the data has " + std::to_string(X.cols()));
  }
  const std::size_t layers = params.blocks.size() / 2;
  pass.post.push_back(X.values());
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = pass.post.back() * params.block(2 * l);
    z.rowwise() += params.block(2 * l + 1).row(0);
    if (l + 1 < layers) pass.post.push_back(z.cwiseMax(0.0));
    pass.pre.push_back(std::move(z));
  }
  pass.probs = softmax_rows(pass.pre.back());
  return pass;
}

SoftAssignment forward(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                       const std::vector<int>& rows) {
  return SoftAssignment(forward_pass(params, spec, X, rows).probs);
}

Vector backward(const ModelParams& params, const ModelSpec& spec, const ForwardPass& pass,
                const Matrix& dL_dP) {
  const Matrix& P = pass.probs;
  if (dL_dP.rows() != P.rows() || dL_dP.cols() != P.cols()) {
    throw DimensionMismatch("dL/dP shape does not match the forward output");
  }
  // Softmax Jacobian: dL/dz_k = P_k (dL/dP_k - sum_j P_j dL/dP_j).
  const Vector centre = P.cwiseProduct(dL_dP).rowwise().sum();
  Matrix dz = P.cwiseProduct(dL_dP - centre.replicate(1, P.cols()));

  ModelParams grad = zero_params(spec);
  if (spec.kind == ModelKind::CategoricalTable) {
    auto table = grad.block(0);
    for (Index r = 0; r < dz.rows(); ++r) table.row(pass.rows[static_cast<std::size_t>(r)]) += dz.row(r);
    return std::move(grad.values);
  }
  const std::size_t layers = params.blocks.size() / 2;
  for (std::size_t l = layers; l-- > 0;) {
    grad.block(2 * l) = pass.post[l].transpose() * dz;
    grad.block(2 * l + 1) = dz.colwise().sum();
    if (l == 0) break;
    Matrix dh = dz * params.block(2 * l).transpose();
    dz = dh.cwiseProduct((pass.pre[l - 1].array() > 0.0).cast<double>().matrix());
  }
  return std::move(grad.values);
}

Vector backward(const ModelParams& params, const ModelSpec& spec, const DataMatrix& X,
                const Matrix& dL_dP, const std::vector<int>& rows) {
  return backward(params, spec, forward_pass(params, spec, X, rows), dL_dP);
}

}  // namespace gemini
