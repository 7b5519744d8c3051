// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/core.hpp"

#include <cmath>
#include <string>

namespace gemini {

DataMatrix::DataMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw DimensionMismatch("data matrix must have at least one row and one column");
  }
  if (!values_.allFinite()) {
    throw InvalidArgument("data matrix contains non-finite entries");
  }
}

DataMatrix DataMatrix::select_rows(const std::vector<int>& indices) const {
  Matrix out(static_cast<Index>(indices.size()), values_.cols());
  for (Index r = 0; r < out.rows(); ++r) out.row(r) = values_.row(indices[r]);
  return DataMatrix(std::move(out));
}

SoftAssignment::SoftAssignment(Matrix probs) : probs_(std::move(probs)) {
  if (probs_.cols() < 2) throw DimensionMismatch("a soft assignment needs K >= 2 clusters");
  if (probs_.rows() < 1) throw DimensionMismatch("a soft assignment needs at least one row");
  for (Index i = 0; i < probs_.rows(); ++i) {
    double sum = 0.0;
    for (Index k = 0; k < probs_.cols(); ++k) {
      const double p = probs_(i, k);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("probability outside [0,1] at row " + std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol) {
      throw InvalidArgument("row " + std::to_string(i) + " does not sum to 1");
    }
  }
}

SoftAssignment SoftAssignment::select_rows(const std::vector<int>& indices) const {
  Matrix out(static_cast<Index>(indices.size()), probs_.cols());
  for (Index r = 0; r < out.rows(); ++r) out.row(r) = probs_.row(indices[r]);
  return SoftAssignment(std::move(out), Unchecked{});
}

std::string_view to_string(Mode mode) { return mode == Mode::OvA ? "ova" : "ovo"; }

Mode mode_from_string(std::string_view name) {
  if (name == "ova" || name == "OvA") return Mode::OvA;
  if (name == "ovo" || name == "OvO") return Mode::OvO;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected ova or ovo)");
}

ClusterMarginal marginal(const SoftAssignment& P) {
  return P.probs().colwise().mean().transpose();
}

ClusterWeights cluster_weights(const SoftAssignment& P, Index k) {
  const double total = P.probs().col(k).sum();
  if (total < kEmptyMass) throw EmptyCluster(static_cast<int>(k));
  return P.probs().col(k) / total;
}

LabelVector argmax_labels(const SoftAssignment& P) {
  LabelVector labels(static_cast<size_t>(P.n()));
  for (Index i = 0; i < P.n(); ++i) {
    Index best = 0;
    for (Index k = 1; k < P.k(); ++k) {
      if (P(i, k) > P(i, best)) best = k;
    }
    labels[static_cast<size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

int nonempty_clusters(const SoftAssignment& P) {
  std::vector<bool> hit(static_cast<size_t>(P.k()), false);
  for (int label : argmax_labels(P)) hit[static_cast<size_t>(label)] = true;
  int count = 0;
  for (bool h : hit) count += h ? 1 : 0;
  return count;
}

}  // namespace gemini
