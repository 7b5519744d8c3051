// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "gemini/errors.hpp"

namespace gemini {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Floor applied to probabilities inside logs, ratios and gradient square roots.
inline constexpr double kProbFloor = 1e-12;
/// Row-sum tolerance of a SoftAssignment.
inline constexpr double kRowSumTol = 1e-9;
/// Marginal mass below which a cluster counts as empty.
inline constexpr double kEmptyMass = 1e-12;

/// N x D matrix of finite features, one sample per row.
class DataMatrix {
 public:
  DataMatrix() = default;
  explicit DataMatrix(Matrix values);

  Index rows() const noexcept { return values_.rows(); }
  Index cols() const noexcept { return values_.cols(); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }

  /// Rows selected by `indices`, in that order.
  DataMatrix select_rows(const std::vector<int>& indices) const;

 private:
  Matrix values_;
};

/// N x K row-stochastic matrix of cluster posteriors p(y=k | x_i).
class SoftAssignment {
 public:
  SoftAssignment() = default;
  /// Validates entries in [0,1], rows summing to 1 within kRowSumTol and K >= 2.
  explicit SoftAssignment(Matrix probs);
  /// Skips validation. Meant for derivative checks that perturb single
  /// entries off the simplex; every estimator stays defined there.
  static SoftAssignment unchecked(Matrix probs) { return {std::move(probs), Unchecked{}}; }

  Index n() const noexcept { return probs_.rows(); }
  Index k() const noexcept { return probs_.cols(); }
  const Matrix& probs() const noexcept { return probs_; }
  double operator()(Index i, Index k) const { return probs_(i, k); }

  SoftAssignment select_rows(const std::vector<int>& indices) const;

 private:
  struct Unchecked {};
  SoftAssignment(Matrix probs, Unchecked) : probs_(std::move(probs)) {}

  Matrix probs_;
};

using ClusterMarginal = Vector;
using ClusterWeights = Vector;
using LabelVector = std::vector<int>;

enum class Mode { OvA, OvO };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view name);

/// Column means of P: the plug-in estimate of p(y).
ClusterMarginal marginal(const SoftAssignment& P);

/// Self-normalised importance weights of cluster k; throws EmptyCluster when
/// the column mass is below 1e-12.
ClusterWeights cluster_weights(const SoftAssignment& P, Index k);

/// Row argmax with ties broken toward the lowest cluster index.
LabelVector argmax_labels(const SoftAssignment& P);

/// Number of distinct clusters receiving at least one argmax assignment.
int nonempty_clusters(const SoftAssignment& P);

}  // namespace gemini
