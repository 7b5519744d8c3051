// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gemini/core.hpp"

namespace gemini {

enum class GeometryKind { LinearKernel, GaussianKernel, Euclidean, ShortestPath, Precomputed };

struct GeometrySpec {
  GeometryKind kind = GeometryKind::LinearKernel;
  double bandwidth = 1.0;  // gaussian kernel only
  double quantile = 0.05;  // shortest path only
  Matrix matrix;           // precomputed only
  bool precomputed_is_kernel = false;
  std::string source;      // CSV path of a precomputed matrix, if loaded from disk

  static GeometrySpec of(GeometryKind kind);
  static GeometrySpec linear_kernel() { return of(GeometryKind::LinearKernel); }
  static GeometrySpec gaussian_kernel(double bandwidth);
  static GeometrySpec euclidean() { return of(GeometryKind::Euclidean); }
  static GeometrySpec shortest_path(double quantile = 0.05);
  static GeometrySpec precomputed(Matrix m, bool is_kernel);

  bool is_kernel() const;
  void validate() const;
};

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string& name);

/// Square matrix tagged as either a kernel (PSD) or a distance (metric-like).
class GeometryMatrix {
 public:
  enum class Tag { Kernel, Distance };

  GeometryMatrix() = default;
  GeometryMatrix(Matrix values, Tag tag);

  Tag tag() const noexcept { return tag_; }
  bool is_kernel() const noexcept { return tag_ == Tag::Kernel; }
  Index size() const noexcept { return values_.rows(); }
  const Matrix& values() const noexcept { return values_; }
  double operator()(Index i, Index j) const { return values_(i, j); }

  /// Principal submatrix on `indices` (rows and columns in that order).
  GeometryMatrix slice(const std::vector<int>& indices) const;

 private:
  Matrix values_;
  Tag tag_ = Tag::Kernel;
};

GeometryMatrix build_kernel(const DataMatrix& X, const GeometrySpec& spec);
GeometryMatrix build_distance(const DataMatrix& X, const GeometrySpec& spec);
/// Dispatches to build_kernel or build_distance by GeometrySpec::kind.
GeometryMatrix build_geometry(const DataMatrix& X, const GeometrySpec& spec);

/// Hop counts on the graph linking pairs closer than the `quantile` of all
/// pairwise Euclidean distances. Unreachable pairs get N.
GeometryMatrix shortest_path_distance(const DataMatrix& X, double quantile);

/// Quantile with linear interpolation between order statistics
/// (position q*(n-1) in the sorted sample).
double interpolated_quantile(std::vector<double> values, double q);

/// Statistical PSD check: v^T K v >= -tol for `trials` random unit vectors.
bool passes_psd_check(const Matrix& K, int trials = 100, double tol = 1e-8,
                      std::uint64_t seed = 0);

}  // namespace gemini
