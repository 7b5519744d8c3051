// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "gemini/parallel.hpp"
#include "gemini/rng.hpp"

namespace gemini {

GeometrySpec GeometrySpec::of(GeometryKind kind) {
  GeometrySpec spec;
  spec.kind = kind;
  return spec;
}

GeometrySpec GeometrySpec::gaussian_kernel(double bandwidth) {
  GeometrySpec spec = of(GeometryKind::GaussianKernel);
  spec.bandwidth = bandwidth;
  return spec;
}

GeometrySpec GeometrySpec::shortest_path(double quantile) {
  GeometrySpec spec = of(GeometryKind::ShortestPath);
  spec.quantile = quantile;
  return spec;
}

GeometrySpec GeometrySpec::precomputed(Matrix m, bool is_kernel) {
  GeometrySpec spec = of(GeometryKind::Precomputed);
  spec.matrix = std::move(m);
  spec.precomputed_is_kernel = is_kernel;
  return spec;
}

bool GeometrySpec::is_kernel() const {
  switch (kind) {
    case GeometryKind::LinearKernel:
    case GeometryKind::GaussianKernel:
      return true;
    case GeometryKind::Precomputed:
      return precomputed_is_kernel;
    default:
      return false;
  }
}

void GeometrySpec::validate() const {
  if (kind == GeometryKind::GaussianKernel && !(bandwidth > 0.0)) {
    throw InvalidArgument("gaussian kernel bandwidth must be positive");
  }
  if (kind == GeometryKind::ShortestPath && !(quantile > 0.0 && quantile < 1.0)) {
    throw InvalidArgument("shortest-path quantile must lie in (0,1)");
  }
  if (kind == GeometryKind::Precomputed && matrix.rows() != matrix.cols()) {
    throw DimensionMismatch("precomputed geometry matrix must be square");
  }
}

std::string to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::LinearKernel: return "linear_kernel";
    case GeometryKind::GaussianKernel: return "gaussian_kernel";
    case GeometryKind::Euclidean: return "euclidean";
    case GeometryKind::ShortestPath: return "shortest_path";
    case GeometryKind::Precomputed: return "precomputed";
  }
  return "unknown";
}

GeometryKind geometry_kind_from_string(const std::string& name) {
  if (name == "linear_kernel" || name == "linear") return GeometryKind::LinearKernel;
  if (name == "gaussian_kernel" || name == "gaussian") return GeometryKind::GaussianKernel;
  if (name == "euclidean" || name == "euclidean_distance") return GeometryKind::Euclidean;
  if (name == "shortest_path") return GeometryKind::ShortestPath;
  if (name == "precomputed") return GeometryKind::Precomputed;
  throw ConfigError("unknown geometry kind '" + name + "'");
}

GeometryMatrix::GeometryMatrix(Matrix values, Tag tag) : values_(std::move(values)), tag_(tag) {
  if (values_.rows() != values_.cols()) throw DimensionMismatch("geometry matrix must be square");
  const Index n = values_.rows();
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (std::abs(values_(i, j) - values_(j, i)) > 1e-9) {
        throw InvalidArgument("geometry matrix is not symmetric");
      }
    }
  }
  if (tag_ == Tag::Distance) {
    for (Index i = 0; i < n; ++i) {
      if (values_(i, i) != 0.0) throw InvalidArgument("distance matrix needs a zero diagonal");
    }
    if ((values_.array() < 0.0).any()) throw InvalidArgument("distance matrix has negative entries");
  }
}

GeometryMatrix GeometryMatrix::slice(const std::vector<int>& indices) const {
  const auto m = static_cast<Index>(indices.size());
  Matrix out(m, m);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) out(a, b) = values_(indices[a], indices[b]);
  }
  GeometryMatrix sliced;
  sliced.values_ = std::move(out);
  sliced.tag_ = tag_;
  return sliced;
}

namespace {

Matrix squared_distances(const Matrix& X) {
  const Index n = X.rows();
  Matrix D(n, n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t row) {
    const auto i = static_cast<Index>(row);
    D(i, i) = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) D(i, j) = (X.row(i) - X.row(j)).squaredNorm();
    }
  });
  return D;
}

void check_precomputed(const DataMatrix& X, const GeometrySpec& spec) {
  if (spec.matrix.rows() != X.rows() || spec.matrix.cols() != X.rows()) {
    throw DimensionMismatch("precomputed geometry is " + std::to_string(spec.matrix.rows()) +
                            "x" + std::to_string(spec.matrix.cols()) + " but data has " +
                            std::to_string(X.rows()) + " rows");
  }
}

}  // namespace

GeometryMatrix build_kernel(const DataMatrix& X, const GeometrySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeometryKind::LinearKernel: {
      Matrix K = X.values() * X.values().transpose();
      // Enforce exact symmetry; the GEMM may round the two triangles differently.
      K = 0.5 * (K + K.transpose()).eval();
      return {std::move(K), GeometryMatrix::Tag::Kernel};
    }
    case GeometryKind::GaussianKernel: {
      const double scale = -1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
      Matrix K = (squared_distances(X.values()) * scale).array().exp().matrix();
      return {std::move(K), GeometryMatrix::Tag::Kernel};
    }
    case GeometryKind::Precomputed:
      check_precomputed(X, spec);
      if (!spec.precomputed_is_kernel) throw NotAKernel("precomputed matrix is tagged as a distance");
      return {spec.matrix, GeometryMatrix::Tag::Kernel};
    default:
      throw NotAKernel(to_string(spec.kind) + " is not a kernel");
  }
}

GeometryMatrix build_distance(const DataMatrix& X, const GeometrySpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case GeometryKind::Euclidean:
      return {squared_distances(X.values()).cwiseSqrt(), GeometryMatrix::Tag::Distance};
    case GeometryKind::ShortestPath:
      return shortest_path_distance(X, spec.quantile);
    case GeometryKind::Precomputed:
      check_precomputed(X, spec);
      if (spec.precomputed_is_kernel) throw NotADistance("precomputed matrix is tagged as a kernel");
      return {spec.matrix, GeometryMatrix::Tag::Distance};
    default:
      throw NotADistance(to_string(spec.kind) + " is not a distance");
  }
}

GeometryMatrix build_geometry(const DataMatrix& X, const GeometrySpec& spec) {
  return spec.is_kernel() ? build_kernel(X, spec) : build_distance(X, spec);
}

double interpolated_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

GeometryMatrix shortest_path_distance(const DataMatrix& X, double quantile) {
  const Index n = X.rows();
  if (n < 2) throw InvalidArgument("shortest-path distance needs at least two samples");
  if (!(quantile > 0.0 && quantile < 1.0)) {
    throw InvalidArgument("shortest-path quantile must lie in (0,1)");
  }
  const Matrix dist = squared_distances(X.values()).cwiseSqrt();
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) upper.push_back(dist(i, j));
  }
  const double eps = interpolated_quantile(std::move(upper), quantile);

  std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && dist(i, j) <= eps) adjacency[i].push_back(static_cast<int>(j));
    }
  }

  Matrix hops = Matrix::Constant(n, n, static_cast<double>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t source) {
    std::vector<int> depth(static_cast<std::size_t>(n), -1);
    std::queue<int> frontier;
    depth[source] = 0;
    frontier.push(static_cast<int>(source));
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (int v : adjacency[static_cast<std::size_t>(u)]) {
        if (depth[static_cast<std::size_t>(v)] < 0) {
          depth[static_cast<std::size_t>(v)] = depth[static_cast<std::size_t>(u)] + 1;
          frontier.push(v);
        }
      }
    }
    for (Index j = 0; j < n; ++j) {
      if (depth[static_cast<std::size_t>(j)] >= 0) {
        hops(static_cast<Index>(source), j) = depth[static_cast<std::size_t>(j)];
      }
    }
  });
  return {std::move(hops), GeometryMatrix::Tag::Distance};
}

bool passes_psd_check(const Matrix& K, int trials, double tol, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(K.rows());
  for (int t = 0; t < trials; ++t) {
    for (Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    if (v.dot(K * v) < -tol) return false;
  }
  return true;
}

}  // namespace gemini
