// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "gemini/core.hpp"
#include "gemini/geometry.hpp"

namespace gemini {

struct TransportSolution {
  double value = 0.0;
  /// Optimal coupling; rows sum to a, columns to b.
  Matrix plan;
  /// Dual potentials with u[i] + v[j] <= C[i][j] and equality on the plan
  /// support, normalised so u is zero at the first retained source.
  Vector dual_u;
  Vector dual_v;
};

/// Weights below this are removed from the support before solving.
inline constexpr double kTransportPrune = 1e-12;

/// Exact earth mover's distance between histograms `a` and `b` under cost C.
///
/// Successive shortest paths on the bipartite transport network with dense
/// Dijkstra and reduced costs. Ties break toward the lowest node index, so the
/// result is a deterministic function of the inputs. Throws Degenerate when
/// either histogram carries no mass.
TransportSolution exact_emd(const Vector& a, const Vector& b, const Matrix& C);
TransportSolution exact_emd(const Vector& a, const Vector& b, const GeometryMatrix& D);

/// W1 on the real line: sum_i |F_a(s_i) - F_b(s_i)| (s_{i+1} - s_i).
double wasserstein_1d_oracle(const std::vector<double>& support, const Vector& a,
                             const Vector& b);

}  // namespace gemini
