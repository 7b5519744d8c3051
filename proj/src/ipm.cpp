// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gemini/parallel.hpp"
#include "gemini/rng.hpp"
#include "gemini/transport.hpp"

namespace gemini {
namespace {

constexpr double kQuadFloor = 1e-12;
constexpr double kSameHistogram = 1e-12;

void check_kernel(const SoftAssignment& P, const GeometryMatrix& K) {
  if (!K.is_kernel()) throw NotAKernel("MMD needs a kernel-tagged matrix");
  if (K.size() != P.n()) throw DimensionMismatch("kernel size does not match the assignment rows");
}

void check_distance(const SoftAssignment& P, const GeometryMatrix& D) {
  if (D.is_kernel()) throw NotADistance("Wasserstein needs a distance-tagged matrix");
  if (D.size() != P.n()) throw DimensionMismatch("distance size does not match the assignment rows");
}

std::vector<bool> active_clusters(const Vector& pi, bool skip_empty) {
  std::vector<bool> active(static_cast<std::size_t>(pi.size()), true);
  for (Index k = 0; k < pi.size(); ++k) {
    if (pi(k) < kEmptyMass) {
      if (!skip_empty) throw EmptyCluster(static_cast<int>(k));
      active[static_cast<std::size_t>(k)] = false;
    }
  }
  return active;
}

// d q / d P[., k] for q = (1/N^2) u^T K u where u depends on w_k = P[., k] / pi_k
// with coefficient +1; Ku is the kernel applied to u.
Vector quad_grad_column(const Vector& Ku, const Matrix& P, Index k, double pi_k) {
  const double n = static_cast<double>(P.rows());
  const double coupling = Ku.dot(P.col(k)) / (n * pi_k * pi_k);
  return (2.0 / (n * n)) * (Ku / pi_k - Vector::Constant(P.rows(), coupling));
}

ValueAndGrad mmd_impl(Mode mode, const SoftAssignment& P, const GeometryMatrix& Kmat,
                      const IpmOptions& options, bool want_grad) {
  check_kernel(P, Kmat);
  const Matrix& probs = P.probs();
  const Index n = P.n(), K = P.k();
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, options.skip_empty);

  Matrix W = Matrix::Zero(n, K);
  for (Index k = 0; k < K; ++k) {
    if (active[k]) W.col(k) = probs.col(k) / pi(k);
  }
  const Matrix& Km = Kmat.values();
  const Matrix KW = Km * W;

  ValueAndGrad out;
  if (want_grad) out.grad = Matrix::Zero(n, K);

  if (mode == Mode::OvA) {
    const Vector K1 = Km.rowwise().sum();
    const double total = K1.sum();
    for (Index k = 0; k < K; ++k) {
      if (!active[k]) continue;
      const Vector Ku = KW.col(k) - K1;
      const double q = (W.col(k).dot(KW.col(k)) - 2.0 * K1.dot(W.col(k)) + total) / nn;
      const double root = std::sqrt(std::max(0.0, q));
      out.value += pi(k) * root;
      if (want_grad) {
        const double chain = pi(k) / (2.0 * std::sqrt(std::max(q, kQuadFloor)));
        out.grad.col(k) = Vector::Constant(n, root / static_cast<double>(n)) +
                          chain * quad_grad_column(Ku, probs, k, pi(k));
      }
    }
    return out;
  }

  const Matrix G = W.transpose() * KW;
  for (Index a = 0; a < K; ++a) {
    if (!active[a]) continue;
    for (Index b = a + 1; b < K; ++b) {
      if (!active[b]) continue;
      const double q = (G(a, a) + G(b, b) - 2.0 * G(a, b)) / nn;
      const double root = std::sqrt(std::max(0.0, q));
      out.value += 2.0 * pi(a) * pi(b) * root;
      if (want_grad) {
        const double chain = pi(a) * pi(b) / std::sqrt(std::max(q, kQuadFloor));
        const Vector Ku = KW.col(a) - KW.col(b);
        const double n_d = static_cast<double>(n);
        out.grad.col(a) += Vector::Constant(n, 2.0 * pi(b) * root / n_d) +
                           chain * quad_grad_column(Ku, probs, a, pi(a));
        out.grad.col(b) += Vector::Constant(n, 2.0 * pi(a) * root / n_d) +
                           chain * quad_grad_column(-Ku, probs, b, pi(b));
      }
    }
  }
  return out;
}

struct PairTransport {
  double value = 0.0;
  Vector u;
  Vector v;
};

PairTransport solve_pair(const Vector& ma, const Vector& mb, const GeometryMatrix& D,
                         bool want_duals) {
  PairTransport out;
  if ((ma - mb).cwiseAbs().maxCoeff() <= kSameHistogram) {
    // Identical histograms: the diagonal plan is optimal and zero duals are
    // the symmetric choice among the feasible ones.
    if (want_duals) {
      out.u = Vector::Zero(ma.size());
      out.v = Vector::Zero(mb.size());
    }
    return out;
  }
  TransportSolution sol = exact_emd(ma, mb, D.values());
  out.value = sol.value;
  if (want_duals) {
    const double centre = sol.dual_u.mean();
    out.u = sol.dual_u.array() - centre;
    out.v = sol.dual_v.array() + centre;
  }
  return out;
}

Matrix dirac_weights(const SoftAssignment& P, const Vector& pi, const std::vector<bool>& active) {
  Matrix M = Matrix::Zero(P.n(), P.k());
  for (Index k = 0; k < P.k(); ++k) {
    if (active[k]) M.col(k) = P.probs().col(k) / (pi(k) * static_cast<double>(P.n()));
  }
  return M;
}

// Gradient of pi_k * weight * W(m_k, .) with respect to P[., k], given the dual
// potential of m_k. The pi_k factor in `scale` has already been divided out.
Vector transport_grad_column(double scale, double value, const Vector& dual, const Vector& m,
                             Index n) {
  const double baseline = dual.dot(m);
  return (scale / static_cast<double>(n)) *
         (Vector::Constant(n, value - baseline) + dual);
}

// Sum over the listed unordered pairs of weight_ab * pi_a pi_b W(m_a, m_b).
ValueAndGrad pair_sum(const SoftAssignment& P, const GeometryMatrix& D,
                      const std::vector<std::pair<int, int>>& pairs,
                      const std::vector<double>& weights, bool want_grad) {
  const Index n = P.n(), K = P.k();
  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, true);
  const Matrix M = dirac_weights(P, pi, active);

  std::vector<PairTransport> solved(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [a, b] = pairs[idx];
    if (!active[a] || !active[b]) return;
    solved[idx] = solve_pair(M.col(a), M.col(b), D, want_grad);
  });

  ValueAndGrad out;
  if (want_grad) out.grad = Matrix::Zero(n, K);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [a, b] = pairs[idx];
    if (!active[a] || !active[b]) continue;
    const PairTransport& t = solved[idx];
    out.value += weights[idx] * pi(a) * pi(b) * t.value;
    if (want_grad) {
      out.grad.col(a) += transport_grad_column(weights[idx] * pi(b), t.value, t.u, M.col(a), n);
      out.grad.col(b) += transport_grad_column(weights[idx] * pi(a), t.value, t.v, M.col(b), n);
    }
  }
  return out;
}

ValueAndGrad wasserstein_impl(Mode mode, const SoftAssignment& P, const GeometryMatrix& D,
                              bool want_grad) {
  check_distance(P, D);
  const Index n = P.n(), K = P.k();
  if (mode == Mode::OvO) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < K; ++a)
      for (int b = a + 1; b < K; ++b) pairs.emplace_back(a, b);
    return pair_sum(P, D, pairs, std::vector<double>(pairs.size(), 2.0), want_grad);
  }

  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, true);
  const Matrix M = dirac_weights(P, pi, active);
  const Vector uniform = Vector::Constant(n, 1.0 / static_cast<double>(n));
  std::vector<PairTransport> solved(static_cast<std::size_t>(K));
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t k) {
    if (active[k]) solved[k] = solve_pair(M.col(static_cast<Index>(k)), uniform, D, want_grad);
  });
  ValueAndGrad out;
  if (want_grad) out.grad = Matrix::Zero(n, K);
  for (Index k = 0; k < K; ++k) {
    if (!active[k]) continue;
    out.value += pi(k) * solved[k].value;
    if (want_grad) out.grad.col(k) = transport_grad_column(1.0, solved[k].value, solved[k].u, M.col(k), n);
  }
  return out;
}

}  // namespace

double mmd_gemini(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                  const IpmOptions& options) {
  return mmd_impl(mode, P, K, options, false).value;
}

Matrix mmd_gemini_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                       const IpmOptions& options) {
  return mmd_impl(mode, P, K, options, true).grad;
}

ValueAndGrad mmd_gemini_value_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& K,
                                   const IpmOptions& options) {
  return mmd_impl(mode, P, K, options, true);
}

double wasserstein_gemini(Mode mode, const SoftAssignment& P, const GeometryMatrix& D) {
  return wasserstein_impl(mode, P, D, false).value;
}

Matrix wasserstein_gemini_grad(Mode mode, const SoftAssignment& P, const GeometryMatrix& D) {
  return wasserstein_impl(mode, P, D, true).grad;
}

ValueAndGrad wasserstein_gemini_value_grad(Mode mode, const SoftAssignment& P,
                                           const GeometryMatrix& D) {
  return wasserstein_impl(mode, P, D, true);
}

double wasserstein_ovo_distinct_pairs(const SoftAssignment& P, const GeometryMatrix& D) {
  return 0.5 * wasserstein_gemini(Mode::OvO, P, D);
}

PairSamplePlan make_pair_plan(int K, int M, std::uint64_t seed) {
  if (K < 2) throw InvalidArgument("pair sampling needs K >= 2");
  if (M < 1) throw InvalidArgument("pair sampling needs M >= 1");
  PairSamplePlan plan;
  plan.M = M;
  plan.seed = seed;
  Rng rng(seed);
  for (int m = 0; m < M; ++m) {
    const auto a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(K)));
    auto b = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(K - 1)));
    if (b >= a) ++b;
    plan.pairs.emplace_back(a, b);
  }
  return plan;
}

namespace {

ValueAndGrad sampled_impl(const SoftAssignment& P, const GeometryMatrix& D,
                          const PairSamplePlan& plan, bool want_grad) {
  check_distance(P, D);
  if (plan.pairs.empty()) throw InvalidArgument("pair plan is empty");
  const double K = static_cast<double>(P.k());
  const double scale = K * (K - 1.0) / (2.0 * static_cast<double>(plan.pairs.size()));
  // Repeated draws of the same unordered pair share one transport solve.
  std::map<std::pair<int, int>, int> multiplicity;
  for (auto [a, b] : plan.pairs) {
    if (a < 0 || b < 0 || a >= P.k() || b >= P.k() || a == b) {
      throw InvalidArgument("pair plan references an invalid cluster pair");
    }
    ++multiplicity[{std::min(a, b), std::max(a, b)}];
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> weights;
  for (const auto& [pair, count] : multiplicity) {
    pairs.push_back(pair);
    weights.push_back(scale * count);
  }
  return pair_sum(P, D, pairs, weights, want_grad);
}

}  // namespace

double wasserstein_ovo_sampled(const SoftAssignment& P, const GeometryMatrix& D,
                               const PairSamplePlan& plan) {
  return sampled_impl(P, D, plan, false).value;
}

ValueAndGrad wasserstein_ovo_sampled_value_grad(const SoftAssignment& P, const GeometryMatrix& D,
                                                const PairSamplePlan& plan) {
  return sampled_impl(P, D, plan, true);
}

}  // namespace gemini
