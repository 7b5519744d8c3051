// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "gemini/parallel.hpp"
#include "gemini/rng.hpp"

namespace gemini {
namespace {

double comb2(double x) { return 0.5 * x * (x - 1.0); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double ari(const LabelVector& truth, const LabelVector& pred) {
  if (truth.size() != pred.size()) throw LengthMismatch("label vectors differ in length");
  std::map<std::pair<int, int>, double> table;
  std::map<int, double> rows, cols;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    table[{truth[i], pred[i]}] += 1.0;
    rows[truth[i]] += 1.0;
    cols[pred[i]] += 1.0;
  }
  double index = 0.0, sum_rows = 0.0, sum_cols = 0.0;
  for (const auto& [key, count] : table) index += comb2(count);
  for (const auto& [key, count] : rows) sum_rows += comb2(count);
  for (const auto& [key, count] : cols) sum_cols += comb2(count);
  const double pairs = comb2(static_cast<double>(truth.size()));
  if (pairs == 0.0) return 1.0;
  const double expected = sum_rows * sum_cols / pairs;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;  // both partitions trivial and identical
  return (index - expected) / (maximum - expected);
}

Matrix consensus_matrix(const std::vector<LabelVector>& runs) {
  if (runs.empty()) throw InvalidArgument("consensus needs at least one run");
  const auto n = static_cast<Index>(runs.front().size());
  for (const auto& run : runs) {
    if (static_cast<Index>(run.size()) != n) throw LengthMismatch("runs differ in length");
  }
  Matrix C = Matrix::Zero(n, n);
  for (const auto& run : runs) {
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (run[static_cast<std::size_t>(i)] == run[static_cast<std::size_t>(j)]) C(i, j) += 1.0;
  }
  return C / static_cast<double>(runs.size());
}

double pac_score(const std::vector<LabelVector>& runs, double q_low, double q_high) {
  if (runs.size() < 2) throw InvalidArgument("PAC needs at least two runs");
  if (!(q_low < q_high)) throw InvalidArgument("PAC needs q_low < q_high");
  const Matrix C = consensus_matrix(runs);
  const Index n = C.rows();
  double below_low = 0.0, below_high = 0.0, total = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      total += 1.0;
      if (C(i, j) <= q_low) below_low += 1.0;
      if (C(i, j) <= q_high) below_high += 1.0;
    }
  if (total == 0.0) return 0.0;
  return (below_high - below_low) / total;
}

double shannon_entropy(const Vector& p) {
  double h = 0.0;
  for (Index k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) h -= p(k) * std::log(p(k));
  }
  return h;
}

double renyi_entropy(const Vector& p, double order) {
  if (!(order > 0.0)) throw InvalidArgument("Renyi order must be positive");
  if (order == 1.0) return shannon_entropy(p);
  double total = 0.0;
  for (Index k = 0; k < p.size(); ++k) {
    if (p(k) > 0.0) total += std::pow(p(k), order);
  }
  return std::log(total) / (1.0 - order);
}

std::vector<BiasRow> estimator_bias(const SoftAssignment& P_full,
                                    const std::vector<Objective>& objectives,
                                    const std::vector<int>& batch_sizes, int trials,
                                    std::uint64_t seed, const GeometryMatrix* kernel,
                                    const GeometryMatrix* distance) {
  const auto n = static_cast<int>(P_full.n());
  if (trials < 1) throw ConfigError("bias study needs at least one trial");
  for (int b : batch_sizes) {
    if (b < 1 || b > n) throw ConfigError("batch size " + std::to_string(b) + " outside [1, N]");
  }
  const auto geometry_for = [&](const Objective& obj) -> const GeometryMatrix* {
    if (!obj.needs_geometry()) return nullptr;
    const GeometryMatrix* g = obj.needs_kernel() ? kernel : distance;
    if (g == nullptr) throw ConfigError(obj.name() + " needs a geometry for the bias study");
    return g;
  };

  std::vector<BiasRow> rows;
  const Rng root(seed);
  for (std::size_t o = 0; o < objectives.size(); ++o) {
    const Objective& obj = objectives[o];
    const GeometryMatrix* geometry = geometry_for(obj);
    const double truth = report_objective(obj, P_full, geometry);
    for (int batch : batch_sizes) {
      std::vector<double> sq(static_cast<std::size_t>(trials));
      parallel_for(sq.size(), [&](std::size_t t) {
        Rng rng = root.split(static_cast<std::uint64_t>(batch)).split(t);
        std::vector<int> perm = rng.permutation(n);
        perm.resize(static_cast<std::size_t>(batch));
        const SoftAssignment sub = P_full.select_rows(perm);
        double estimate = 0.0;
        if (geometry) {
          const GeometryMatrix local = geometry->slice(perm);
          estimate = report_objective(obj, sub, &local);
        } else {
          estimate = report_objective(obj, sub, nullptr);
        }
        sq[t] = (estimate - truth) * (estimate - truth);
      });
      double mean = 0.0;
      for (double s : sq) mean += s;
      mean /= static_cast<double>(trials);
      double var = 0.0;
      for (double s : sq) var += (s - mean) * (s - mean);
      var = trials > 1 ? var / static_cast<double>(trials - 1) : 0.0;
      rows.push_back({obj.name(), batch, mean, std::sqrt(var / static_cast<double>(trials))});
    }
  }
  return rows;
}

BoundaryDemoResult boundary_demo(double epsilon, double beta) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0, 1)");
  BoundaryDemoResult r;
  r.epsilon = epsilon;
  r.beta = beta;
  const double e = epsilon;
  r.pi_b = e + beta * (1.0 - 2.0 * e);
  const double pi_bar = 1.0 - r.pi_b;
  r.mi_a = e * std::log(2.0 * e) + (1.0 - e) * std::log(2.0 * (1.0 - e));
  r.mi_b = e * std::log(e) + (1.0 - e) * std::log1p(-e) - std::log(pi_bar) -
           (2.0 * beta * e - beta - e) * std::log(pi_bar / r.pi_b);
  r.delta = r.mi_a - r.mi_b;
  return r;
}

double mixture_mass_between_means(double separation) {
  // Each component puts Phi(sep) - 1/2 of its mass between the two means.
  return normal_cdf(separation) - 0.5;
}

BoundaryDemoResult boundary_empirical(double epsilon, double separation, int samples,
                                      std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 0.5)");
  if (!(separation > 0.0)) throw DomainError("separation must be positive");
  if (samples < 2) throw InvalidArgument("need at least two samples");
  Rng rng(seed);
  const double mu1 = separation;
  Matrix PA(samples, 2), PB(samples, 2);
  for (int i = 0; i < samples; ++i) {
    const double x = rng.normal() + (rng.uniform() < 0.5 ? 0.0 : mu1);
    const double a1 = x > 0.5 * mu1 ? 1.0 - epsilon : epsilon;
    const double b1 = (x >= 0.0 && x <= mu1) ? 1.0 - epsilon : epsilon;
    PA(i, 0) = 1.0 - a1;
    PA(i, 1) = a1;
    PB(i, 0) = 1.0 - b1;
    PB(i, 1) = b1;
  }
  BoundaryDemoResult r;
  r.epsilon = epsilon;
  r.beta = mixture_mass_between_means(separation);
  const SoftAssignment A(std::move(PA)), B(std::move(PB));
  r.pi_b = marginal(B)(1);
  r.mi_a = fdiv_gemini(FDivergence::kl(), Mode::OvA, A);
  r.mi_b = fdiv_gemini(FDivergence::kl(), Mode::OvA, B);
  r.delta = r.mi_a - r.mi_b;
  return r;
}

namespace {

KMeansResult lloyd(const Matrix& X, Matrix centroids, int max_iter) {
  const Index n = X.rows(), K = centroids.rows();
  KMeansResult res;
  res.labels.assign(static_cast<std::size_t>(n), 0);
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = iter == 0;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Index k = 0; k < K; ++k) {
        const double d = (X.row(i) - centroids.row(k)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (res.labels[static_cast<std::size_t>(i)] != static_cast<int>(best)) changed = true;
      res.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
    }
    if (!changed) break;
    Matrix sums = Matrix::Zero(K, X.cols());
    std::vector<int> counts(static_cast<std::size_t>(K), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(res.labels[static_cast<std::size_t>(i)]) += X.row(i);
      ++counts[static_cast<std::size_t>(res.labels[static_cast<std::size_t>(i)])];
    }
    for (Index k = 0; k < K; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) centroids.row(k) = sums.row(k) / counts[static_cast<std::size_t>(k)];
    }
  }
  res.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    res.inertia += (X.row(i) - centroids.row(res.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  res.centroids = std::move(centroids);
  return res;
}

Matrix kmeans_plus_plus(const Matrix& X, int K, Rng& rng) {
  const Index n = X.rows();
  Matrix centroids(K, X.cols());
  centroids.row(0) = X.row(static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n))));
  Vector closest(n);
  for (Index i = 0; i < n; ++i) closest(i) = (X.row(i) - centroids.row(0)).squaredNorm();
  for (int k = 1; k < K; ++k) {
    const double total = closest.sum();
    Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Index i = 0; i < n; ++i) {
        target -= closest(i);
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    }
    centroids.row(k) = X.row(pick);
    for (Index i = 0; i < n; ++i) {
      closest(i) = std::min(closest(i), (X.row(i) - centroids.row(k)).squaredNorm());
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans(const DataMatrix& X, int K, std::uint64_t seed, int n_init, int max_iter) {
  if (K < 1 || K > X.rows()) throw InvalidArgument("k-means needs 1 <= K <= N");
  if (n_init < 1) throw InvalidArgument("k-means needs n_init >= 1");
  Rng rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int run = 0; run < n_init; ++run) {
    KMeansResult res = lloyd(X.values(), kmeans_plus_plus(X.values(), K, rng), max_iter);
    if (res.inertia < best.inertia) best = std::move(res);
  }
  return best;
}

}  // namespace gemini
