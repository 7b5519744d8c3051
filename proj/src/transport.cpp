// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gemini {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-14;

void check_histogram(const Vector& w, const char* name) {
  double total = 0.0;
  for (Index i = 0; i < w.size(); ++i) {
    if (!(w(i) >= 0.0) || !std::isfinite(w(i))) {
      throw InvalidArgument(std::string(name) + " has a negative or non-finite weight");
    }
    total += w(i);
  }
  if (total < kTransportPrune) throw Degenerate(std::string(name) + " carries no mass");
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument(std::string(name) + " does not sum to 1");
}

std::vector<int> support_of(const Vector& w) {
  std::vector<int> keep;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) >= kTransportPrune) keep.push_back(static_cast<int>(i));
  }
  return keep;
}

}  // namespace

TransportSolution exact_emd(const Vector& a, const Vector& b, const Matrix& C) {
  if (C.rows() != a.size() || C.cols() != b.size()) {
    throw DimensionMismatch("cost matrix shape does not match the histograms");
  }
  check_histogram(a, "source histogram");
  check_histogram(b, "target histogram");
  if ((C.array() < 0.0).any()) throw InvalidArgument("transport costs must be nonnegative");

  const std::vector<int> S = support_of(a);
  const std::vector<int> T = support_of(b);
  const auto ns = S.size();
  const auto nt = T.size();

  std::vector<double> cost(ns * nt), flow(ns * nt, 0.0);
  std::vector<double> supply(ns), demand(nt), pot(ns + nt, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    supply[s] = a(S[s]);
    for (std::size_t t = 0; t < nt; ++t) cost[s * nt + t] = C(S[s], T[t]);
  }
  for (std::size_t t = 0; t < nt; ++t) {
    demand[t] = b(T[t]);
    double lowest = kInf;
    for (std::size_t s = 0; s < ns; ++s) lowest = std::min(lowest, cost[s * nt + t]);
    pot[ns + t] = lowest;
  }

  // Warm start: each sink takes what it can from its cheapest source. Those
  // arcs have zero reduced cost, so the optimality invariant still holds.
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t cheapest = 0;
    for (std::size_t s = 1; s < ns; ++s) {
      if (cost[s * nt + t] < cost[cheapest * nt + t]) cheapest = s;
    }
    const double push = std::min(supply[cheapest], demand[t]);
    if (push <= kMassTol) continue;
    flow[cheapest * nt + t] += push;
    supply[cheapest] -= push;
    demand[t] -= push;
  }

  // Nodes 0..ns-1 are sources, ns..ns+nt-1 sinks. Reduced cost of u->v is
  // c(u,v) + pot[u] - pot[v]; forward arcs cost C, reverse arcs -C.
  const std::size_t nodes = ns + nt;
  std::vector<double> dist(nodes);
  std::vector<int> prev(nodes);
  std::vector<char> done(nodes);
  for (;;) {
    bool any_supply = false, any_demand = false;
    for (double s : supply) any_supply |= s > kMassTol;
    for (double d : demand) any_demand |= d > kMassTol;
    if (!any_supply || !any_demand) break;

    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev.begin(), prev.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (std::size_t s = 0; s < ns; ++s) {
      if (supply[s] > kMassTol) dist[s] = 0.0;
    }
    std::size_t target = nodes;
    for (;;) {
      std::size_t u = nodes;
      double best = kInf;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (!done[v] && dist[v] < best) {
          best = dist[v];
          u = v;
        }
      }
      if (u == nodes) break;
      done[u] = 1;
      if (u >= ns) {
        const std::size_t t = u - ns;
        if (demand[t] > kMassTol) {
          target = u;
          break;
        }
        for (std::size_t s = 0; s < ns; ++s) {
          if (done[s] || flow[s * nt + t] <= 0.0) continue;
          const double rc = std::max(0.0, -cost[s * nt + t] + pot[u] - pot[s]);
          if (dist[u] + rc < dist[s]) {
            dist[s] = dist[u] + rc;
            prev[s] = static_cast<int>(u);
          }
        }
      } else {
        const double* row = &cost[u * nt];
        for (std::size_t t = 0; t < nt; ++t) {
          const std::size_t v = ns + t;
          if (done[v]) continue;
          const double rc = std::max(0.0, row[t] + pot[u] - pot[v]);
          if (dist[u] + rc < dist[v]) {
            dist[v] = dist[u] + rc;
            prev[v] = static_cast<int>(u);
          }
        }
      }
    }
    if (target == nodes) throw NumericError("transport network lost connectivity");

    const double reach = dist[target];
    for (std::size_t v = 0; v < nodes; ++v) pot[v] += std::min(dist[v], reach);

    double delta = demand[target - ns];
    std::size_t v = target;
    while (prev[v] >= 0) {
      const auto u = static_cast<std::size_t>(prev[v]);
      if (u >= ns) delta = std::min(delta, flow[v * nt + (u - ns)]);  // reverse arc sink u -> source v
      v = u;
    }
    const std::size_t root = v;
    delta = std::min(delta, supply[root]);

    v = target;
    while (prev[v] >= 0) {
      const auto u = static_cast<std::size_t>(prev[v]);
      if (u < ns) {
        flow[u * nt + (v - ns)] += delta;
      } else {
        double& f = flow[v * nt + (u - ns)];
        f = (f == delta) ? 0.0 : f - delta;
      }
      v = u;
    }
    supply[root] -= delta;
    demand[target - ns] -= delta;
  }

  TransportSolution sol;
  sol.plan = Matrix::Zero(a.size(), b.size());
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t t = 0; t < nt; ++t) {
      const double f = flow[s * nt + t];
      if (f > 0.0) {
        sol.plan(S[s], T[t]) = f;
        sol.value += f * cost[s * nt + t];
      }
    }
  }

  sol.dual_u = Vector::Zero(a.size());
  sol.dual_v = Vector::Zero(b.size());
  std::vector<char> kept_u(static_cast<std::size_t>(a.size()), 0);
  std::vector<char> kept_v(static_cast<std::size_t>(b.size()), 0);
  for (std::size_t s = 0; s < ns; ++s) {
    sol.dual_u(S[s]) = -pot[s];
    kept_u[static_cast<std::size_t>(S[s])] = 1;
  }
  for (std::size_t t = 0; t < nt; ++t) {
    sol.dual_v(T[t]) = pot[ns + t];
    kept_v[static_cast<std::size_t>(T[t])] = 1;
  }
  // Pruned entries get the c-transform of the opposite potential.
  for (Index i = 0; i < a.size(); ++i) {
    if (kept_u[static_cast<std::size_t>(i)]) continue;
    double lowest = kInf;
    for (int j : T) lowest = std::min(lowest, C(i, j) - sol.dual_v(j));
    sol.dual_u(i) = lowest;
  }
  for (Index j = 0; j < b.size(); ++j) {
    if (kept_v[static_cast<std::size_t>(j)]) continue;
    double lowest = kInf;
    for (int i : S) lowest = std::min(lowest, C(i, j) - sol.dual_u(i));
    sol.dual_v(j) = lowest;
  }
  const double shift = sol.dual_u(S.front());
  sol.dual_u.array() -= shift;
  sol.dual_v.array() += shift;
  return sol;
}

TransportSolution exact_emd(const Vector& a, const Vector& b, const GeometryMatrix& D) {
  if (D.is_kernel()) throw NotADistance("optimal transport needs a distance-tagged matrix");
  return exact_emd(a, b, D.values());
}

double wasserstein_1d_oracle(const std::vector<double>& support, const Vector& a,
                             const Vector& b) {
  const auto n = support.size();
  if (static_cast<Index>(n) != a.size() || static_cast<Index>(n) != b.size()) {
    throw LengthMismatch("support and weights differ in length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(support[i] > support[i - 1])) throw InvalidArgument("support must be strictly increasing");
  }
  double fa = 0.0, fb = 0.0, total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    fa += a(static_cast<Index>(i));
    fb += b(static_cast<Index>(i));
    total += std::abs(fa - fb) * (support[i + 1] - support[i]);
  }
  return total;
}

}  // namespace gemini
