// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#include "gemini/fdiv.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace gemini {
namespace {

double xlogy_over(double x, double num, double den) {
  if (x <= 0.0) return 0.0;
  return x * std::log(std::max(num, kProbFloor) / std::max(den, kProbFloor));
}

/// Clusters that take part in the estimate; throws on empty ones unless skipped.
std::vector<bool> active_clusters(const Vector& pi, const FDivOptions& options) {
  std::vector<bool> active(static_cast<std::size_t>(pi.size()), true);
  for (Index k = 0; k < pi.size(); ++k) {
    if (pi(k) < kEmptyMass) {
      if (!options.skip_empty) throw EmptyCluster(static_cast<int>(k));
      active[static_cast<std::size_t>(k)] = false;
    }
  }
  return active;
}

double ova_value(const FDivergence& div, const Matrix& P, const Vector& pi,
                 const std::vector<bool>& active) {
  const Index n = P.rows(), K = P.cols();
  double total = 0.0;
  switch (div.kind) {
    case FDivKind::KL:
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < K; ++k)
          if (active[k]) total += xlogy_over(P(i, k), P(i, k), pi(k));
      return total / static_cast<double>(n);
    case FDivKind::TotalVariation:
      for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < K; ++k)
          if (active[k]) total += std::abs(P(i, k) - pi(k));
      return 0.5 * total / static_cast<double>(n);
    case FDivKind::SquaredHellinger: {
      double mass = 0.0;
      for (Index k = 0; k < K; ++k) {
        if (!active[k]) continue;
        mass += pi(k);
        for (Index i = 0; i < n; ++i) total += std::sqrt(P(i, k) * pi(k));
      }
      return mass - total / static_cast<double>(n);
    }
    case FDivKind::Alpha: {
      const double a = div.alpha;
      double mass = 0.0;
      for (Index k = 0; k < K; ++k) {
        if (!active[k]) continue;
        mass += pi(k);
        double moment = 0.0;
        for (Index i = 0; i < n; ++i) moment += std::pow(P(i, k), a);
        total += std::pow(pi(k), 1.0 - a) * moment / static_cast<double>(n);
      }
      return (total - mass) / (a * (a - 1.0));
    }
  }
  return 0.0;
}

double ovo_value(const FDivergence& div, const Matrix& P, const Vector& pi,
                 const std::vector<bool>& active) {
  const Index n = P.rows(), K = P.cols();
  double total = 0.0;
  switch (div.kind) {
    case FDivKind::KL:
      for (Index i = 0; i < n; ++i)
        for (Index a = 0; a < K; ++a) {
          if (!active[a]) continue;
          for (Index b = 0; b < K; ++b) {
            if (b == a || !active[b]) continue;
            total += pi(b) * xlogy_over(P(i, a), P(i, a) * pi(b), pi(a) * P(i, b));
          }
        }
      return total / static_cast<double>(n);
    case FDivKind::TotalVariation:
      for (Index i = 0; i < n; ++i)
        for (Index a = 0; a < K; ++a) {
          if (!active[a]) continue;
          for (Index b = 0; b < K; ++b) {
            if (b == a || !active[b]) continue;
            total += std::abs(P(i, a) * pi(b) - P(i, b) * pi(a));
          }
        }
      return 0.5 * total / static_cast<double>(n);
    case FDivKind::SquaredHellinger: {
      double mass = 0.0;
      for (Index k = 0; k < K; ++k)
        if (active[k]) mass += pi(k);
      for (Index i = 0; i < n; ++i) {
        double affinity = 0.0, row_mass = 0.0;
        for (Index k = 0; k < K; ++k) {
          if (!active[k]) continue;
          affinity += std::sqrt(P(i, k) * pi(k));
          row_mass += P(i, k);
        }
        total += mass * row_mass - affinity * affinity;
      }
      return total / static_cast<double>(n);
    }
    case FDivKind::Alpha:
      throw InvalidArgument("the alpha-divergence GEMINI is defined for OvA only");
  }
  return 0.0;
}

}  // namespace

FDivergence FDivergence::alpha_divergence(double alpha) {
  if (!(alpha > 0.0)) throw UnsupportedAlpha("alpha must be positive");
  if (alpha == 1.0) return kl();
  FDivergence div{FDivKind::Alpha};
  div.alpha = alpha;
  return div;
}

double FDivergence::f(double t) const {
  switch (kind) {
    case FDivKind::KL: return t > 0.0 ? t * std::log(t) : 0.0;
    case FDivKind::TotalVariation: return 0.5 * std::abs(t - 1.0);
    case FDivKind::SquaredHellinger: return 1.0 - std::sqrt(t);
    case FDivKind::Alpha:
      return (std::pow(t, alpha) - alpha * t + alpha - 1.0) / (alpha * (alpha - 1.0));
  }
  return 0.0;
}

double FDivergence::df(double t) const {
  switch (kind) {
    case FDivKind::KL: return std::log(t) + 1.0;
    case FDivKind::TotalVariation: return t > 1.0 ? 0.5 : (t < 1.0 ? -0.5 : 0.0);
    case FDivKind::SquaredHellinger: return -0.5 / std::sqrt(t);
    case FDivKind::Alpha: return (std::pow(t, alpha - 1.0) - 1.0) / (alpha - 1.0);
  }
  return 0.0;
}

std::string FDivergence::name() const {
  switch (kind) {
    case FDivKind::KL: return "kl";
    case FDivKind::TotalVariation: return "tv";
    case FDivKind::SquaredHellinger: return "hellinger";
    case FDivKind::Alpha: {
      std::ostringstream out;
      out << "alpha" << alpha;
      return out.str();
    }
  }
  return "unknown";
}

FDivKind fdiv_kind_from_string(const std::string& name) {
  if (name == "kl" || name == "KL" || name == "mi") return FDivKind::KL;
  if (name == "tv" || name == "total_variation") return FDivKind::TotalVariation;
  if (name == "hellinger" || name == "squared_hellinger") return FDivKind::SquaredHellinger;
  if (name == "alpha") return FDivKind::Alpha;
  throw ConfigError("unknown f-divergence '" + name + "'");
}

double fdiv_gemini(const FDivergence& div, Mode mode, const SoftAssignment& P,
                   const FDivOptions& options) {
  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, options);
  return mode == Mode::OvA ? ova_value(div, P.probs(), pi, active)
                           : ovo_value(div, P.probs(), pi, active);
}

double alpha_gemini_ova(double alpha, const SoftAssignment& P, const FDivOptions& options) {
  return fdiv_gemini(FDivergence::alpha_divergence(alpha), Mode::OvA, P, options);
}

Matrix fdiv_gemini_grad(const FDivergence& div, Mode mode, const SoftAssignment& P,
                        const FDivOptions& options) {
  if (mode == Mode::OvO && div.kind == FDivKind::Alpha) {
    throw InvalidArgument("the alpha-divergence GEMINI is defined for OvA only");
  }
  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, options);
  const Matrix Q = P.probs().cwiseMax(kProbFloor);
  const Index n = Q.rows(), K = Q.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  Matrix G = Matrix::Zero(n, K);

  if (mode == Mode::OvA) {
    for (Index k = 0; k < K; ++k) {
      if (!active[k]) continue;
      double shared = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double r = Q(i, k) / pi(k);
        shared += div.f(r) - r * div.df(r);
      }
      shared *= inv_n;
      for (Index j = 0; j < n; ++j) G(j, k) = inv_n * (div.df(Q(j, k) / pi(k)) + shared);
    }
    return G;
  }

  // h(t) = f(t) - t f'(t) + f'(1/t) collects every dependence on one entry.
  const auto h = [&](double t) { return div.f(t) - t * div.df(t) + div.df(1.0 / t); };
  for (Index k = 0; k < K; ++k) {
    if (!active[k]) continue;
    double shared = 0.0;
    for (Index i = 0; i < n; ++i)
      for (Index b = 0; b < K; ++b) {
        if (b == k || !active[b]) continue;
        shared += Q(i, b) * h(Q(i, k) * pi(b) / (Q(i, b) * pi(k)));
      }
    shared *= inv_n * inv_n;
    for (Index j = 0; j < n; ++j) {
      double direct = 0.0;
      for (Index b = 0; b < K; ++b) {
        if (b == k || !active[b]) continue;
        direct += pi(b) * h(Q(j, b) * pi(k) / (Q(j, k) * pi(b)));
      }
      G(j, k) = inv_n * direct + shared;
    }
  }
  return G;
}

double kl_ova_value_grad(const SoftAssignment& P, Matrix& grad, const FDivOptions& options) {
  const Vector pi = marginal(P);
  const auto active = active_clusters(pi, options);
  const Matrix& probs = P.probs();
  const Index n = probs.rows(), K = probs.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::ArrayXXd Q = probs.array().max(kProbFloor);
  // L(i,k) = log(Q(i,k) / pi(k))
  Eigen::ArrayXXd L = Q.log();
  double value = 0.0;
  grad.setZero(n, K);
  for (Index k = 0; k < K; ++k) {
    if (!active[k]) continue;
    const double pk = std::max(pi(k), kProbFloor);
    L.col(k) -= std::log(pk);
    value += (probs.col(k).array() > 0.0).select(probs.col(k).array() * L.col(k), 0.0).sum();
    // f(r) - r f'(r) = -r for KL, averaged over the batch.
    const double shared = -Q.col(k).sum() / pi(k) * inv_n;
    grad.col(k) = (inv_n * (L.col(k) + shared)).matrix();
  }
  return value * inv_n;
}

double fdiv_ovo_generic(const FDivergence& div, const SoftAssignment& P, bool use_conjugate) {
  const Vector pi = marginal(P);
  active_clusters(pi, {});
  const Index n = P.n(), K = P.k();
  double total = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index a = 0; a < K; ++a)
      for (Index b = 0; b < K; ++b) {
        const double gamma = P(i, a) * pi(b) / (P(i, b) * pi(a));
        total += pi(a) * P(i, b) * (use_conjugate ? div.conjugate(gamma) : div.f(gamma));
      }
  return total / static_cast<double>(n);
}

}  // namespace gemini
