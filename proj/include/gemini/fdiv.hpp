// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "gemini/core.hpp"

namespace gemini {

enum class FDivKind { KL, TotalVariation, SquaredHellinger, Alpha };

/// Generator f of an f-divergence D_f(p||q) = E_q[f(p/q)], with f(1) = 0.
struct FDivergence {
  FDivKind kind = FDivKind::KL;
  double alpha = 2.0;  // Alpha only

  static FDivergence kl() { return {FDivKind::KL}; }
  static FDivergence total_variation() { return {FDivKind::TotalVariation}; }
  static FDivergence squared_hellinger() { return {FDivKind::SquaredHellinger}; }
  /// Throws UnsupportedAlpha for alpha <= 0; alpha == 1 yields KL.
  static FDivergence alpha_divergence(double alpha);

  double f(double t) const;
  double df(double t) const;
  /// Conjugate generator g(t) = t f(1/t), so that D_f(p||q) = D_g(q||p).
  double conjugate(double t) const { return t * f(1.0 / t); }
  double dconjugate(double t) const { return f(1.0 / t) - df(1.0 / t) / t; }

  std::string name() const;
};

FDivKind fdiv_kind_from_string(const std::string& name);

struct FDivOptions {
  /// Drop clusters with marginal below kEmptyMass instead of throwing
  /// EmptyCluster. Their terms and gradient columns are zero.
  bool skip_empty = false;
};

/// Plug-in GEMINI estimate with p(y) taken as the batch mean of P.
///
/// KL, TV and squared Hellinger support both modes; the alpha family is
/// OvA only. Probabilities are floored at kProbFloor inside logarithms.
double fdiv_gemini(const FDivergence& div, Mode mode, const SoftAssignment& P,
                   const FDivOptions& options = {});

/// (alpha (alpha-1))^-1 [-1 + sum_k pi_k^(1-alpha) E p(k|x)^alpha]; alpha = 1 is KL.
double alpha_gemini_ova(double alpha, const SoftAssignment& P, const FDivOptions& options = {});

/// dI/dP of the plug-in estimate, differentiating through the batch-mean marginal.
Matrix fdiv_gemini_grad(const FDivergence& div, Mode mode, const SoftAssignment& P,
                        const FDivOptions& options = {});

/// KL OvA value and gradient from one pass of logarithms; the training loop's
/// fast path for mutual information. Writes dI/dP into `grad`.
double kl_ova_value_grad(const SoftAssignment& P, Matrix& grad, const FDivOptions& options = {});

/// OvO estimate written directly as (1/N) sum_i sum_{a,b} pi_a P_ib f(P_ia pi_b / (P_ib pi_a)),
/// optionally with f replaced by its conjugate. Requires strictly positive P.
double fdiv_ovo_generic(const FDivergence& div, const SoftAssignment& P, bool use_conjugate = false);

}  // namespace gemini
