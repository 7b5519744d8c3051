// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails or overruns its time budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gemini/eval.hpp"
#include "gemini/experiments.hpp"
#include "gemini/fdiv.hpp"
#include "gemini/ipm.hpp"
#include "gemini/rng.hpp"
#include "gemini/transport.hpp"
#include "oracles.hpp"

using namespace gemini;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "failed: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0 means no limit
  std::function<void(Outcome&)> run;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double binary_entropy(double b) { return -b * std::log(b) - (1.0 - b) * std::log(1.0 - b); }

DataMatrix plane_points(int n, Rng& rng) {
  Matrix X(n, 2);
  for (Index i = 0; i < X.size(); ++i) X.data()[i] = rng.normal();
  return DataMatrix(X);
}

Matrix balanced_dirac(int K, int per) {
  Matrix P = Matrix::Zero(K * per, K);
  for (int i = 0; i < K * per; ++i) P(i, i % K) = 1.0;
  return P;
}

void boundary(Outcome& out) {
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double beta = 0.1 * i;
    worst = std::max(worst, std::abs(boundary_demo(1e-9, beta).delta - (std::log(2.0) - binary_entropy(beta))));
  }
  out.require(worst <= 1e-6, "closed form off by " + fmt(worst));
  double worst_mc = 0.0;
  for (double separation : {1.0, 2.0, 4.0, 8.0}) {
    const auto sampled = boundary_empirical(1e-9, separation, 100000, 31);
    const auto exact = boundary_demo(1e-9, sampled.beta);
    worst_mc = std::max(worst_mc, std::abs(sampled.delta - exact.delta));
  }
  out.require(worst_mc <= 3e-3, "sampled MI off by " + fmt(worst_mc));
  out.detail << "max |dI - (log 2 - H(beta))| = " << fmt(worst) << ", max sampled gap = " << fmt(worst_mc);
}

void bias(Outcome& out) {
  const std::vector<int> batches = {10, 20, 50, 100, 200, 500, 1000};
  const auto objectives = bias_objectives();
  const auto rows = bias_study(1000, 10, objectives, batches, 50, 0);
  double worst200 = 0.0;
  int violations = 0;
  for (std::size_t o = 0; o < objectives.size(); ++o) {
    for (std::size_t b = 0; b < batches.size(); ++b) {
      const BiasRow& r = rows[o * batches.size() + b];
      if (r.batch == 200 && r.objective != "mmd-ovo") {
        worst200 = std::max(worst200, r.mse);
        out.require(r.mse <= 1e-2, r.objective + " MSE at 200 = " + fmt(r.mse));
      }
      if (b + 1 < batches.size()) {
        const BiasRow& next = rows[o * batches.size() + b + 1];
        if (next.mse > r.mse + 2.0 * std::hypot(r.se, next.se)) ++violations;
      }
    }
  }
  out.require(violations == 0, std::to_string(violations) + " monotonicity violations");
  out.detail << "worst MSE at batch 200 = " << fmt(worst200) << ", monotone within 2 SE";
}

void ovo_dominates(Outcome& out) {
  Rng rng(303);
  double worst = 0.0;
  int instances = 0;
  for (int K : {2, 3, 5, 10}) {
    for (int t = 0; t < 50; ++t, ++instances) {
      const SoftAssignment P(oracle::random_probs(64, K, rng));
      const DataMatrix X = plane_points(64, rng);
      const GeometryMatrix lin = build_kernel(X, GeometrySpec::linear_kernel());
      const GeometryMatrix rbf = build_kernel(X, GeometrySpec::gaussian_kernel(1.0));
      const GeometryMatrix dist = build_distance(X, GeometrySpec::euclidean());
      std::vector<double> gaps;
      for (const auto& div : {FDivergence::kl(), FDivergence::total_variation(), FDivergence::squared_hellinger()})
        gaps.push_back(fdiv_gemini(div, Mode::OvO, P) - fdiv_gemini(div, Mode::OvA, P));
      gaps.push_back(mmd_gemini(Mode::OvO, P, lin) - mmd_gemini(Mode::OvA, P, lin));
      gaps.push_back(mmd_gemini(Mode::OvO, P, rbf) - mmd_gemini(Mode::OvA, P, rbf));
      gaps.push_back(wasserstein_gemini(Mode::OvO, P, dist) - wasserstein_gemini(Mode::OvA, P, dist));
      for (double g : gaps) worst = std::min(worst, g);
    }
  }
  out.require(worst >= -1e-8, "OvO below OvA by " + fmt(-worst));
  out.detail << instances << " instances x 6 objectives (KL, TV, Hellinger, MMD linear, MMD Gaussian, "
             << "Wasserstein); min OvO - OvA = " << fmt(worst);
}

void two_clusters(Outcome& out) {
  Rng rng(404);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 8 + static_cast<int>(rng.uniform_int(40));
    const SoftAssignment P(oracle::random_probs(n, 2, rng));
    const DataMatrix X = plane_points(n, rng);
    const GeometryMatrix rbf = build_kernel(X, GeometrySpec::gaussian_kernel(1.0));
    const GeometryMatrix dist = build_distance(X, GeometrySpec::euclidean());
    worst = std::max(worst, std::abs(mmd_gemini(Mode::OvO, P, rbf) - mmd_gemini(Mode::OvA, P, rbf)));
    worst = std::max(worst, std::abs(wasserstein_gemini(Mode::OvO, P, dist) - wasserstein_gemini(Mode::OvA, P, dist)));
  }
  out.require(worst <= 1e-8, "max gap " + fmt(worst));
  out.detail << "200 instances, max |OvA - OvO| = " << fmt(worst);
}

void tight_bounds(Outcome& out) {
  double worst = 0.0;
  bool softening_lowers = true;
  for (int K = 2; K <= 8; ++K) {
    const Matrix D = balanced_dirac(K, 3);
    const SoftAssignment P(D);
    const double k = K;
    worst = std::max(worst, std::abs(fdiv_gemini(FDivergence::kl(), Mode::OvA, P) - std::log(k)));
    worst = std::max(worst, std::abs(fdiv_gemini(FDivergence::total_variation(), Mode::OvA, P) - (k - 1.0) / k));
    worst = std::max(worst, std::abs(fdiv_gemini(FDivergence::squared_hellinger(), Mode::OvA, P) - (1.0 - 1.0 / std::sqrt(k))));
    worst = std::max(worst, std::abs(alpha_gemini_ova(2.0, P) - (k - 1.0) / 2.0));

    const double eps = 0.05;
    const SoftAssignment soft(((1.0 - eps) * D).array() + eps / k);
    for (const auto& div : {FDivergence::total_variation(), FDivergence::squared_hellinger()}) {
      softening_lowers &= fdiv_gemini(div, Mode::OvO, soft) < fdiv_gemini(div, Mode::OvO, P);
    }
  }
  out.require(worst <= 1e-9, "bound missed by " + fmt(worst));
  out.require(softening_lowers, "softening did not lower a TV/Hellinger OvO value");
  out.detail << "K = 2..8, max deviation " << fmt(worst) << ", softening lowers TV/Hellinger OvO";
}

void gradients(Outcome& out) {
  std::map<std::string, double> worst;
  for (int seed = 0; seed < 50; ++seed) {
    Rng rng(5000 + static_cast<std::uint64_t>(seed));
    const Matrix P = oracle::random_probs(8, 3, rng);
    const DataMatrix X = plane_points(8, rng);
    const GeometryMatrix rbf = build_kernel(X, GeometrySpec::gaussian_kernel(1.0));
    const GeometryMatrix dist = build_distance(X, GeometrySpec::euclidean());
    const auto record = [&](const std::string& name, const Matrix& analytic,
                            const std::function<double(const Matrix&)>& f) {
      const double err = oracle::relative_error(analytic, oracle::finite_difference(f, P));
      worst[name] = std::max(worst[name], err);
    };
    for (const auto& div : {FDivergence::kl(), FDivergence::total_variation(), FDivergence::squared_hellinger()}) {
      for (Mode mode : {Mode::OvA, Mode::OvO}) {
        record(div.name() + "-" + std::string(to_string(mode)), fdiv_gemini_grad(div, mode, SoftAssignment(P)),
               [&](const Matrix& Q) { return fdiv_gemini(div, mode, SoftAssignment::unchecked(Q)); });
      }
    }
    for (Mode mode : {Mode::OvA, Mode::OvO}) {
      record("mmd-" + std::string(to_string(mode)), mmd_gemini_grad(mode, SoftAssignment(P), rbf),
             [&](const Matrix& Q) { return mmd_gemini(mode, SoftAssignment::unchecked(Q), rbf); });
      record("wasserstein-" + std::string(to_string(mode)), wasserstein_gemini_grad(mode, SoftAssignment(P), dist),
             [&](const Matrix& Q) { return wasserstein_gemini(mode, SoftAssignment::unchecked(Q), dist); });
    }
  }
  double fdiv_mmd = 0.0, transport = 0.0;
  for (const auto& [name, err] : worst) {
    const bool is_w = name.rfind("wasserstein", 0) == 0;
    out.require(err <= (is_w ? 1e-3 : 1e-4), name + " relative error " + fmt(err));
    (is_w ? transport : fdiv_mmd) = std::max(is_w ? transport : fdiv_mmd, err);
  }
  out.detail << "50 instances x " << worst.size() << " objectives; worst f-div/MMD " << fmt(fdiv_mmd)
             << ", Wasserstein " << fmt(transport);
}

void emd_oracles(Outcome& out) {
  Rng rng(606);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = 1 + static_cast<int>(rng.uniform_int(16));
    std::vector<double> support(static_cast<std::size_t>(n));
    double x = rng.normal();
    for (auto& s : support) {
      s = x;
      x += 0.05 + rng.uniform();
    }
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = 0.1 + rng.uniform();
      b(i) = 0.1 + rng.uniform();
    }
    a /= a.sum();
    b /= b.sum();
    Matrix C(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) C(i, j) = std::abs(support[i] - support[j]);
    worst = std::max(worst, std::abs(exact_emd(a, b, C).value - wasserstein_1d_oracle(support, a, b)));
  }
  out.require(worst <= 1e-9, "line oracle gap " + fmt(worst));

  int mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + static_cast<int>(rng.uniform_int(3));
    std::vector<oracle::Rational> ra(n), rb(n);
    Vector a(n), b(n);
    for (auto* side : {&ra, &rb}) {
      int left = 16;
      for (int i = 0; i < n; ++i) {
        const int take = i + 1 == n ? left : static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(left + 1)));
        (*side)[i] = oracle::Rational(take, 16);
        left -= take;
      }
    }
    for (int i = 0; i < n; ++i) {
      a(i) = boost::rational_cast<double>(ra[i]);
      b(i) = boost::rational_cast<double>(rb[i]);
    }
    std::vector<std::vector<long long>> ic(n, std::vector<long long>(n));
    Matrix C(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ic[i][j] = static_cast<long long>(rng.uniform_int(10));
        C(i, j) = static_cast<double>(ic[i][j]);
      }
    if (exact_emd(a, b, C).value != boost::rational_cast<double>(oracle::brute_force_emd(ra, rb, ic))) ++mismatches;
  }
  out.require(mismatches == 0, std::to_string(mismatches) + " rational mismatches");
  out.detail << "line oracle max gap " << fmt(worst) << " over 200 problems; 100 rational LPs exact";
}

void categorical(Outcome& out) {
  double mmd_min = 1.0, kl_max = -1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    mmd_min = std::min(mmd_min, run_recipe(categorical_recipe("mmd-ova", seed)).ari);
    kl_max = std::max(kl_max, run_recipe(categorical_recipe("kl-ova", seed)).ari);
  }
  out.require(mmd_min >= 0.95, "MMD ARI " + fmt(mmd_min));
  out.require(kl_max <= 0.05, "MI ARI " + fmt(kl_max));
  out.detail << "5 seeds: min MMD-OvA ARI " << fmt(mmd_min) << ", max KL-OvA ARI " << fmt(kl_max);
}

void gstm(Outcome& out) {
  for (double rho : {1.0, 2.0}) {
    const LabeledData data = gstm_data(rho);
    double km = 0.0, mmd = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      km += ari(data.labels, kmeans(data.X, 4, seed).labels) / 5.0;
      mmd += run_recipe(gstm_recipe(rho, seed)).ari / 5.0;
    }
    if (rho == 1.0) {
      out.require(km <= 0.05, "rho=1 k-means ARI " + fmt(km));
      out.require(mmd >= 0.85, "rho=1 MMD ARI " + fmt(mmd));
    } else {
      out.require(km >= 0.9, "rho=2 k-means ARI " + fmt(km));
      out.require(mmd >= 0.9, "rho=2 MMD ARI " + fmt(mmd));
    }
    out.detail << "rho=" << rho << ": k-means " << fmt(km) << ", MMD-OvA " << fmt(mmd) << "; ";
  }
}

void moons(Outcome& out) {
  const auto two = run_recipe(moons_recipe("wasserstein-ovo", 2));
  const auto w5 = run_recipe(moons_recipe("wasserstein-ovo", 5));
  const auto kl5 = run_recipe(moons_recipe("kl-ova", 5));
  out.require(two.ari == 1.0, "K=2 ARI " + fmt(two.ari));
  out.require(w5.nonempty <= 4, "K=5 Wasserstein keeps " + std::to_string(w5.nonempty));
  out.require(kl5.nonempty == 5, "K=5 KL keeps " + std::to_string(kl5.nonempty));
  out.detail << "K=2 ARI " << fmt(two.ari) << "; K=5 non-empty: Wasserstein " << w5.nonempty << ", KL "
             << kl5.nonempty;
}

void sampled_unbiased(Outcome& out) {
  Rng rng(808);
  const SoftAssignment P(oracle::random_probs(32, 4, rng));
  const GeometryMatrix dist = build_distance(plane_points(32, rng), GeometrySpec::euclidean());
  const double truth = wasserstein_ovo_distinct_pairs(P, dist);
  double sum = 0.0, sq = 0.0;
  const int seeds = 500;
  for (int s = 0; s < seeds; ++s) {
    const double v = wasserstein_ovo_sampled(P, dist, make_pair_plan(4, 1, static_cast<std::uint64_t>(s)));
    sum += v;
    sq += v * v;
  }
  const double mean = sum / seeds;
  const double se = std::sqrt((sq / seeds - mean * mean) * seeds / (seeds - 1.0) / seeds);
  out.require(std::abs(mean - truth) <= 2.0 * se, "gap " + fmt(std::abs(mean - truth)) + " > 2 SE");
  out.detail << "mean " << fmt(mean) << " vs exact " << fmt(truth) << " (SE " << fmt(se) << ")";
}

void bench_order(Outcome& out) {
  std::map<std::string, double> ms;
  for (const auto& row : run_bench(100, {20}, 5, 0)) ms[row.objective] = row.ms;
  const bool ordered = ms["kl-ova"] < ms["mmd-ova"] && ms["mmd-ova"] <= ms["mmd-ovo"] &&
                       ms["mmd-ovo"] < ms["wasserstein-ova"] && ms["wasserstein-ova"] < ms["wasserstein-ovo"];
  out.require(ordered, "ordering violated");
  out.detail << "K=20 ms: MI " << fmt(ms["kl-ova"]) << " < MMD-OvA " << fmt(ms["mmd-ova"]) << " <= MMD-OvO "
             << fmt(ms["mmd-ovo"]) << " < W-OvA " << fmt(ms["wasserstein-ova"]) << " < W-OvO "
             << fmt(ms["wasserstein-ovo"]);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "boundary closed form and sampled MI", 5, boundary},
      {2, "batch estimator MSE", 120, bias},
      {3, "OvO dominates OvA", 0, ovo_dominates},
      {4, "K=2 OvA equals OvO for IPMs", 0, two_clusters},
      {5, "Dirac bounds are attained", 0, tight_bounds},
      {6, "gradients match finite differences", 0, gradients},
      {7, "exact EMD matches oracles", 0, emd_oracles},
      {8, "categorical table: MMD separates, MI does not", 30, categorical},
      {9, "heavy-tailed mixture: MMD MLP vs k-means", 300, gstm},
      {10, "moons: Wasserstein cluster selection", 120, moons},
      {11, "sampled OvO estimator is unbiased", 0, sampled_unbiased},
      {12, "bench wall-time ordering", 0, bench_order},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) out.require(false, "took " + fmt(secs) + " s, budget " + fmt(c.budget_s) + " s");
    if (!out.ok) ++failed;
    std::printf("%s criterion %2d: %s -- %s [%.1f s]\n", out.ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
