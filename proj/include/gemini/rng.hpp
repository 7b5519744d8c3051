// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gemini {

/// Seedable 64-bit generator with platform-independent variates.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The standard distributions are not, so every variate below is
/// derived from raw engine output by hand. Independent streams come from
/// `split(id)`, which hashes (seed, id) through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child generator for stream `id`; the parent state is not advanced.
  Rng split(std::uint64_t id) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0,1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n), unbiased.
  std::uint64_t uniform_int(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  /// Gamma(shape, 1) by Marsaglia and Tsang.
  double gamma(double shape);
  double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

  /// Fisher-Yates permutation of 0..n-1.
  std::vector<int> permutation(int n);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gemini
