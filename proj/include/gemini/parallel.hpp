// Copyright 2026 The GEMINI Clustering Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace gemini {

/// Caps the number of worker threads used by internal loops (>= 1).
void set_max_threads(int threads);
int max_threads();

/// Runs body(i) for i in [0, n). Iterations must write to disjoint outputs;
/// callers reduce results afterwards in index order so the outcome does not
/// depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace gemini
