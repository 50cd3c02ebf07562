// Copyright (c) the dwlab authors.
// SPDX-License-Identifier: Apache-2.0
#ifndef DWLAB_PARALLEL_HPP
#define DWLAB_PARALLEL_HPP

#include <functional>

namespace dwlab {

/// Worker count: explicit argument > DWLAB_THREADS env var > hardware_concurrency.
int worker_count(int requested = 0);

/// Runs body(i) for i in [0, n) on a transient thread pool. Tasks must be
/// independent; callers keep determinism by writing into per-index slots and
/// reducing serially afterwards.
void parallel_for(int n, const std::function<void(int)>& body, int threads = 0);

}  // namespace dwlab

#endif
