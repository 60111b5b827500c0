// Copyright (c) the ssflab contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SSFLAB_PARALLEL_HPP
#define SSFLAB_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ssflab {

/// Worker cap: min(hardware_concurrency, SSFLAB_THREADS). At least 1.
int worker_count();

/// Runs fn(i) for i in [0, n). Iterations must be independent; callers get
/// deterministic results by writing to per-index slots and reducing in index
/// order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace ssflab

#endif  // SSFLAB_PARALLEL_HPP
