// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace grkin {

/// Caps worker threads used by the solver kernels; 0 restores the default
/// (all available cores).
void set_thread_count(int threads);
[[nodiscard]] int thread_count();

/// Runs body(i) for i in [0, count). Iterations must write disjoint outputs;
/// reductions are done afterwards in index order, so results do not depend on
/// the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace grkin
