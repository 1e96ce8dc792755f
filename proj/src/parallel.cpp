// SPDX-License-Identifier: Apache-2.0

#include "grkin/parallel.hpp"

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/info.h>
#include <tbb/parallel_for.h>

#include <memory>
#include <mutex>

namespace grkin {

namespace {

std::mutex control_mutex;
std::unique_ptr<tbb::global_control> control;
int configured_threads = 0;

} // namespace

void set_thread_count(int threads)
{
    std::lock_guard lock(control_mutex);
    control.reset();
    configured_threads = threads > 0 ? threads : 0;
    if (configured_threads > 0)
        control = std::make_unique<tbb::global_control>(tbb::global_control::max_allowed_parallelism,
                                                        static_cast<std::size_t>(configured_threads));
}

int thread_count()
{
    std::lock_guard lock(control_mutex);
    return configured_threads > 0 ? configured_threads : tbb::info::default_concurrency();
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
{
    if (count == 0)
        return;
    if (count == 1) {
        body(0);
        return;
    }
    tbb::parallel_for(tbb::blocked_range<std::size_t>(0, count), [&](const tbb::blocked_range<std::size_t> &r) {
        for (std::size_t i = r.begin(); i != r.end(); ++i)
            body(i);
    });
}

} // namespace grkin
