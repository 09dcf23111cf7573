// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace entrobound {

/// Worker cap: ENTROBOUND_THREADS when set to a positive integer, else the
/// hardware concurrency.
inline unsigned max_threads() {
    if (const char* env = std::getenv("ENTROBOUND_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, count) on up to max_threads() workers with a
/// static index partition. Each index owns its output slot, so results are
/// independent of execution order; fn must not throw.
template <typename Fn>
void parallel_for(std::size_t count, const Fn& fn) {
    const std::size_t workers =
        std::min<std::size_t>(max_threads(), count == 0 ? 1 : count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace entrobound
