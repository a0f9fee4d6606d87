#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sspac {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Work is claimed dynamically, so fn
/// must write only to slot i of its outputs. The exception of the lowest failing index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    const auto drain = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    workers = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1)));
    if (workers == 1) {
        drain();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t)
            pool.emplace_back(drain);
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

/// Worker count from hardware_concurrency, never zero.
inline unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

} // namespace sspac
