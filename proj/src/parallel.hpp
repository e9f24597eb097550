#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace lagbench::detail {

/// Calls job(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). Returns one exception slot per index.
template <typename Job>
std::vector<std::exception_ptr> parallel_for(std::size_t count, unsigned threads, Job&& job) {
    std::vector<std::exception_ptr> errors(count);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads, count));
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        run();
        return errors;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    return errors;
}

}  // namespace lagbench::detail
