#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qrac {

inline unsigned resolve_threads(unsigned requested, std::size_t jobs) {
    unsigned n = requested != 0 ? requested : std::max(1U, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs fn(job) for job in [0, jobs) on a small worker pool. Results must be
/// written to per-job slots so the outcome is independent of scheduling.
/// The first exception thrown by any job is rethrown.
template <typename Fn>
void parallel_jobs(std::size_t jobs, unsigned threads, Fn&& fn) {
    threads = resolve_threads(threads, jobs);
    if (threads <= 1) {
        for (std::size_t j = 0; j < jobs; ++j) fn(j);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs) return;
            try {
                fn(j);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(jobs);
                return;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Pairwise tree sum in a fixed order.
inline double tree_sum(std::vector<double> values) {
    if (values.empty()) return 0.0;
    while (values.size() > 1) {
        std::size_t half = 0;
        for (std::size_t i = 0; i < values.size(); i += 2) {
            values[half++] = i + 1 < values.size() ? values[i] + values[i + 1] : values[i];
        }
        values.resize(half);
    }
    return values.front();
}

}  // namespace qrac
