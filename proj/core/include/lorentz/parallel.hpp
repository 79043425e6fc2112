#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lorentz {

struct ParallelOptions {
    unsigned workers = 1;
    /// Work items per task. Task boundaries (not worker count) fix the random
    /// sub-streams, so results are identical for any number of workers.
    std::size_t chunk = 1u << 15;
};

/// Splits [0, n) into fixed chunks, runs `task(task_id, begin, end)` on a
/// worker pool and returns the per-task results in task order.
template <class Result, class Task>
std::vector<Result> run_tasks(std::size_t n, const ParallelOptions &opts, Task &&task) {
    const std::size_t chunk = std::max<std::size_t>(1, opts.chunk);
    const std::size_t n_tasks = (n + chunk - 1) / chunk;
    std::vector<Result> results(n_tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t id = next.fetch_add(1);
            if (id >= n_tasks) return;
            try {
                const std::size_t begin = id * chunk;
                results[id] = task(static_cast<std::uint64_t>(id), begin, std::min(n, begin + chunk));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_tasks);
                return;
            }
        }
    };

    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, opts.workers), std::max<std::size_t>(1, n_tasks)));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

} // namespace lorentz
