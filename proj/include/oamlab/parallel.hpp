#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace oamlab {

/// Worker count: OAMLAB_THREADS if set to a positive integer, else the hardware concurrency.
int worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads. The first
/// exception thrown by any call is rethrown after all workers stop.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    pool.clear();
    if (error) std::rethrow_exception(error);
}

/// Pairwise (tree) reduction in index order; the result does not depend on how
/// the values were produced.
template <typename T, typename Op>
T pairwise_reduce(std::span<const T> values, T identity, Op op) {
    if (values.empty()) return identity;
    if (values.size() == 1) return values[0];
    const std::size_t half = values.size() / 2;
    return op(pairwise_reduce(values.first(half), identity, op), pairwise_reduce(values.subspan(half), identity, op));
}

}  // namespace oamlab
