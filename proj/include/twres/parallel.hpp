#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace twres {

/// Runs fn(0..count-1) on up to `workers` threads and returns the results in index order.
/// If tasks throw, the exception of the lowest failing index is rethrown.
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t count, int workers, Fn&& fn) {
    std::vector<Result> out(count);
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (n <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace twres
