#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace mdens {

// Runs fn(begin, end) over contiguous chunks of [0, n) on up to `workers`
// threads. Callers write results per index and reduce in index order, so the
// outcome never depends on the worker count.
template <class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
    const std::size_t chunks = std::min<std::size_t>(std::max(1u, workers), n);
    if (chunks <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t begin = n * c / chunks;
        const std::size_t end = n * (c + 1) / chunks;
        pool.emplace_back([&, c, begin, end] {
            try {
                fn(begin, end);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace mdens
