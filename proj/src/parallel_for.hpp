#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace quartosc::detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(begin, end) over contiguous chunks of [0, n) on up to n_threads
// threads. Chunk boundaries depend only on (n, n_threads against n), so a
// caller that keeps per-index work independent gets deterministic output.
// The first exception thrown by any chunk is rethrown on the calling thread.
template <typename Fn>
void parallel_for_blocks(int n_threads, std::size_t n, Fn&& fn) {
    n_threads = resolve_threads(n_threads);
    const std::size_t chunks =
        std::min<std::size_t>(static_cast<std::size_t>(n_threads), n);
    if (chunks <= 1) {
        if (n > 0) fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(chunks);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t base = n / chunks;
    const std::size_t rem = n % chunks;
    std::size_t begin = 0;
    for (std::size_t c = 0; c < chunks; ++c) {
        const std::size_t len = base + (c < rem ? 1 : 0);
        const std::size_t end = begin + len;
        pool.emplace_back([&fn, begin, end, &first_error, &error_mutex]() {
            try {
                fn(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
        begin = end;
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace quartosc::detail
