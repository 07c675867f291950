#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace tfsst::detail {

/// Split [0, n) into contiguous chunks and run body(begin, end) per chunk,
/// one worker thread each. Serial when the machine has a single core or the
/// range is small. body must be safe on disjoint ranges.
template <typename Body>
void parallel_chunks(std::size_t n, Body&& body, std::size_t min_per_thread = 64) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = hw > 1 ? hw : 1;
    if (workers > 1) workers = std::min<std::size_t>(workers, n / min_per_thread);
    if (workers <= 1 || n == 0) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t b = w * chunk;
        std::size_t e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&body, b, e] { body(b, e); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tfsst::detail
