#include <colocal/detail/parallel.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace colocal {
namespace {

std::size_t initial_thread_count() {
    if (const char* env = std::getenv("COLOCAL_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<std::size_t>(n);
        } catch (...) {
        }
    }
    return 1;
}

std::atomic<std::size_t> g_threads{initial_thread_count()};

}  // namespace

std::size_t thread_count() noexcept { return g_threads.load(std::memory_order_relaxed); }

void set_thread_count(std::size_t n) noexcept {
    g_threads.store(std::max<std::size_t>(n, 1), std::memory_order_relaxed);
}

namespace detail {

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk) {
    const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(min_chunk, 1)));
    if (workers <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t b = w * chunk;
        const std::size_t e = std::min(n, b + chunk);
        if (b < e) pool.emplace_back([&body, b, e] { body(b, e); });
    }
    body(0, std::min(n, chunk));
}

}  // namespace detail
}  // namespace colocal
