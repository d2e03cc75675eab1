#pragma once

#include <cstddef>
#include <functional>

namespace colocal {

/// Worker count for internal loops. Defaults to COLOCAL_THREADS when set,
/// otherwise 1.
std::size_t thread_count() noexcept;
void set_thread_count(std::size_t n) noexcept;

namespace detail {

/// Calls body(begin, end) on disjoint chunks of [0, n). Chunks only write
/// their own outputs, so results do not depend on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_chunk = 4096);

}  // namespace detail
}  // namespace colocal
