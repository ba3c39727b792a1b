#ifndef DDILU_SRC_PARALLEL_HPP
#define DDILU_SRC_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ddilu::detail {

/// Runs fn(d) for d in [0, count) on up to `threads` workers. Work items must
/// touch disjoint state; the first exception thrown is rethrown.
template <typename Fn>
void for_each_domain(int count, int threads, Fn&& fn) {
    const int workers = std::clamp(threads, 1, std::max(count, 1));
    if (workers == 1) {
        for (int d = 0; d < count; ++d) {
            fn(d);
        }
        return;
    }
    std::exception_ptr error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int d = w; d < count; d += workers) {
                try {
                    fn(d);
                } catch (...) {
                    std::lock_guard<std::mutex> guard(error_lock);
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

} // namespace ddilu::detail

#endif // DDILU_SRC_PARALLEL_HPP
