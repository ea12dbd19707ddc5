#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace pclab {

// Runs body(i) for i in [0, n) on up to jobs threads; results must be written by index.
// The first exception thrown by any task is rethrown after all threads join.
template <class F>
void parallel_for(long n, int jobs, F body) {
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = static_cast<int>(std::min<long>(jobs, std::max<long>(n, 1)));
    if (jobs <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (long i; !failed && (i = next++) < n;) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace pclab
