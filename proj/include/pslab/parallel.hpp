#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace pslab {

/// Thread count for parallel kernels: PSLAB_THREADS if set and positive, else the OpenMP default.
int thread_count();

/// f(i) for i in [0, n) across threads. Each i must only write its own output slot, which keeps
/// results independent of the schedule. The first exception thrown is rethrown on the caller.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    std::exception_ptr err;
    std::mutex mu;
    const auto total = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
    for (long long i = 0; i < total; ++i) {
        try {
            f(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace pslab
