#pragma once

// Data-parallel kernels. Each comes as a serial reference and an OpenMP
// version; tests pin the two against each other and bench/ times them.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <span>
#include <vector>

#include "wadmit/network_model.hpp"

namespace wadmit::kernels {

struct WeightedSchedule {
    double value = 0.0;
    std::size_t index = 0;  // position in the schedule set
};

/// Σ_{l ∈ s} w_l for a mask.
double schedule_weight(std::span<const double> link_weight, std::uint64_t mask);

/// Heaviest schedule under per-link weights; ties go to the lowest index.
WeightedSchedule argmax_weight_serial(std::span<const double> link_weight, const ScheduleSet& schedules);
WeightedSchedule argmax_weight_parallel(std::span<const double> link_weight, const ScheduleSet& schedules);

/// Below this many schedules the parallel kernel is slower than the loop.
inline constexpr std::size_t kParallelScheduleThreshold = 4096;

/// Picks serial or parallel by schedule count. Both give identical results.
WeightedSchedule argmax_weight(std::span<const double> link_weight, const ScheduleSet& schedules);

/// Runs fn(i) for i in [0, n) and returns the results in index order.
template <class Fn>
auto map_replicas_serial(std::size_t n, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
    return out;
}

/// OpenMP version of map_replicas_serial. fn must only touch state it owns.
template <class Fn>
auto map_replicas_parallel(std::size_t n, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(n);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(wadmit_replica_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace wadmit::kernels
