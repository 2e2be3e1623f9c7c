#include "wadmit/kernels.hpp"

#include <bit>
#include <omp.h>

namespace wadmit::kernels {

double schedule_weight(std::span<const double> link_weight, std::uint64_t mask) {
    double v = 0.0;
    while (mask != 0) {
        v += link_weight[static_cast<std::size_t>(std::countr_zero(mask))];
        mask &= mask - 1;
    }
    return v;
}

WeightedSchedule argmax_weight_serial(std::span<const double> link_weight, const ScheduleSet& schedules) {
    WeightedSchedule best{schedule_weight(link_weight, schedules[0].mask()), 0};
    for (std::size_t i = 1; i < schedules.size(); ++i) {
        const double v = schedule_weight(link_weight, schedules[i].mask());
        if (v > best.value) best = {v, i};
    }
    return best;
}

WeightedSchedule argmax_weight_parallel(std::span<const double> link_weight, const ScheduleSet& schedules) {
    const auto n = static_cast<std::ptrdiff_t>(schedules.size());
    const int threads = omp_get_max_threads();
    std::vector<WeightedSchedule> partial(static_cast<std::size_t>(threads), WeightedSchedule{0.0, schedules.size()});

#pragma omp parallel num_threads(threads)
    {
        const auto tid = static_cast<std::size_t>(omp_get_thread_num());
        WeightedSchedule local{0.0, schedules.size()};
        // static schedule: each thread scans one contiguous, ascending block
#pragma omp for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const double v = schedule_weight(link_weight, schedules[static_cast<std::size_t>(i)].mask());
            if (local.index == schedules.size() || v > local.value) local = {v, static_cast<std::size_t>(i)};
        }
        partial[tid] = local;
    }

    WeightedSchedule best{0.0, schedules.size()};
    for (const auto& p : partial) {
        if (p.index == schedules.size()) continue;
        if (best.index == schedules.size() || p.value > best.value ||
            (p.value == best.value && p.index < best.index))
            best = p;
    }
    return best;
}

WeightedSchedule argmax_weight(std::span<const double> link_weight, const ScheduleSet& schedules) {
    if (schedules.size() >= kParallelScheduleThreshold && omp_get_max_threads() > 1)
        return argmax_weight_parallel(link_weight, schedules);
    return argmax_weight_serial(link_weight, schedules);
}

} // namespace wadmit::kernels
