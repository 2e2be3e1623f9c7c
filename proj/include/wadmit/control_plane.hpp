#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wadmit/capacity_oracle.hpp"
#include "wadmit/network_model.hpp"
#include "wadmit/random_source.hpp"

namespace wadmit {

struct AllocatorConfig {
    double epsilon = 0.01;
    double x_max = 1.0;  // at least every hull coordinate; coordinates never exceed 1
    UtilityParams params;

    void validate() const;
};

struct NetworkState {
    std::vector<std::int64_t> queues;
    std::int64_t slot = 0;

    static NetworkState empty(std::size_t num_links) { return {std::vector<std::int64_t>(num_links, 0), 0}; }
};

/// Everything that happened in one slot.
struct SlotTrace {
    std::int64_t slot = 0;
    Schedule schedule;
    double schedule_weight = 0.0;  // Σ q_l c̄_l s_l at the start of the slot
    std::vector<std::uint8_t> channels;
    RateVector allocation;
    std::vector<std::uint8_t> arrivals;
    std::vector<std::uint8_t> departures;
    std::vector<std::int64_t> queues_after;
};

/// Max-weight schedule for the current queues; lowest mask among ties.
Schedule max_weight_schedule(const NetworkState& state, const ScheduleSet& schedules, const ChannelModel& ch);

/// Maximiser of (1/ε)·U(x) − q·x over [0, x_max] for the capped-linear utility.
/// Bang-bang: x̄ when q ≤ slope/ε, otherwise 0.
double allocate_rate(std::int64_t queue, const AllocatorConfig& cfg, bool is_new_link);

/// Independent Bernoulli(x_l) arrivals. Draws once per link so stream positions track the slot.
std::vector<std::uint8_t> draw_arrivals(const RateVector& x, RandomSource& rng);

/// Fixed inputs of one controlled system.
class ControlLoop {
public:
    ControlLoop(const ScheduleSet& schedules, const ChannelModel& ch, AllocatorConfig cfg,
                std::optional<RateVector> fixed_arrivals = std::nullopt);

    const ScheduleSet& schedules() const { return *schedules_; }
    const ChannelModel& channels() const { return *channels_; }
    const AllocatorConfig& config() const { return cfg_; }

    /// Advances state by one slot and records it into trace, reusing its buffers.
    void step(NetworkState& state, RandomSource& rng, SlotTrace& trace) const;

private:
    const ScheduleSet* schedules_;
    const ChannelModel* channels_;
    AllocatorConfig cfg_;
    std::optional<RateVector> fixed_arrivals_;
};

/// One slot: allocate from q(t), draw arrivals, schedule from q(t), draw channels, apply
/// q(t+1) = [q(t) + a(t) − d(t)]⁺.
std::pair<NetworkState, SlotTrace> step(const NetworkState& state, const ScheduleSet& schedules,
                                        const ChannelModel& ch, const AllocatorConfig& cfg, RandomSource& rng);

} // namespace wadmit
