#include "wadmit/control_plane.hpp"

#include <algorithm>
#include <string>

#include "wadmit/kernels.hpp"

namespace wadmit {

void AllocatorConfig::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(x_max >= 1.0)) throw std::invalid_argument("x_max must be at least 1 packet/slot");
    params.validate();
}

Schedule max_weight_schedule(const NetworkState& state, const ScheduleSet& schedules, const ChannelModel& ch) {
    if (state.queues.size() != schedules.num_links() || ch.num_links() != schedules.num_links())
        throw TopologyError("queue vector length does not match the network");
    std::vector<double> w(state.queues.size());
    for (std::size_t l = 0; l < w.size(); ++l) w[l] = static_cast<double>(state.queues[l]) * ch.means()[l];
    return schedules[kernels::argmax_weight(w, schedules).index];
}

double allocate_rate(std::int64_t queue, const AllocatorConfig& cfg, bool is_new_link) {
    const auto& p = cfg.params;
    const double slope = is_new_link ? p.u_n : p.u;
    const double threshold = slope / cfg.epsilon;
    // relative slack so that q == u/ε lands on the declared tie rule despite rounding in the division
    const bool admit = static_cast<double>(queue) <= threshold * (1.0 + 1e-12);
    return admit ? std::min(p.x_bar, cfg.x_max) : 0.0;
}

std::vector<std::uint8_t> draw_arrivals(const RateVector& x, RandomSource& rng) {
    if (x.size() != rng.num_links()) throw TopologyError("rate vector length does not match the random source");
    std::vector<std::uint8_t> a(x.size());
    for (std::size_t l = 0; l < x.size(); ++l) {
        if (!(x[l] >= 0.0 && x[l] <= 1.0))
            throw std::domain_error("arrival rate of link " + std::to_string(l) + " is outside [0, 1]");
        a[l] = rng.arrival(l).bernoulli(x[l]) ? 1 : 0;
    }
    return a;
}

ControlLoop::ControlLoop(const ScheduleSet& schedules, const ChannelModel& ch, AllocatorConfig cfg,
                         std::optional<RateVector> fixed_arrivals)
    : schedules_(&schedules), channels_(&ch), cfg_(cfg), fixed_arrivals_(std::move(fixed_arrivals)) {
    cfg_.validate();
    if (ch.num_links() != schedules.num_links()) throw TopologyError("channel model and schedules disagree on D");
    if (fixed_arrivals_) {
        const auto& x = *fixed_arrivals_;
        if (x.size() != schedules.num_links()) throw TopologyError("arrival override has the wrong length");
        for (std::size_t l = 0; l < x.size(); ++l) {
            if (!(x[l] >= 0.0 && x[l] <= 1.0)) throw std::domain_error("arrival override outside [0, 1]");
            if (x[l] > 0.0 && !((schedules.active_mask() >> l) & 1U))
                throw TopologyError("arrival override feeds link " + std::to_string(l) + " outside the active set");
        }
    }
}

void ControlLoop::step(NetworkState& state, RandomSource& rng, SlotTrace& trace) const {
    const auto d = schedules_->num_links();
    if (state.queues.size() != d || rng.num_links() != d) throw TopologyError("state does not match the network");
    const auto active = schedules_->active_mask();
    const auto& mean = channels_->means();

    trace.slot = state.slot;
    trace.allocation.assign(d, 0.0);
    trace.arrivals.resize(d);
    trace.channels.resize(d);
    trace.departures.resize(d);
    trace.queues_after.resize(d);

    std::vector<double> w(d, 0.0);
    for (std::size_t l = 0; l < d; ++l) {
        if (!((active >> l) & 1U)) continue;
        const bool is_new = cfg_.params.new_link && cfg_.params.new_link->value() == l;
        trace.allocation[l] = fixed_arrivals_ ? (*fixed_arrivals_)[l] : allocate_rate(state.queues[l], cfg_, is_new);
        w[l] = static_cast<double>(state.queues[l]) * mean[l];
    }

    for (std::size_t l = 0; l < d; ++l) trace.arrivals[l] = rng.arrival(l).bernoulli(trace.allocation[l]) ? 1 : 0;

    const auto best = kernels::argmax_weight(w, *schedules_);
    trace.schedule = (*schedules_)[best.index];
    trace.schedule_weight = best.value;

    for (std::size_t l = 0; l < d; ++l) trace.channels[l] = rng.channel(l).bernoulli(mean[l]) ? 1 : 0;

    const auto s = trace.schedule.mask();
    for (std::size_t l = 0; l < d; ++l) {
        trace.departures[l] = static_cast<std::uint8_t>(trace.channels[l] & ((s >> l) & 1U));
        const auto next = state.queues[l] + trace.arrivals[l] - trace.departures[l];
        state.queues[l] = std::max<std::int64_t>(next, 0);
        trace.queues_after[l] = state.queues[l];
    }
    ++state.slot;
}

std::pair<NetworkState, SlotTrace> step(const NetworkState& state, const ScheduleSet& schedules,
                                        const ChannelModel& ch, const AllocatorConfig& cfg, RandomSource& rng) {
    ControlLoop loop(schedules, ch, cfg);
    NetworkState next = state;
    SlotTrace trace;
    loop.step(next, rng, trace);
    return {std::move(next), std::move(trace)};
}

} // namespace wadmit
