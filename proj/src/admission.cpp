#include "wadmit/admission.hpp"

#include <algorithm>

#include "wadmit/control_plane.hpp"
#include "wadmit/kernels.hpp"
#include "wadmit/random_source.hpp"

namespace wadmit {

void ProbeConfig::validate() const {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie strictly between 0 and 1");
    if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
    if (warmup < 0 || warmup >= horizon) throw std::invalid_argument("warmup must satisfy 0 <= warmup < horizon");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(x_bar > 0.0 && x_bar <= 1.0)) throw std::invalid_argument("x_bar must lie in (0, 1]");
    if (!(u > 0.0)) throw std::invalid_argument("u must be positive");
    if (u_n && !(*u_n > 0.0)) throw std::invalid_argument("u_n must be positive");
    if (!(delta_admit > 0.0)) throw std::invalid_argument("delta_admit must be positive");
    if (!(disturbance_tol > 0.0)) throw std::invalid_argument("disturbance_tol must be positive");
}

double choose_u_n(double u, const ChannelModel& ch, const LinkSet& active_plus, LinkId new_link, double rho) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must lie strictly between 0 and 1");
    return rho * protection_threshold(u, ch, active_plus, new_link);
}

bool decide(double x_hat_est, double x_bar, double delta_admit) { return x_hat_est >= x_bar - delta_admit; }

namespace {

LinkSet with_link(LinkSet set, LinkId l) {
    set.push_back(l);
    std::sort(set.begin(), set.end());
    return set;
}

void judge(AdmissionDecision& d, const ProbeConfig& cfg, const LinkSet& existing) {
    d.admit = decide(d.x_hat_est, cfg.x_bar, cfg.delta_admit);
    d.existing_undisturbed = true;
    d.disturbed_links.clear();
    d.max_shortfall = 0.0;
    d.total_shortfall = 0.0;
    for (auto l : existing) {
        const double shortfall = cfg.x_bar - d.per_link_rates[l.value()];
        d.max_shortfall = std::max(d.max_shortfall, shortfall);
        d.total_shortfall += shortfall;
        if (d.per_link_rates[l.value()] < cfg.x_bar - cfg.disturbance_tol) {
            d.existing_undisturbed = false;
            d.disturbed_links.push_back(l);
        }
    }
}

} // namespace

AdmissionDecision probe(const ProbeConfig& cfg, const Topology& topo, const LinkSet& existing, LinkId new_link,
                        std::uint64_t seed) {
    cfg.validate();
    if (std::find(existing.begin(), existing.end(), new_link) != existing.end())
        throw TopologyError("the new link is already in the existing set");
    if (new_link.value() >= topo.graph.num_links()) throw TopologyError("new link is outside the topology");

    const auto active_plus = with_link(existing, new_link);
    const auto schedules = enumerate_schedules(topo.graph, active_plus);
    const auto& ch = topo.channels;

    RateVector target(topo.graph.num_links(), 0.0);
    for (auto l : existing) target[l.value()] = cfg.x_bar;
    if (!is_inside(membership(target, schedules.restrict_to(existing), ch)))
        throw PreconditionError("the existing links cannot all be served at x_bar");

    AllocatorConfig alloc;
    alloc.epsilon = cfg.epsilon;
    alloc.params.x_bar = cfg.x_bar;
    alloc.params.u = cfg.u;
    alloc.params.u_n = cfg.u_n ? *cfg.u_n : choose_u_n(cfg.u, ch, active_plus, new_link, cfg.rho);
    alloc.params.new_link = new_link;

    const ControlLoop loop(schedules, ch, alloc);
    const auto d = topo.graph.num_links();
    RandomSource rng(seed, d);
    auto state = NetworkState::empty(d);
    SlotTrace trace;
    std::vector<double> alloc_sum(d, 0.0);
    std::vector<std::int64_t> dep_sum(d, 0);
    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        loop.step(state, rng, trace);
        if (t < cfg.warmup) continue;
        for (std::size_t l = 0; l < d; ++l) {
            alloc_sum[l] += trace.allocation[l];
            dep_sum[l] += trace.departures[l];
        }
    }

    AdmissionDecision out;
    const auto measured = static_cast<double>(cfg.horizon - cfg.warmup);
    out.per_link_rates.resize(d);
    out.per_link_departures.resize(d);
    for (std::size_t l = 0; l < d; ++l) {
        // each term is exactly 0 or x̄, so the mean can only leave [0, x̄] by rounding
        out.per_link_rates[l] = std::clamp(alloc_sum[l] / measured, 0.0, cfg.x_bar);
        out.per_link_departures[l] = static_cast<double>(dep_sum[l]) / measured;
    }
    out.x_hat_est = out.per_link_rates[new_link.value()];
    out.oracle_x_hat = compute_x_hat(alloc.params, schedules, ch, existing, new_link);
    out.evidence = {seed, cfg.horizon, cfg.warmup, cfg.epsilon, cfg.u, alloc.params.u_n};
    judge(out, cfg, existing);
    return out;
}

std::vector<AdmissionDecision> probe_replicas(const ProbeConfig& cfg, const Topology& topo, const LinkSet& existing,
                                              LinkId new_link, const std::vector<std::uint64_t>& seeds) {
    return kernels::map_replicas_parallel(seeds.size(),
                                          [&](std::size_t i) { return probe(cfg, topo, existing, new_link, seeds[i]); });
}

AdmissionDecision merge_decisions(const std::vector<AdmissionDecision>& replicas, const ProbeConfig& cfg,
                                  const LinkSet& existing) {
    if (replicas.empty()) throw std::invalid_argument("no replicas to merge");
    AdmissionDecision out = replicas.front();
    const auto n = static_cast<double>(replicas.size());
    std::fill(out.per_link_rates.begin(), out.per_link_rates.end(), 0.0);
    std::fill(out.per_link_departures.begin(), out.per_link_departures.end(), 0.0);
    out.x_hat_est = 0.0;
    for (const auto& r : replicas) {
        for (std::size_t l = 0; l < out.per_link_rates.size(); ++l) {
            out.per_link_rates[l] += r.per_link_rates[l] / n;
            out.per_link_departures[l] += r.per_link_departures[l] / n;
        }
        out.x_hat_est += r.x_hat_est / n;
    }
    judge(out, cfg, existing);
    return out;
}

} // namespace wadmit
