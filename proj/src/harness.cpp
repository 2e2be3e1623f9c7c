#include "wadmit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "wadmit/kernels.hpp"
#include "wadmit/random_source.hpp"

namespace wadmit {

namespace {

LinkSet to_links(const std::vector<std::size_t>& ids) { return make_link_set(ids); }

double utility_gap(const SystemSetup& sys, const std::vector<double>& mean_alloc) {
    const auto& p = sys.allocator.params;
    double gap = 0.0;
    for (auto l : sys.served)
        gap += p.utility(l, sys.oracle.allocation[l.value()]) - p.utility(l, mean_alloc[l.value()]);
    return gap;
}

double total(const std::vector<std::int64_t>& q) {
    std::int64_t s = 0;
    for (auto v : q) s += v;
    return static_cast<double>(s);
}

ScheduleSet served_schedules(const Topology& topo, const LinkSet& served) {
    return enumerate_schedules(topo.graph, served);
}

SweepRow measure_run(const ExperimentConfig& cfg) {
    const auto sys = build_system(cfg);
    const ControlLoop loop(sys.schedules, sys.topology.channels, sys.allocator, sys.fixed_arrivals);
    const auto d = sys.topology.graph.num_links();
    RandomSource rng(cfg.seed, d);
    auto state = NetworkState::empty(d);
    SlotTrace trace;

    const auto measured = cfg.horizon - cfg.warmup;
    const auto mid = cfg.warmup + measured / 2;
    std::vector<double> alloc_sum(d, 0.0);
    double q_first = 0.0, q_second = 0.0;
    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        loop.step(state, rng, trace);
        if (t < cfg.warmup) continue;
        for (std::size_t l = 0; l < d; ++l) alloc_sum[l] += trace.allocation[l];
        (t < mid ? q_first : q_second) += total(trace.queues_after);
    }

    SweepRow row;
    row.epsilon = cfg.epsilon;
    row.mean_allocation.resize(d);
    for (std::size_t l = 0; l < d; ++l) row.mean_allocation[l] = alloc_sum[l] / static_cast<double>(measured);
    row.utility_gap = utility_gap(sys, row.mean_allocation);
    row.mean_total_queue = (q_first + q_second) / static_cast<double>(measured);
    row.first_half_queue = q_first / static_cast<double>(mid - cfg.warmup);
    row.second_half_queue = q_second / static_cast<double>(cfg.horizon - mid);
    return row;
}

std::vector<ExperimentConfig> sweep_configs(const ExperimentConfig& base, const std::vector<double>& epsilons) {
    if (epsilons.empty()) throw ConfigError("epsilons: at least one value is required");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        if (!(epsilons[i] > 0.0)) throw ConfigError("epsilons: values must be positive");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigError("epsilons: values must be strictly descending");
    }
    std::vector<ExperimentConfig> out;
    for (double e : epsilons) {
        auto c = base;
        c.epsilon = e;
        validate(c);
        out.push_back(std::move(c));
    }
    return out;
}

void fixed6(std::ostream& out, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    out << buf;
}

} // namespace

SystemSetup build_system(const ExperimentConfig& cfg) {
    validate(cfg);
    Topology topo{ConflictGraph(cfg.links, cfg.conflicts), ChannelModel(cfg.channel)};
    auto existing = to_links(cfg.active);
    auto served = existing;
    if (cfg.new_link) {
        served.emplace_back(*cfg.new_link);
        std::sort(served.begin(), served.end());
    }
    auto schedules = served_schedules(topo, served);

    AllocatorConfig alloc;
    alloc.epsilon = cfg.epsilon;
    alloc.params.x_bar = cfg.x_bar;
    alloc.params.u = cfg.u;
    if (cfg.new_link) {
        const LinkId nl(*cfg.new_link);
        alloc.params.new_link = nl;
        alloc.params.u_n = cfg.u_n ? *cfg.u_n : choose_u_n(cfg.u, topo.channels, served, nl, cfg.rho);
    } else {
        alloc.params.u_n = cfg.u_n.value_or(cfg.u);
    }

    auto oracle = solve_static(alloc.params, schedules, topo.channels, served);
    return SystemSetup{std::move(topo), std::move(existing), std::move(served), std::move(schedules), alloc,
                       cfg.arrival_override, std::move(oracle)};
}

ProbeConfig probe_config(const ExperimentConfig& cfg) {
    ProbeConfig p;
    p.rho = cfg.rho;
    p.horizon = cfg.horizon;
    p.warmup = cfg.warmup;
    p.epsilon = cfg.epsilon;
    p.x_bar = cfg.x_bar;
    p.u = cfg.u;
    p.u_n = cfg.u_n;
    p.delta_admit = cfg.delta_admit;
    p.disturbance_tol = cfg.disturbance_tol;
    return p;
}

std::vector<MetricsRow> run_simulation(const ExperimentConfig& cfg) {
    const auto sys = build_system(cfg);
    const ControlLoop loop(sys.schedules, sys.topology.channels, sys.allocator, sys.fixed_arrivals);
    const auto d = sys.topology.graph.num_links();
    RandomSource rng(cfg.seed, d);
    auto state = NetworkState::empty(d);
    SlotTrace trace;

    std::vector<MetricsRow> rows;
    rows.reserve(static_cast<std::size_t>((cfg.horizon + cfg.window - 1) / cfg.window));
    std::vector<double> cum_alloc(d, 0.0);
    MetricsRow cur;
    auto reset = [&](std::int64_t index) {
        cur = MetricsRow{};
        cur.window = index;
        cur.allocation.assign(d, 0.0);
        cur.arrivals.assign(d, 0.0);
        cur.departures.assign(d, 0.0);
        cur.mean_queue.assign(d, 0.0);
    };
    reset(0);

    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        loop.step(state, rng, trace);
        ++cur.slots;
        for (std::size_t l = 0; l < d; ++l) {
            cur.allocation[l] += trace.allocation[l];
            cur.arrivals[l] += trace.arrivals[l];
            cur.departures[l] += trace.departures[l];
            cur.mean_queue[l] += static_cast<double>(trace.queues_after[l]);
            cum_alloc[l] += trace.allocation[l];
        }
        cur.total_queue += total(trace.queues_after);
        cur.schedule_weight += trace.schedule_weight;

        if (cur.slots == cfg.window || t + 1 == cfg.horizon) {
            const auto n = static_cast<double>(cur.slots);
            for (std::size_t l = 0; l < d; ++l) {
                cur.allocation[l] /= n;
                cur.arrivals[l] /= n;
                cur.departures[l] /= n;
                cur.mean_queue[l] /= n;
            }
            cur.total_queue /= n;
            cur.schedule_weight /= n;
            std::vector<double> running(d);
            for (std::size_t l = 0; l < d; ++l) running[l] = cum_alloc[l] / static_cast<double>(t + 1);
            cur.utility_gap = utility_gap(sys, running);
            const auto next = cur.window + 1;
            rows.push_back(std::move(cur));
            reset(next);
        }
    }
    return rows;
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
    const std::size_t d = rows.empty() ? 0 : rows.front().allocation.size();
    out << "window,slots";
    for (std::size_t l = 0; l < d; ++l)
        out << ",alloc_" << l << ",arrival_" << l << ",departure_" << l << ",queue_" << l;
    out << ",total_queue,schedule_weight,utility_gap\n";
    for (const auto& r : rows) {
        out << r.window << ',' << r.slots;
        for (std::size_t l = 0; l < d; ++l) {
            for (double v : {r.allocation[l], r.arrivals[l], r.departures[l], r.mean_queue[l]}) {
                out << ',';
                fixed6(out, v);
            }
        }
        for (double v : {r.total_queue, r.schedule_weight, r.utility_gap}) {
            out << ',';
            fixed6(out, v);
        }
        out << '\n';
    }
}

bool split_half_agree(double first, double second, double tolerance) {
    const double scale = std::max(std::abs(first), std::abs(second));
    if (scale == 0.0) return true;
    return std::abs(first - second) <= tolerance * scale;
}

StabilityReport run_stability_experiment(const ExperimentConfig& cfg) {
    if (!cfg.arrival_override) throw ConfigError("arrival_override: required for stability experiments");
    const auto sys = build_system(cfg);
    const ControlLoop loop(sys.schedules, sys.topology.channels, sys.allocator, sys.fixed_arrivals);
    const auto d = sys.topology.graph.num_links();
    RandomSource rng(cfg.seed, d);
    auto state = NetworkState::empty(d);
    SlotTrace trace;

    const auto half = cfg.horizon / 2;
    const auto three_quarter = half + (cfg.horizon - half) / 2;
    // regression on centred time keeps the sums well conditioned
    const double centre = 0.5 * static_cast<double>(half + cfg.horizon - 1);
    double n = 0.0, st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    double first = 0.0, second = 0.0;
    for (std::int64_t t = 0; t < cfg.horizon; ++t) {
        loop.step(state, rng, trace);
        if (t < half) continue;
        const double y = total(state.queues);
        const double x = static_cast<double>(t) - centre;
        n += 1.0;
        st += x;
        sy += y;
        stt += x * x;
        sty += x * y;
        (t < three_quarter ? first : second) += y;
    }

    StabilityReport r;
    const double denom = n * stt - st * st;
    r.slope = denom > 0.0 ? (n * sty - st * sy) / denom : 0.0;
    r.first_quarter_mean = first / static_cast<double>(three_quarter - half);
    r.last_quarter_mean = second / static_cast<double>(cfg.horizon - three_quarter);
    r.split_half_ok = split_half_agree(r.first_quarter_mean, r.last_quarter_mean, cfg.split_tolerance);
    r.verdict = r.slope > cfg.slope_threshold ? StabilityVerdict::Unstable : StabilityVerdict::Stable;
    r.final_total_queue = total(state.queues);
    return r;
}

std::vector<SweepRow> run_epsilon_sweep(const ExperimentConfig& base, const std::vector<double>& epsilons) {
    const auto configs = sweep_configs(base, epsilons);
    return kernels::map_replicas_parallel(configs.size(), [&](std::size_t i) { return measure_run(configs[i]); });
}

std::vector<SweepRow> run_epsilon_sweep_serial(const ExperimentConfig& base, const std::vector<double>& epsilons) {
    const auto configs = sweep_configs(base, epsilons);
    return kernels::map_replicas_serial(configs.size(), [&](std::size_t i) { return measure_run(configs[i]); });
}

} // namespace wadmit
