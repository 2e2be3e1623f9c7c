#include "wadmit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wadmit/capacity_oracle.hpp"
#include "wadmit/config.hpp"
#include "wadmit/control_plane.hpp"
#include "wadmit/harness.hpp"

namespace wadmit::verify {

RandomInstance random_instance(std::mt19937_64& rng, std::size_t min_links, std::size_t max_links, double density,
                               double min_mean) {
    std::uniform_int_distribution<std::size_t> nd(min_links, max_links);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> mean(min_mean, 1.0);
    const auto d = nd(rng);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = a + 1; b < d; ++b)
            if (coin(rng) < density) pairs.emplace_back(a, b);
    std::vector<double> c(d);
    for (auto& v : c) v = mean(rng);
    return {ConflictGraph(d, pairs), ChannelModel(std::move(c))};
}

namespace {

LinkSet all_links(std::size_t d) {
    LinkSet s;
    for (std::size_t l = 0; l < d; ++l) s.emplace_back(l);
    return s;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult check_enumeration(std::mt19937_64& rng) {
    for (int trial = 0; trial < 50; ++trial) {
        const auto inst = random_instance(rng, 1, 10, 0.4, 0.3);
        const auto d = inst.graph.num_links();
        const auto set = enumerate_schedules(inst.graph, all_links(d));
        std::size_t naive = 0;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m)
            if (is_feasible(inst.graph, Schedule(d, m))) ++naive;
        if (naive != set.size())
            return {"enumeration matches subset filter", false, "trial " + std::to_string(trial)};
        for (const auto& s : set.schedules())
            if (!is_feasible(inst.graph, s)) return {"enumeration matches subset filter", false, "infeasible member"};
    }
    return {"enumeration matches subset filter", true, "50 random graphs"};
}

CheckResult check_hull_equivalence(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> qd(0, 50);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto inst = random_instance(rng, 1, 8, 0.5, 0.3);
        const auto d = inst.graph.num_links();
        const auto set = enumerate_schedules(inst.graph, all_links(d));
        std::vector<double> q(d);
        for (auto& v : q) v = qd(rng);
        const auto enumerated = max_weight_over_hull(q, set, inst.channels).value;
        const auto lp = hull_lp_max(q, set, inst.channels);
        worst = std::max(worst, std::abs(enumerated - lp));
    }
    return {"schedule max equals hull LP max", worst <= 1e-9, "max |diff| = " + fmt(worst)};
}

CheckResult check_oracle_consistency(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(rng, 1, 6, 0.5, 0.3);
        const auto d = inst.graph.num_links();
        const auto set = enumerate_schedules(inst.graph, all_links(d));
        const auto hull = gamma(set, inst.channels);
        for (const auto& v : hull.vertices)
            if (!is_inside(membership(v, set, inst.channels))) return {"oracle self-consistency", false, "vertex outside"};
        std::vector<double> w(hull.vertices.size());
        double sum = 0.0;
        for (auto& x : w) sum += (x = unit(rng));
        RateVector mix(d, 0.0);
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t l = 0; l < d; ++l) mix[l] += w[i] / sum * hull.vertices[i][l];
        if (!is_inside(membership(mix, set, inst.channels)))
            return {"oracle self-consistency", false, "convex combination outside"};
    }
    const auto g = ConflictGraph::complete(3);
    const ChannelModel ch({0.9, 0.6, 0.8});
    const auto set = enumerate_schedules(g, all_links(3));
    RateVector x{0.9 * 1.05, 0.0, 0.0};
    const auto m = membership(x, set, ch);
    if (is_inside(m)) return {"oracle self-consistency", false, "scaled vertex reported inside"};
    return {"oracle self-consistency", std::get<Outside>(m).margin > 0.0, "certificate margin " + fmt(std::get<Outside>(m).margin)};
}

CheckResult check_static_protection(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> xb(0.05, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < 20) {
        const auto inst = random_instance(rng, 2, 6, 0.5, 0.3);
        const auto d = inst.graph.num_links();
        const LinkId new_link(d - 1);
        LinkSet existing = all_links(d - 1);
        const auto plus = enumerate_schedules(inst.graph, all_links(d));
        const auto old = plus.restrict_to(existing);
        UtilityParams p;
        p.x_bar = xb(rng);
        RateVector target(d, 0.0);
        for (int shrink = 0; shrink < 40; ++shrink) {
            for (auto l : existing) target[l.value()] = p.x_bar;
            if (is_inside(membership(target, old, inst.channels))) break;
            p.x_bar *= 0.8;
        }
        if (!is_inside(membership(target, old, inst.channels))) continue;
        p.u = 1.0;
        p.new_link = new_link;
        p.u_n = 0.9 * protection_threshold(p.u, inst.channels, all_links(d), new_link);
        const auto sol = solve_static(p, plus, inst.channels, all_links(d));
        const auto xh = compute_x_hat(p, plus, inst.channels, existing, new_link);
        for (auto l : existing) worst = std::max(worst, std::abs(sol.allocation[l.value()] - p.x_bar));
        worst = std::max(worst, std::abs(sol.allocation[new_link.value()] - xh));
        ++done;
    }
    return {"static new system keeps x_bar and gives x_hat", worst <= 1e-7, "max |diff| = " + fmt(worst)};
}

ExperimentConfig pair_config(double rate, std::uint64_t seed) {
    ExperimentConfig c;
    c.links = 2;
    c.channel = {1.0, 1.0};
    c.conflicts = {{0, 1}};
    c.active = {0, 1};
    c.horizon = 200'000;
    c.warmup = 100'000;
    c.seed = seed;
    c.arrival_override = std::vector<double>{rate, rate};
    return c;
}

CheckResult check_stability(std::uint64_t seed) {
    const auto stable = run_stability_experiment(pair_config(0.45, seed));
    const auto unstable = run_stability_experiment(pair_config(0.55, seed));
    const bool ok = stable.verdict == StabilityVerdict::Stable && unstable.verdict == StabilityVerdict::Unstable &&
                    std::abs(unstable.slope - 0.1) <= 0.05;
    return {"capacity dichotomy (0.45 stable, 0.55 unstable)", ok,
            "slopes " + fmt(stable.slope) + " / " + fmt(unstable.slope)};
}

CheckResult check_runtime_agreement(std::uint64_t seed) {
    const auto g = ConflictGraph(4, {{0, 1}, {1, 2}, {2, 3}});
    const ChannelModel ch({0.9, 0.7, 0.5, 0.8});
    const auto set = enumerate_schedules(g, all_links(4));
    AllocatorConfig cfg;
    cfg.epsilon = 0.1;
    cfg.params.x_bar = 0.3;
    const ControlLoop loop(set, ch, cfg);
    RandomSource rng(seed, 4);
    auto state = NetworkState::empty(4);
    SlotTrace trace;
    for (int t = 0; t < 5000; ++t) {
        std::vector<double> q(state.queues.begin(), state.queues.end());
        const auto before = state.queues;
        loop.step(state, rng, trace);
        const auto oracle = max_weight_over_hull(q, set, ch).value;
        if (std::abs(oracle - trace.schedule_weight) > 1e-9)
            return {"scheduler agrees with hull oracle every slot", false, "slot " + std::to_string(t)};
        for (std::size_t l = 0; l < 4; ++l)
            if (state.queues[l] < 0 || std::abs(state.queues[l] - before[l]) > 1)
                return {"scheduler agrees with hull oracle every slot", false, "queue jump at slot " + std::to_string(t)};
    }
    return {"scheduler agrees with hull oracle every slot", true, "5000 slots"};
}

CheckResult check_determinism(std::uint64_t seed) {
    ExperimentConfig c;
    c.links = 3;
    c.channel = {1.0, 1.0, 1.0};
    c.conflicts = {{0, 1}, {0, 2}, {1, 2}};
    c.active = {0, 1};
    c.new_link = 2;
    c.x_bar = 0.45;
    c.horizon = 20'000;
    c.warmup = 10'000;
    c.seed = seed;
    std::ostringstream a, b;
    write_metrics_csv(a, run_simulation(c));
    write_metrics_csv(b, run_simulation(c));
    return {"simulate is byte-deterministic", a.str() == b.str(), std::to_string(a.str().size()) + " bytes"};
}

} // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_enumeration(rng));
    out.push_back(check_hull_equivalence(rng));
    out.push_back(check_oracle_consistency(rng));
    out.push_back(check_static_protection(rng));
    out.push_back(check_runtime_agreement(seed));
    out.push_back(check_stability(seed));
    out.push_back(check_determinism(seed));
    return out;
}

} // namespace wadmit::verify
