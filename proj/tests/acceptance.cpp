// Acceptance battery: one PASS/FAIL line per criterion, non-zero exit on any failure.
// Tolerances and runtime limits are fixed here; reference values are computed
// independently of the library code paths being checked.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "wadmit/admission.hpp"
#include "wadmit/capacity_oracle.hpp"
#include "wadmit/harness.hpp"
#include "wadmit/verify.hpp"

using namespace wadmit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= limit_s;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s, limit %.0f s%s)\n", ok ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
                limit_s, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

LinkSet all_links(std::size_t d) {
    LinkSet s;
    for (std::size_t l = 0; l < d; ++l) s.emplace_back(l);
    return s;
}

// Max of Σ q_l c̄_l s_l over every conflict-free subset, by direct pair checks.
double brute_force_max_weight(const ConflictGraph& g, const ChannelModel& ch, const std::vector<double>& q) {
    const auto d = g.num_links();
    double best = 0.0;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << d); ++m) {
        bool ok = true;
        double w = 0.0;
        for (std::size_t a = 0; a < d && ok; ++a) {
            if (!((m >> a) & 1U)) continue;
            w += q[a] * ch.mean(LinkId(a));
            for (std::size_t b = a + 1; b < d; ++b)
                if (((m >> b) & 1U) && g.conflicts(LinkId(a), LinkId(b))) ok = false;
        }
        if (ok) best = std::max(best, w);
    }
    return best;
}

// Largest t with (x̄ on existing, t on new) in the region, by bisection on membership.
double bisect_x_hat(double x_bar, const ScheduleSet& plus, const ChannelModel& ch, const LinkSet& existing,
                    LinkId new_link) {
    RateVector x(ch.num_links(), 0.0);
    for (auto l : existing) x[l.value()] = x_bar;
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        x[new_link.value()] = mid;
        (is_inside(membership(x, plus, ch)) ? lo : hi) = mid;
    }
    return std::min(x_bar, lo);
}

ExperimentConfig triangle(double x_bar, std::uint64_t seed) {
    ExperimentConfig c;
    c.links = 3;
    c.channel = {1, 1, 1};
    c.conflicts = {{0, 1}, {0, 2}, {1, 2}};
    c.active = {0, 1};
    c.new_link = 2;
    c.x_bar = x_bar;
    c.epsilon = 0.01;
    c.horizon = 1'000'000;
    c.warmup = 500'000;
    c.seed = seed;
    return c;
}

Outcome hull_equivalence() {
    std::mt19937_64 rng(20240501);
    std::uniform_int_distribution<int> qd(0, 50);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const auto inst = verify::random_instance(rng, 1, 8, 0.5, 0.3);
        const auto d = inst.graph.num_links();
        const auto set = enumerate_schedules(inst.graph, all_links(d));
        std::vector<double> q(d);
        for (auto& v : q) v = qd(rng);
        const double ref = brute_force_max_weight(inst.graph, inst.channels, q);
        worst = std::max(worst, std::abs(max_weight_over_hull(q, set, inst.channels).value - ref));
        worst = std::max(worst, std::abs(hull_lp_max(q, set, inst.channels) - ref));
    }
    return {worst <= 1e-9, "200 instances, max |diff| " + fmt(worst) + " (tol 1e-9)"};
}

Outcome static_optimum() {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> xb(0.05, 1.0);
    double worst = 0.0;
    int done = 0, tries = 0;
    while (done < 50 && tries < 10'000) {
        ++tries;
        const auto inst = verify::random_instance(rng, 2, 6, 0.5, 0.3);
        const auto d = inst.graph.num_links();
        const LinkId nl(d - 1);
        const auto existing = all_links(d - 1);
        const auto plus = enumerate_schedules(inst.graph, all_links(d));
        UtilityParams p;
        p.x_bar = xb(rng);
        RateVector target(d, 0.0);
        for (auto l : existing) target[l.value()] = p.x_bar;
        if (!is_inside(membership(target, plus.restrict_to(existing), inst.channels))) continue;
        p.new_link = nl;
        // threshold u·min c̄ / c̄_new taken directly from the channel means
        double min_c = 1.0;
        for (std::size_t l = 0; l < d; ++l) min_c = std::min(min_c, inst.channels.mean(LinkId(l)));
        p.u_n = 0.9 * p.u * min_c / inst.channels.mean(nl);
        const auto sol = solve_static(p, plus, inst.channels, all_links(d));
        const double ref = bisect_x_hat(p.x_bar, plus, inst.channels, existing, nl);
        for (auto l : existing) worst = std::max(worst, std::abs(sol.allocation[l.value()] - p.x_bar));
        worst = std::max(worst, std::abs(sol.allocation[nl.value()] - ref));
        worst = std::max(worst, std::abs(compute_x_hat(p, plus, inst.channels, existing, nl) - ref));
        ++done;
    }
    return {done == 50 && worst <= 1e-7, std::to_string(done) + " instances, max |diff| " + fmt(worst) + " (tol 1e-7)"};
}

Outcome probe_accuracy() {
    bool ok = true;
    std::string detail;
    // complete graph, unit channels: the newcomer's share is 1 − Σ x̄
    const double expected = 1.0 - 2 * 0.45;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto cfg = triangle(0.45, seed);
        const auto sys = build_system(cfg);
        const auto d = probe(probe_config(cfg), sys.topology, sys.existing, LinkId(2), seed);
        const double worst_existing = std::min(d.per_link_rates[0], d.per_link_rates[1]);
        ok = ok && std::abs(d.x_hat_est - expected) <= 0.02 && worst_existing >= 0.45 - 0.02 && !d.admit;
        detail += "seed " + std::to_string(seed) + ": x_hat_est " + fmt(d.x_hat_est) + " min existing " +
                  fmt(worst_existing) + "; ";
    }
    const auto cfg = triangle(0.3, 1);
    const auto sys = build_system(cfg);
    const auto d = probe(probe_config(cfg), sys.topology, sys.existing, LinkId(2), 1);
    ok = ok && d.admit && d.x_hat_est >= 0.28;
    detail += "x_bar 0.3: " + std::string(d.admit ? "admit" : "reject") + " x_hat_est " + fmt(d.x_hat_est);
    return {ok, detail};
}

Outcome queue_stability() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t seed : {1, 2, 3}) {
        const auto rows = run_epsilon_sweep(triangle(0.3, seed), {0.1, 0.01});
        const auto& coarse = rows[0];
        const auto& fine = rows[1];
        const bool halves = split_half_agree(fine.first_half_queue, fine.second_half_queue, 0.10);
        const bool grows = fine.mean_total_queue > coarse.mean_total_queue;
        ok = ok && halves && grows;
        detail += "seed " + std::to_string(seed) + ": halves " + fmt(fine.first_half_queue) + "/" +
                  fmt(fine.second_half_queue) + ", queue " + fmt(fine.mean_total_queue) + " vs " +
                  fmt(coarse.mean_total_queue) + "; ";
    }
    return {ok, detail};
}

Outcome utility_trend() {
    const auto rows = run_epsilon_sweep(triangle(0.3, 1), {0.1, 0.03, 0.01});
    bool ok = rows.back().utility_gap <= rows.front().utility_gap;
    std::string detail = "gaps";
    for (const auto& r : rows) {
        ok = ok && r.utility_gap >= -0.01;
        detail += " " + fmt(r.epsilon) + ":" + fmt(r.utility_gap);
    }
    return {ok, detail};
}

Outcome capacity_dichotomy() {
    auto pair = [](double rate) {
        ExperimentConfig c;
        c.links = 2;
        c.channel = {1, 1};
        c.conflicts = {{0, 1}};
        c.active = {0, 1};
        c.horizon = 1'000'000;
        c.warmup = 500'000;
        c.arrival_override = std::vector<double>{rate, rate};
        return c;
    };
    // excess of b = (1, 1): bᵀx minus the best vertex value, vertices (0,0), (1,0), (0,1)
    const double excess = (0.55 + 0.55) - 1.0;
    const auto stable = run_stability_experiment(pair(0.45));
    const auto unstable = run_stability_experiment(pair(0.55));
    const bool ok = stable.verdict == StabilityVerdict::Stable && unstable.verdict == StabilityVerdict::Unstable &&
                    std::abs(unstable.slope - excess) <= 0.05;
    return {ok, "slope at 0.45 " + fmt(stable.slope) + ", at 0.55 " + fmt(unstable.slope) + " (expected " +
                    fmt(excess) + " +- 0.05)"};
}

Outcome oracle_consistency() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int vertices = 0, mixes = 0, violations = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const auto inst = verify::random_instance(rng, 2, 7, 0.4, 0.3);
        const auto set = enumerate_schedules(inst.graph, all_links(inst.graph.num_links()));
        const auto hull = gamma(set, inst.channels);
        for (const auto& v : hull.vertices) {
            ++vertices;
            violations += !is_inside(membership(v, set, inst.channels));
        }
        for (int k = 0; k < 10; ++k) {
            std::vector<double> w(hull.vertices.size());
            double sum = 0.0;
            for (auto& x : w) sum += (x = -std::log(1.0 - unit(rng)));  // uniform on the simplex
            RateVector mix(inst.graph.num_links(), 0.0);
            for (std::size_t i = 0; i < w.size(); ++i)
                for (std::size_t l = 0; l < mix.size(); ++l) mix[l] += w[i] / sum * hull.vertices[i][l];
            ++mixes;
            violations += !is_inside(membership(mix, set, inst.channels));
        }
    }

    int outside = 0, bad_certificates = 0;
    const ChannelModel ch({0.9, 0.6, 0.8, 0.7});
    const auto g = ConflictGraph::complete(4);
    const auto set = enumerate_schedules(g, all_links(4));
    const auto hull = gamma(set, ch);
    for (std::size_t l = 0; l < 4; ++l) {
        RateVector x(4, 0.0);
        x[l] = 1.05 * ch.mean(LinkId(l));
        const auto m = membership(x, set, ch);
        if (is_inside(m)) continue;
        ++outside;
        const auto& b = std::get<Outside>(m).certificate;
        double bx = 0.0, best = 0.0;
        for (std::size_t k = 0; k < 4; ++k) bx += b[k] * x[k];
        for (const auto& v : hull.vertices) {
            double bv = 0.0;
            for (std::size_t k = 0; k < 4; ++k) bv += b[k] * v[k];
            best = std::max(best, bv);
        }
        bad_certificates += !(bx > best + 1e-9);
    }
    const bool ok = violations == 0 && outside == 4 && bad_certificates == 0;
    return {ok, std::to_string(vertices) + " vertices and " + std::to_string(mixes) + " mixtures inside (" +
                    std::to_string(violations) + " violations); " + std::to_string(outside) +
                    "/4 scaled vertices outside, " + std::to_string(bad_certificates) + " bad certificates"};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

Outcome simulate_determinism() {
    const std::string base = std::string(WADMIT_TEST_TMPDIR) + "/determinism_";
    std::string outs[2];
    for (int i = 0; i < 2; ++i) {
        const auto path = base + std::to_string(i) + ".csv";
        const auto cmd = std::string("\"") + WADMIT_CLI + "\" simulate \"" + WADMIT_CONFIG_DIR +
                         "/triangle_reject.cfg\" --seed 11 --out \"" + path + "\" > /dev/null";
        if (std::system(cmd.c_str()) != 0) return {false, "simulate exited non-zero"};
        outs[i] = slurp(path);
    }
    return {!outs[0].empty() && outs[0] == outs[1], std::to_string(outs[0].size()) + " bytes, identical: " +
                                                        (outs[0] == outs[1] ? "yes" : "no")};
}

} // namespace

int main() {
    run(1, "max-weight over schedules equals LP max over the hull", 10, hull_equivalence);
    run(2, "static optimum keeps x_bar on existing links and x_hat on the new one", 30, static_optimum);
    run(3, "probe estimate on the triangle", 4 * 60, probe_accuracy);  // 60 s per probe
    run(4, "queue stability and 1/epsilon growth", 180, queue_stability);
    run(5, "utility gap shrinks with epsilon", 180, utility_trend);
    run(6, "capacity dichotomy on the conflicting pair", 30, capacity_dichotomy);
    run(7, "oracle self-consistency", 5, oracle_consistency);
    run(8, "simulate CSV is byte-identical for a fixed seed", 60, simulate_determinism);
    std::printf("%s: %d failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
