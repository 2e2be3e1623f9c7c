// wadmit: command-line front end for the admission-control simulator and oracle.
//
//   wadmit simulate  <config> [--seed N] [--out FILE] [--window N]
//   wadmit admit     <config> [--seed N] [--out FILE]
//   wadmit capacity  <config> [--csv FILE] [--rates "r0 r1 ..."]
//   wadmit sweep     <config> --epsilons 0.1,0.03,0.01 [--seed N] [--out FILE]
//   wadmit stability <config> [--seed N]
//   wadmit verify    [--seed N]
//
// Exit status: 0 ok/admit, 1 reject or failed verification, 2 config error, 3 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "wadmit/admission.hpp"
#include "wadmit/capacity_oracle.hpp"
#include "wadmit/config.hpp"
#include "wadmit/harness.hpp"
#include "wadmit/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitReject = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
};

wadmit::ExperimentConfig load(const Common& c) {
    auto cfg = wadmit::load_config(c.config_path);
    if (c.seed) cfg.seed = *c.seed;
    if (!c.out.empty()) cfg.output = c.out;
    return cfg;
}

// Writes to the named file, or to stdout when the name is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    fn(f);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

int cmd_simulate(const Common& c, std::optional<std::int64_t> window) {
    auto cfg = load(c);
    if (window) {
        cfg.window = *window;
        wadmit::validate(cfg);
    }
    const auto rows = wadmit::run_simulation(cfg);
    with_output(cfg.output, [&](std::ostream& os) { wadmit::write_metrics_csv(os, rows); });
    if (!cfg.output.empty() && cfg.output != "-")
        std::cout << "simulate: " << rows.size() << " windows written to " << cfg.output << "\n";
    return kExitOk;
}

int cmd_admit(const Common& c) {
    const auto cfg = load(c);
    if (!cfg.new_link) throw wadmit::ConfigError("new_link: required for admit");
    const auto sys = wadmit::build_system(cfg);
    const auto d = wadmit::probe(wadmit::probe_config(cfg), sys.topology, sys.existing,
                                 wadmit::LinkId(*cfg.new_link), cfg.seed);

    std::cout << (d.admit ? "ADMIT" : "REJECT") << " link=" << *cfg.new_link << " x_hat_est=" << num(d.x_hat_est)
              << " x_bar=" << num(cfg.x_bar) << " oracle_x_hat=" << (d.oracle_x_hat ? num(*d.oracle_x_hat) : "n/a")
              << " existing_undisturbed=" << (d.existing_undisturbed ? "yes" : "no")
              << " max_shortfall=" << num(d.max_shortfall) << " u_n=" << num(d.evidence.u_n)
              << " seed=" << d.evidence.seed << " T=" << d.evidence.horizon << " W=" << d.evidence.warmup
              << " epsilon=" << d.evidence.epsilon << "\n";

    if (!cfg.output.empty()) {
        with_output(cfg.output, [&](std::ostream& os) {
            os << "link,role,mean_allocation,mean_departures\n";
            for (auto l : sys.served) {
                const bool is_new = l.value() == *cfg.new_link;
                os << l.value() << ',' << (is_new ? "new" : "existing") << ',' << num(d.per_link_rates[l.value()])
                   << ',' << num(d.per_link_departures[l.value()]) << '\n';
            }
        });
    }
    return d.admit ? kExitOk : kExitReject;
}

int cmd_capacity(const Common& c, const std::string& csv, const std::vector<double>& rates) {
    const auto cfg = load(c);
    const auto sys = wadmit::build_system(cfg);
    const auto& ch = sys.topology.channels;
    const auto d = sys.topology.graph.num_links();

    std::vector<std::pair<std::string, std::string>> facts;
    auto report = [&](const std::string& k, const std::string& v) {
        facts.emplace_back(k, v);
        std::cout << k << ": " << v << "\n";
    };

    report("schedules", std::to_string(sys.schedules.size()));
    wadmit::RateVector target(d, 0.0);
    for (auto l : sys.existing) target[l.value()] = cfg.x_bar;
    const auto old_set = sys.schedules.restrict_to(sys.existing);
    const auto old_m = wadmit::membership(target, old_set, ch);
    report("x_bar_on_existing", wadmit::is_inside(old_m) ? "inside" : "outside");
    if (!wadmit::is_inside(old_m)) report("certificate_margin", num(std::get<wadmit::Outside>(old_m).margin));

    if (!rates.empty()) {
        if (rates.size() != d) throw wadmit::ConfigError("--rates: expected one value per link");
        const auto m = wadmit::membership(rates, sys.schedules, ch);
        report("rates_on_served", wadmit::is_inside(m) ? "inside" : "outside");
        if (!wadmit::is_inside(m)) {
            const auto& o = std::get<wadmit::Outside>(m);
            std::string b;
            for (std::size_t l = 0; l < d; ++l) b += (l ? " " : "") + num(o.certificate[l]);
            report("certificate", b);
            report("certificate_margin", num(o.margin));
        }
    }

    if (cfg.new_link) {
        const wadmit::LinkId nl(*cfg.new_link);
        const auto threshold = wadmit::protection_threshold(cfg.u, ch, sys.served, nl);
        report("u_n_threshold", num(threshold));
        report("u_n", num(sys.allocator.params.u_n));
        report("u_n_condition", wadmit::protection_condition(sys.allocator.params, ch, sys.served) ? "holds" : "violated");
        if (wadmit::is_inside(old_m))
            report("x_hat", num(wadmit::compute_x_hat(sys.allocator.params, sys.schedules, ch, sys.existing, nl)));
    }
    report("static_objective", num(sys.oracle.objective));
    for (auto l : sys.served) report("static_allocation_" + std::to_string(l.value()), num(sys.oracle.allocation[l.value()]));

    if (!csv.empty())
        with_output(csv, [&](std::ostream& os) {
            os << "key,value\n";
            for (const auto& [k, v] : facts) os << k << ',' << v << '\n';
        });
    return kExitOk;
}

int cmd_sweep(const Common& c, const std::vector<double>& epsilons) {
    const auto cfg = load(c);
    const auto rows = wadmit::run_epsilon_sweep(cfg, epsilons);
    with_output(cfg.output, [&](std::ostream& os) {
        os << "epsilon,utility_gap,mean_total_queue,first_half_queue,second_half_queue\n";
        for (const auto& r : rows)
            os << r.epsilon << ',' << num(r.utility_gap) << ',' << num(r.mean_total_queue) << ','
               << num(r.first_half_queue) << ',' << num(r.second_half_queue) << '\n';
    });
    return kExitOk;
}

int cmd_stability(const Common& c) {
    const auto cfg = load(c);
    const auto r = wadmit::run_stability_experiment(cfg);
    std::cout << (r.verdict == wadmit::StabilityVerdict::Stable ? "STABLE" : "UNSTABLE") << " slope=" << r.slope
              << " slope_threshold=" << cfg.slope_threshold << " first_quarter_mean=" << num(r.first_quarter_mean)
              << " last_quarter_mean=" << num(r.last_quarter_mean)
              << " split_half_ok=" << (r.split_half_ok ? "yes" : "no") << " final_total_queue=" << r.final_total_queue
              << "\n";
    return kExitOk;
}

int cmd_verify(std::uint64_t seed) {
    bool all = true;
    for (const auto& r : wadmit::verify::run_invariant_suite(seed)) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        all = all && r.pass;
    }
    return all ? kExitOk : kExitReject;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed admission control simulator and capacity oracle"};
    app.require_subcommand(1);

    Common common;
    std::optional<std::int64_t> window;
    std::string csv;
    std::vector<double> rates;
    std::vector<double> epsilons;
    std::uint64_t verify_seed = 1;

    auto add_common = [&](CLI::App* sub, bool with_out) {
        sub->add_option("config", common.config_path, "experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", common.seed, "override the config seed");
        if (with_out) sub->add_option("--out", common.out, "output file (CSV)");
    };

    auto* simulate = app.add_subcommand("simulate", "run the controlled system and write windowed metrics");
    add_common(simulate, true);
    simulate->add_option("--window", window, "slots per metrics row");

    auto* admit = app.add_subcommand("admit", "probe whether the new link can be admitted at x_bar");
    add_common(admit, true);

    auto* capacity = app.add_subcommand("capacity", "membership, x_hat and u_n threshold from the exact oracle");
    add_common(capacity, false);
    capacity->add_option("--csv", csv, "also write the report as key,value CSV");
    capacity->add_option("--rates", rates, "rate vector to test for membership")->delimiter(',');

    auto* sweep = app.add_subcommand("sweep", "utility gap and mean queue across epsilon values");
    add_common(sweep, true);
    sweep->add_option("--epsilons", epsilons, "descending epsilon values")->delimiter(',')->required();

    auto* stability = app.add_subcommand("stability", "fixed-arrival stability experiment");
    add_common(stability, false);

    auto* verify = app.add_subcommand("verify", "run the invariant suite");
    verify->add_option("--seed", verify_seed, "seed for the random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*simulate) return cmd_simulate(common, window);
        if (*admit) return cmd_admit(common);
        if (*capacity) return cmd_capacity(common, csv, rates);
        if (*sweep) return cmd_sweep(common, epsilons);
        if (*stability) return cmd_stability(common);
        if (*verify) return cmd_verify(verify_seed);
    } catch (const wadmit::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const wadmit::TopologyError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitRuntime;
}
