#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "wadmit/admission.hpp"
#include "wadmit/capacity_oracle.hpp"
#include "wadmit/config.hpp"
#include "wadmit/control_plane.hpp"

namespace wadmit {

/// Everything derived from a config that a run needs.
struct SystemSetup {
    Topology topology;
    LinkSet existing;
    LinkSet served;  // existing plus the new link, if any
    ScheduleSet schedules;
    AllocatorConfig allocator;
    std::optional<RateVector> fixed_arrivals;
    StaticSolution oracle;  // static optimum over the served links
};

SystemSetup build_system(const ExperimentConfig& cfg);
ProbeConfig probe_config(const ExperimentConfig& cfg);

struct MetricsRow {
    std::int64_t window = 0;
    std::int64_t slots = 0;  // slots in this window; the last one may be short
    std::vector<double> allocation;
    std::vector<double> arrivals;
    std::vector<double> departures;
    std::vector<double> mean_queue;
    double total_queue = 0.0;
    double schedule_weight = 0.0;
    double utility_gap = 0.0;  // Σ U(x*) − U(running mean x) from slot 0 to the end of this window
};

/// Windowed metrics over the whole horizon; cfg.window slots per row.
std::vector<MetricsRow> run_simulation(const ExperimentConfig& cfg);

/// Column order: window, slots, then alloc_l, arrival_l, departure_l, queue_l for each link,
/// then total_queue, schedule_weight, utility_gap. Fixed six-decimal formatting.
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows);

enum class StabilityVerdict { Stable, Unstable };

struct StabilityReport {
    StabilityVerdict verdict = StabilityVerdict::Stable;
    double slope = 0.0;               // least-squares total-queue slope over the second half, packets/slot
    double first_quarter_mean = 0.0;  // mean total queue over [T/2, 3T/4)
    double last_quarter_mean = 0.0;   // mean total queue over [3T/4, T)
    bool split_half_ok = true;
    double final_total_queue = 0.0;
};

/// Max-weight scheduling under the fixed arrival_override rates.
StabilityReport run_stability_experiment(const ExperimentConfig& cfg);

/// |first − second| ≤ tolerance · max(|first|, |second|).
bool split_half_agree(double first, double second, double tolerance);

struct SweepRow {
    double epsilon = 0.0;
    double utility_gap = 0.0;       // Σ U(x*) − U(x̃) with x̃ averaged over (warmup, horizon]
    double mean_total_queue = 0.0;  // over (warmup, horizon]
    double first_half_queue = 0.0;
    double second_half_queue = 0.0;
    RateVector mean_allocation;
};

/// One run per ε with the base config's seed; rows in the given order.
std::vector<SweepRow> run_epsilon_sweep(const ExperimentConfig& base, const std::vector<double>& epsilons);
std::vector<SweepRow> run_epsilon_sweep_serial(const ExperimentConfig& base, const std::vector<double>& epsilons);

} // namespace wadmit
