#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wadmit/capacity_oracle.hpp"
#include "wadmit/network_model.hpp"

namespace wadmit {

struct Topology {
    ConflictGraph graph;
    ChannelModel channels;
};

struct ProbeConfig {
    double rho = 0.9;  // fraction of the u_n threshold actually used
    std::int64_t horizon = 1'000'000;
    std::int64_t warmup = 500'000;
    double epsilon = 0.01;
    double x_bar = 0.3;
    double u = 1.0;
    std::optional<double> u_n;  // overrides rho when set
    double delta_admit = 0.03;
    double disturbance_tol = 0.02;

    void validate() const;
};

struct ProbeEvidence {
    std::uint64_t seed = 0;
    std::int64_t horizon = 0;
    std::int64_t warmup = 0;
    double epsilon = 0.0;
    double u = 0.0;
    double u_n = 0.0;
};

struct AdmissionDecision {
    double x_hat_est = 0.0;
    RateVector per_link_rates;       // time-average allocator output over the measured slots
    RateVector per_link_departures;  // diagnostics only
    bool admit = false;
    bool existing_undisturbed = true;          // every existing link within disturbance_tol of x̄
    std::vector<LinkId> disturbed_links;
    double max_shortfall = 0.0;                // max over existing links of x̄ − x̃_l
    double total_shortfall = 0.0;              // Σ over existing links of x̄ − x̃_l
    std::optional<double> oracle_x_hat;
    ProbeEvidence evidence;
};

/// rho · u · min_{l ∈ active_plus} c̄_l / c̄_new.
double choose_u_n(double u, const ChannelModel& ch, const LinkSet& active_plus, LinkId new_link, double rho);

/// x_hat_est ≥ x̄ − delta_admit.
bool decide(double x_hat_est, double x_bar, double delta_admit);

/// Runs the controlled system over existing ∪ {new_link} and decides admission.
/// Throws PreconditionError when the existing links alone cannot be served at x̄.
AdmissionDecision probe(const ProbeConfig& cfg, const Topology& topo, const LinkSet& existing, LinkId new_link,
                        std::uint64_t seed);

/// One probe per seed, run concurrently; results in seed order.
std::vector<AdmissionDecision> probe_replicas(const ProbeConfig& cfg, const Topology& topo, const LinkSet& existing,
                                              LinkId new_link, const std::vector<std::uint64_t>& seeds);

/// Averages replica estimates and re-applies the decision rule to the mean.
AdmissionDecision merge_decisions(const std::vector<AdmissionDecision>& replicas, const ProbeConfig& cfg,
                                  const LinkSet& existing);

} // namespace wadmit
