#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "wadmit/network_model.hpp"

namespace wadmit {

/// Per-link rates in packets/slot, length D. Used for service rates μ and allocations x.
using RateVector = std::vector<double>;

/// Raised when an operation's stated precondition does not hold, e.g. the
/// existing links cannot be served at x̄ to begin with.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Probability over the members of one ScheduleSet (same indexing).
struct SchedulingPolicy {
    std::vector<double> weights;

    /// Σ_i weight_i · c̄ ∘ s_i.
    RateVector service(const ScheduleSet& schedules, const ChannelModel& ch) const;
};

/// Mean successful-transmission vector of every schedule; the vertices of the capacity region.
struct GammaSet {
    std::vector<RateVector> vertices;
};

/// Capped-linear utilities: U_l(x) = slope_l · min(x, x̄), slope u for existing links and u_n for the new one.
struct UtilityParams {
    double x_bar = 0.0;
    double u = 1.0;
    double u_n = 1.0;
    std::optional<LinkId> new_link;

    double slope(LinkId l) const { return new_link && *new_link == l ? u_n : u; }
    double utility(LinkId l, double x) const;
    void validate() const;
};

struct StaticSolution {
    SchedulingPolicy policy;
    RateVector service;     // μ*
    RateVector allocation;  // x*
    double objective = 0.0;
};

struct Inside {
    SchedulingPolicy policy;
};

/// b ≥ 0 with bᵀx − max_γ bᵀγ = margin > 0.
struct Outside {
    std::vector<double> certificate;
    double margin = 0.0;
};

using Membership = std::variant<Inside, Outside>;

inline bool is_inside(const Membership& m) { return std::holds_alternative<Inside>(m); }

struct MaxWeight {
    double value = 0.0;
    Schedule schedule;
};

GammaSet gamma(const ScheduleSet& schedules, const ChannelModel& ch);

/// Whether x is dominated by some point of conv(Γ).
Membership membership(const RateVector& x, const ScheduleSet& schedules, const ChannelModel& ch);

/// Enumeration route: max over schedules of Σ q_l c̄_l s_l, lowest mask on ties.
MaxWeight max_weight_over_hull(const std::vector<double>& q, const ScheduleSet& schedules, const ChannelModel& ch);

/// LP route for the same quantity: max qᵀμ over μ ≤ Σ λ_i γ_i, λ in the simplex.
double hull_lp_max(const std::vector<double>& q, const ScheduleSet& schedules, const ChannelModel& ch);

/// Static utility maximisation over the schedule set's active links.
StaticSolution solve_static(const UtilityParams& params, const ScheduleSet& schedules, const ChannelModel& ch,
                            const LinkSet& active);

/// Largest rate for `new_link` that still lets every existing link keep x̄, capped at x̄.
/// Throws PreconditionError if the existing links alone cannot be served at x̄.
double compute_x_hat(const UtilityParams& params, const ScheduleSet& schedules_plus, const ChannelModel& ch,
                     const LinkSet& existing, LinkId new_link);

/// u · min_{l ∈ active_plus} c̄_l / c̄_new.
double protection_threshold(double u, const ChannelModel& ch, const LinkSet& active_plus, LinkId new_link);

/// u_n strictly below protection_threshold.
bool protection_condition(const UtilityParams& params, const ChannelModel& ch, const LinkSet& active_plus);

} // namespace wadmit
