#include "wadmit/capacity_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wadmit/lp.hpp"

namespace wadmit {

namespace {

void require_dims(std::size_t got, const ScheduleSet& schedules, const ChannelModel& ch, const char* what) {
    if (ch.num_links() != schedules.num_links())
        throw TopologyError("channel model and schedule set disagree on the number of links");
    if (got != schedules.num_links())
        throw std::invalid_argument(std::string(what) + " has length " + std::to_string(got) + ", expected " +
                                    std::to_string(schedules.num_links()));
}

// Column i of the hull: c̄_l s_il.
double vertex_entry(const ScheduleSet& schedules, const ChannelModel& ch, std::size_t i, LinkId l) {
    return schedules[i].active(l) ? ch.mean(l) : 0.0;
}

} // namespace

double UtilityParams::utility(LinkId l, double x) const { return slope(l) * std::min(x, x_bar); }

void UtilityParams::validate() const {
    if (!(x_bar > 0.0 && x_bar <= 1.0)) throw std::invalid_argument("x_bar must lie in (0, 1]");
    if (!(u > 0.0)) throw std::invalid_argument("u must be positive");
    if (!(u_n > 0.0)) throw std::invalid_argument("u_n must be positive");
}

RateVector SchedulingPolicy::service(const ScheduleSet& schedules, const ChannelModel& ch) const {
    RateVector mu(schedules.num_links(), 0.0);
    for (std::size_t i = 0; i < schedules.size(); ++i)
        for (auto l : schedules.active_set()) mu[l.value()] += weights[i] * vertex_entry(schedules, ch, i, l);
    return mu;
}

GammaSet gamma(const ScheduleSet& schedules, const ChannelModel& ch) {
    require_dims(ch.num_links(), schedules, ch, "channel model");
    GammaSet g;
    g.vertices.reserve(schedules.size());
    for (const auto& s : schedules.schedules()) {
        RateVector v(s.num_links(), 0.0);
        for (std::size_t l = 0; l < v.size(); ++l)
            if (s.active(LinkId(l))) v[l] = ch.means()[l];
        g.vertices.push_back(std::move(v));
    }
    return g;
}

Membership membership(const RateVector& x, const ScheduleSet& schedules, const ChannelModel& ch) {
    require_dims(x.size(), schedules, ch, "rate vector");
    for (double v : x)
        if (!(v >= 0.0)) throw std::invalid_argument("rate vectors must be non-negative");

    // Demand on an inactive link can never be served.
    for (std::size_t l = 0; l < x.size(); ++l) {
        if (x[l] > 0.0 && !((schedules.active_mask() >> l) & 1U)) {
            std::vector<double> b(x.size(), 0.0);
            b[l] = 1.0;
            return Outside{std::move(b), x[l]};
        }
    }

    const auto n = schedules.size();
    const auto& active = schedules.active_set();
    {
        lp::Problem p(n);
        auto& simplex = p.add(lp::Relation::Equal, 1.0);
        std::fill(simplex.coeffs.begin(), simplex.coeffs.end(), 1.0);
        for (auto l : active) {
            if (x[l.value()] == 0.0) continue;
            auto& row = p.add(lp::Relation::GreaterEqual, x[l.value()]);
            for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = vertex_entry(schedules, ch, i, l);
        }
        const auto sol = lp::maximize(p);
        if (sol.status == lp::Status::Optimal) return Inside{SchedulingPolicy{sol.x}};
    }

    // Separating hyperplane: max bᵀx − h over b ∈ [0,1]^L, h ≥ 0, bᵀγ_i ≤ h.
    const auto k = active.size();
    lp::Problem p(k + 1);
    for (std::size_t j = 0; j < k; ++j) p.objective[j] = x[active[j].value()];
    p.objective[k] = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& row = p.add(lp::Relation::LessEqual, 0.0);
        for (std::size_t j = 0; j < k; ++j) row.coeffs[j] = vertex_entry(schedules, ch, i, active[j]);
        row.coeffs[k] = -1.0;
    }
    for (std::size_t j = 0; j < k; ++j) p.add(lp::Relation::LessEqual, 1.0).coeffs[j] = 1.0;
    const auto sol = lp::maximize(p);

    std::vector<double> b(x.size(), 0.0);
    for (std::size_t j = 0; j < k; ++j) b[active[j].value()] = sol.x[j];
    double bx = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) bx += b[l] * x[l];
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        for (auto l : active) v += b[l.value()] * vertex_entry(schedules, ch, i, l);
        best = std::max(best, v);
    }
    return Outside{std::move(b), bx - best};
}

MaxWeight max_weight_over_hull(const std::vector<double>& q, const ScheduleSet& schedules, const ChannelModel& ch) {
    require_dims(q.size(), schedules, ch, "weight vector");
    for (double v : q)
        if (!(v >= 0.0)) throw std::invalid_argument("weights must be non-negative");
    // Plain vertex scan, kept separate from the scheduler's kernel so the two can be compared.
    const auto hull = gamma(schedules, ch);
    MaxWeight best{-1.0, schedules[0]};
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        double v = 0.0;
        for (std::size_t l = 0; l < q.size(); ++l) v += q[l] * hull.vertices[i][l];
        if (v > best.value) best = {v, schedules[i]};
    }
    return best;
}

double hull_lp_max(const std::vector<double>& q, const ScheduleSet& schedules, const ChannelModel& ch) {
    require_dims(q.size(), schedules, ch, "weight vector");
    const auto n = schedules.size();
    const auto& active = schedules.active_set();
    const auto k = active.size();
    // variables: λ_0..λ_{n-1}, μ_l for each active link
    lp::Problem p(n + k);
    for (std::size_t j = 0; j < k; ++j) p.objective[n + j] = q[active[j].value()];
    auto& simplex = p.add(lp::Relation::Equal, 1.0);
    std::fill_n(simplex.coeffs.begin(), n, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        auto& row = p.add(lp::Relation::LessEqual, 0.0);
        row.coeffs[n + j] = 1.0;
        for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = -vertex_entry(schedules, ch, i, active[j]);
    }
    const auto sol = lp::maximize(p);
    if (sol.status != lp::Status::Optimal) throw std::logic_error("hull LP did not reach an optimum");
    return sol.objective;
}

StaticSolution solve_static(const UtilityParams& params, const ScheduleSet& schedules, const ChannelModel& ch,
                            const LinkSet& active) {
    params.validate();
    require_dims(ch.num_links(), schedules, ch, "channel model");
    if (active != schedules.active_set()) throw TopologyError("active set does not match the schedule set");

    const auto d = schedules.num_links();
    StaticSolution out;
    out.service.assign(d, 0.0);
    out.allocation.assign(d, 0.0);
    if (active.empty()) {
        out.policy.weights.assign(schedules.size(), 0.0);
        out.policy.weights[0] = 1.0;
        return out;
    }

    const auto n = schedules.size();
    const auto k = active.size();
    // variables: λ_i, then y_l = min(x_l, x̄) per active link
    lp::Problem p(n + k);
    auto& simplex = p.add(lp::Relation::Equal, 1.0);
    std::fill_n(simplex.coeffs.begin(), n, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        p.objective[n + j] = params.slope(active[j]);
        auto& served = p.add(lp::Relation::LessEqual, 0.0);
        served.coeffs[n + j] = 1.0;
        for (std::size_t i = 0; i < n; ++i) served.coeffs[i] = -vertex_entry(schedules, ch, i, active[j]);
        p.add(lp::Relation::LessEqual, params.x_bar).coeffs[n + j] = 1.0;
    }
    const auto sol = lp::maximize(p);
    if (sol.status != lp::Status::Optimal) throw std::logic_error("static allocation LP did not reach an optimum");

    out.policy.weights.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    out.service = out.policy.service(schedules, ch);
    for (std::size_t j = 0; j < k; ++j) {
        const auto l = active[j].value();
        out.allocation[l] = std::min(sol.x[n + j], out.service[l]);
    }
    out.objective = sol.objective;
    return out;
}

double compute_x_hat(const UtilityParams& params, const ScheduleSet& schedules_plus, const ChannelModel& ch,
                     const LinkSet& existing, LinkId new_link) {
    params.validate();
    auto expected = existing;
    expected.push_back(new_link);
    std::sort(expected.begin(), expected.end());
    if (expected != schedules_plus.active_set())
        throw TopologyError("existing links plus the new link must equal the schedule set's active set");

    const RateVector target = [&] {
        RateVector t(schedules_plus.num_links(), 0.0);
        for (auto l : existing) t[l.value()] = params.x_bar;
        return t;
    }();
    if (!is_inside(membership(target, schedules_plus.restrict_to(existing), ch)))
        throw PreconditionError("the existing links cannot all be served at x_bar");

    const auto n = schedules_plus.size();
    lp::Problem p(n);
    for (std::size_t i = 0; i < n; ++i) p.objective[i] = vertex_entry(schedules_plus, ch, i, new_link);
    auto& simplex = p.add(lp::Relation::Equal, 1.0);
    std::fill(simplex.coeffs.begin(), simplex.coeffs.end(), 1.0);
    for (auto l : existing) {
        auto& row = p.add(lp::Relation::GreaterEqual, params.x_bar);
        for (std::size_t i = 0; i < n; ++i) row.coeffs[i] = vertex_entry(schedules_plus, ch, i, l);
    }
    const auto sol = lp::maximize(p);
    if (sol.status != lp::Status::Optimal) throw std::logic_error("x_hat LP did not reach an optimum");
    return std::clamp(sol.objective, 0.0, params.x_bar);
}

double protection_threshold(double u, const ChannelModel& ch, const LinkSet& active_plus, LinkId new_link) {
    double lo = ch.mean(new_link);
    for (auto l : active_plus) lo = std::min(lo, ch.mean(l));
    return u * lo / ch.mean(new_link);
}

bool protection_condition(const UtilityParams& params, const ChannelModel& ch, const LinkSet& active_plus) {
    if (!params.new_link) throw std::invalid_argument("protection_condition needs a new link");
    return params.u_n < protection_threshold(params.u, ch, active_plus, *params.new_link);
}

} // namespace wadmit
