#include "wadmit/network_model.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace wadmit {

LinkSet make_link_set(std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    LinkSet out;
    out.reserve(indices.size());
    for (auto i : indices) out.emplace_back(i);
    return out;
}

std::uint64_t mask_of(const LinkSet& links) {
    std::uint64_t m = 0;
    for (auto l : links) {
        if (l.value() >= kMaxLinks) throw TopologyError("link id " + std::to_string(l.value()) + " exceeds mask width");
        m |= std::uint64_t{1} << l.value();
    }
    return m;
}

ConflictGraph::ConflictGraph(std::size_t num_links,
                             const std::vector<std::pair<std::size_t, std::size_t>>& conflicts)
    : neighbours_(num_links, 0) {
    if (num_links == 0) throw TopologyError("network needs at least one link");
    if (num_links > kMaxLinks) throw TopologyError("at most 64 links are supported");
    for (const auto& [a, b] : conflicts) {
        if (a >= num_links || b >= num_links)
            throw TopologyError("conflict pair " + std::to_string(a) + "-" + std::to_string(b) +
                                " references a link outside [0, " + std::to_string(num_links) + ")");
        if (a == b) throw TopologyError("link " + std::to_string(a) + " cannot conflict with itself");
        neighbours_[a] |= std::uint64_t{1} << b;
        neighbours_[b] |= std::uint64_t{1} << a;
    }
}

bool ConflictGraph::conflicts(LinkId a, LinkId b) const {
    return (neighbour_mask(a) >> b.value()) & 1U;
}

std::vector<std::pair<std::size_t, std::size_t>> ConflictGraph::conflict_pairs() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < num_links(); ++a)
        for (std::size_t b = a + 1; b < num_links(); ++b)
            if ((neighbours_[a] >> b) & 1U) out.emplace_back(a, b);
    return out;
}

ConflictGraph ConflictGraph::complete(std::size_t num_links) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < num_links; ++a)
        for (std::size_t b = a + 1; b < num_links; ++b) pairs.emplace_back(a, b);
    return ConflictGraph(num_links, pairs);
}

ConflictGraph ConflictGraph::independent(std::size_t num_links) {
    return ConflictGraph(num_links, {});
}

ChannelModel::ChannelModel(std::vector<double> mean) : mean_(std::move(mean)) {
    if (mean_.empty()) throw TopologyError("channel model needs at least one link");
    for (std::size_t l = 0; l < mean_.size(); ++l) {
        // written so that NaN is rejected too
        if (!(mean_[l] > 0.0 && mean_[l] <= 1.0))
            throw TopologyError("channel mean of link " + std::to_string(l) + " must lie in (0, 1]");
    }
}

Schedule::Schedule(std::size_t num_links, std::uint64_t mask) : num_links_(num_links), mask_(mask) {
    if (num_links > kMaxLinks) throw TopologyError("at most 64 links are supported");
    if (num_links < kMaxLinks && (mask >> num_links) != 0)
        throw TopologyError("schedule activates a link beyond its length");
}

std::size_t Schedule::size() const { return static_cast<std::size_t>(std::popcount(mask_)); }

std::string Schedule::to_string() const {
    std::string s(num_links_, '0');
    for (std::size_t l = 0; l < num_links_; ++l)
        if ((mask_ >> l) & 1U) s[l] = '1';
    return s;
}

bool is_feasible(const ConflictGraph& g, const Schedule& s) {
    if (s.num_links() != g.num_links()) return false;
    std::uint64_t rest = s.mask();
    while (rest != 0) {
        const auto l = static_cast<std::size_t>(std::countr_zero(rest));
        rest &= rest - 1;
        if (g.neighbour_mask(LinkId(l)) & s.mask()) return false;
    }
    return true;
}

ScheduleSet::ScheduleSet(std::size_t num_links, LinkSet active_set, std::vector<Schedule> schedules)
    : num_links_(num_links), active_set_(std::move(active_set)), schedules_(std::move(schedules)) {
    active_mask_ = mask_of(active_set_);
    if (num_links_ < kMaxLinks && (active_mask_ >> num_links_) != 0)
        throw TopologyError("active set references a link outside the network");
    for (const auto& s : schedules_) {
        if (s.num_links() != num_links_) throw TopologyError("schedule length does not match the network");
        if (s.mask() & ~active_mask_) throw TopologyError("schedule serves a link outside the active set");
    }
}

std::size_t ScheduleSet::index_of(std::uint64_t mask) const {
    auto it = std::lower_bound(schedules_.begin(), schedules_.end(), mask,
                               [](const Schedule& s, std::uint64_t m) { return s.mask() < m; });
    if (it != schedules_.end() && it->mask() == mask) return static_cast<std::size_t>(it - schedules_.begin());
    return schedules_.size();
}

ScheduleSet ScheduleSet::restrict_to(const LinkSet& subset) const {
    const auto keep = mask_of(subset);
    if (keep & ~active_mask_) throw TopologyError("restriction must be a subset of the active set");
    std::vector<Schedule> out;
    for (const auto& s : schedules_)
        if ((s.mask() & ~keep) == 0) out.push_back(s);
    return ScheduleSet(num_links_, subset, std::move(out));
}

namespace {

void extend(const ConflictGraph& g, const LinkSet& active, std::size_t pos, std::uint64_t chosen,
            std::uint64_t blocked, std::vector<std::uint64_t>& out) {
    if (pos == active.size()) {
        out.push_back(chosen);
        return;
    }
    extend(g, active, pos + 1, chosen, blocked, out);
    const auto l = active[pos];
    const auto bit = std::uint64_t{1} << l.value();
    if (!(blocked & bit)) extend(g, active, pos + 1, chosen | bit, blocked | g.neighbour_mask(l), out);
}

} // namespace

ScheduleSet enumerate_schedules(const ConflictGraph& g, const LinkSet& active) {
    for (auto l : active)
        if (l.value() >= g.num_links())
            throw TopologyError("active link " + std::to_string(l.value()) + " is not in the " +
                                std::to_string(g.num_links()) + "-link topology");
    if (!std::is_sorted(active.begin(), active.end()) ||
        std::adjacent_find(active.begin(), active.end()) != active.end())
        throw TopologyError("active set must be sorted and duplicate-free");
    if (active.size() > kMaxEnumeratedLinks)
        throw TopologyError("schedule enumeration is limited to 20 active links");

    std::vector<std::uint64_t> masks;
    extend(g, active, 0, 0, 0, masks);
    std::sort(masks.begin(), masks.end());

    std::vector<Schedule> schedules;
    schedules.reserve(masks.size());
    for (auto m : masks) schedules.emplace_back(g.num_links(), m);
    return ScheduleSet(g.num_links(), active, std::move(schedules));
}

} // namespace wadmit
