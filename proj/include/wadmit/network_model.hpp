#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wadmit {

/// Thrown when topology, channel or active-set inputs are inconsistent.
class TopologyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Dense link index in [0, D).
class LinkId {
public:
    constexpr LinkId() = default;
    constexpr explicit LinkId(std::size_t index) : index_(index) {}

    constexpr std::size_t value() const { return index_; }

    friend constexpr auto operator<=>(LinkId, LinkId) = default;

private:
    std::size_t index_ = 0;
};

/// Sorted, duplicate-free set of links.
using LinkSet = std::vector<LinkId>;

LinkSet make_link_set(std::vector<std::size_t> indices);

/// Links are packed into 64-bit masks, so the network holds at most 64 links.
inline constexpr std::size_t kMaxLinks = 64;
/// Explicit schedule enumeration refuses larger active sets.
inline constexpr std::size_t kMaxEnumeratedLinks = 20;

/// Pairwise interference: two links in conflict never transmit in the same slot.
class ConflictGraph {
public:
    ConflictGraph(std::size_t num_links, const std::vector<std::pair<std::size_t, std::size_t>>& conflicts);

    std::size_t num_links() const { return neighbours_.size(); }
    bool conflicts(LinkId a, LinkId b) const;
    std::uint64_t neighbour_mask(LinkId l) const { return neighbours_.at(l.value()); }

    /// Each conflicting pair once, as (a, b) with a < b, in ascending order.
    std::vector<std::pair<std::size_t, std::size_t>> conflict_pairs() const;

    static ConflictGraph complete(std::size_t num_links);
    static ConflictGraph independent(std::size_t num_links);

private:
    std::vector<std::uint64_t> neighbours_;
};

/// Mean ON probability of each link's Bernoulli channel.
class ChannelModel {
public:
    explicit ChannelModel(std::vector<double> mean);

    std::size_t num_links() const { return mean_.size(); }
    double mean(LinkId l) const { return mean_.at(l.value()); }
    const std::vector<double>& means() const { return mean_; }

private:
    std::vector<double> mean_;
};

/// 0/1 transmission vector. Bit l of the mask is s_l.
class Schedule {
public:
    Schedule() = default;
    Schedule(std::size_t num_links, std::uint64_t mask);

    std::size_t num_links() const { return num_links_; }
    std::uint64_t mask() const { return mask_; }
    bool active(LinkId l) const { return (mask_ >> l.value()) & 1U; }
    std::size_t size() const;

    /// Bit string s_0 s_1 ... s_{D-1}, e.g. "10" for link 0 alone.
    std::string to_string() const;

    friend bool operator==(const Schedule&, const Schedule&) = default;

private:
    std::size_t num_links_ = 0;
    std::uint64_t mask_ = 0;
};

bool is_feasible(const ConflictGraph& g, const Schedule& s);

/// Every feasible schedule restricted to an active link set, in ascending mask order.
class ScheduleSet {
public:
    ScheduleSet(std::size_t num_links, LinkSet active_set, std::vector<Schedule> schedules);

    std::size_t num_links() const { return num_links_; }
    const LinkSet& active_set() const { return active_set_; }
    std::uint64_t active_mask() const { return active_mask_; }
    const std::vector<Schedule>& schedules() const { return schedules_; }
    std::size_t size() const { return schedules_.size(); }
    const Schedule& operator[](std::size_t i) const { return schedules_[i]; }

    /// Position of a schedule with this mask, or size() if absent.
    std::size_t index_of(std::uint64_t mask) const;

    /// Members that leave every link outside `subset` idle.
    ScheduleSet restrict_to(const LinkSet& subset) const;

private:
    std::size_t num_links_;
    LinkSet active_set_;
    std::uint64_t active_mask_ = 0;
    std::vector<Schedule> schedules_;
};

std::uint64_t mask_of(const LinkSet& links);

/// Independent subsets of `active` in the conflict relation.
ScheduleSet enumerate_schedules(const ConflictGraph& g, const LinkSet& active);

} // namespace wadmit
