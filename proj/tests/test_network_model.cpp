#include <doctest.h>

#include <random>
#include <set>

#include "wadmit/network_model.hpp"
#include "wadmit/random_source.hpp"
#include "wadmit/verify.hpp"

using namespace wadmit;

namespace {

std::vector<std::string> bits(const ScheduleSet& set) {
    std::vector<std::string> out;
    for (const auto& s : set.schedules()) out.push_back(s.to_string());
    return out;
}

LinkSet links(std::initializer_list<std::size_t> ids) { return make_link_set(ids); }

// Oracle: filter every subset of `active` by checking each pair directly.
std::vector<std::uint64_t> naive_independent_sets(const ConflictGraph& g, const LinkSet& active) {
    std::vector<std::uint64_t> out;
    const auto k = active.size();
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << k); ++sub) {
        bool ok = true;
        std::uint64_t mask = 0;
        for (std::size_t i = 0; i < k && ok; ++i) {
            if (!((sub >> i) & 1U)) continue;
            mask |= std::uint64_t{1} << active[i].value();
            for (std::size_t j = i + 1; j < k; ++j)
                if (((sub >> j) & 1U) && g.conflicts(active[i], active[j])) ok = false;
        }
        if (ok) out.push_back(mask);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST_CASE("enumerate_schedules on two links") {
    SUBCASE("conflicting pair") {
        const ConflictGraph g(2, {{0, 1}});
        CHECK(bits(enumerate_schedules(g, links({0, 1}))) == std::vector<std::string>{"00", "10", "01"});
    }
    SUBCASE("independent pair") {
        const ConflictGraph g(2, {});
        CHECK(bits(enumerate_schedules(g, links({0, 1}))) == std::vector<std::string>{"00", "10", "01", "11"});
    }
}

TEST_CASE("enumerate_schedules on the triangle matches the subset filter") {
    const auto g = ConflictGraph::complete(3);
    const auto set = enumerate_schedules(g, links({0, 1, 2}));
    CHECK(bits(set) == std::vector<std::string>{"000", "100", "010", "001"});
    std::vector<std::uint64_t> masks;
    for (const auto& s : set.schedules()) masks.push_back(s.mask());
    CHECK(masks == naive_independent_sets(g, set.active_set()));
}

TEST_CASE("enumerate_schedules leaves inactive links idle") {
    const ConflictGraph g(4, {{0, 1}});
    const auto set = enumerate_schedules(g, links({1, 3}));
    CHECK(bits(set) == std::vector<std::string>{"0000", "0100", "0001", "0101"});
}

TEST_CASE("enumerate_schedules rejects bad active sets") {
    const ConflictGraph g(3, {});
    CHECK_THROWS_AS(enumerate_schedules(g, links({0, 3})), TopologyError);
    CHECK_THROWS_AS(enumerate_schedules(g, LinkSet{LinkId(1), LinkId(0)}), TopologyError);
    const auto wide = ConflictGraph::independent(21);
    LinkSet all;
    for (std::size_t l = 0; l < 21; ++l) all.emplace_back(l);
    CHECK_THROWS_AS(enumerate_schedules(wide, all), TopologyError);
}

TEST_CASE("is_feasible") {
    const auto g = ConflictGraph::complete(3);
    CHECK(is_feasible(g, Schedule(3, 0b001)));
    CHECK_FALSE(is_feasible(g, Schedule(3, 0b011)));
    CHECK(is_feasible(g, Schedule(3, 0)));
}

TEST_CASE("conflict graph is symmetric and irreflexive") {
    const ConflictGraph g(4, {{2, 0}, {1, 3}});
    for (std::size_t a = 0; a < 4; ++a) {
        CHECK_FALSE(g.conflicts(LinkId(a), LinkId(a)));
        for (std::size_t b = 0; b < 4; ++b) CHECK(g.conflicts(LinkId(a), LinkId(b)) == g.conflicts(LinkId(b), LinkId(a)));
    }
    CHECK(g.conflict_pairs() == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 3}});
    CHECK_THROWS_AS(ConflictGraph(3, {{1, 1}}), TopologyError);
    CHECK_THROWS_AS(ConflictGraph(3, {{0, 3}}), TopologyError);
    CHECK_THROWS_AS(ConflictGraph(0, {}), TopologyError);
}

TEST_CASE("channel means must lie in (0, 1]") {
    CHECK_NOTHROW(ChannelModel({1.0, 0.01}));
    CHECK_THROWS_AS(ChannelModel({0.0}), TopologyError);
    CHECK_THROWS_AS(ChannelModel({1.5}), TopologyError);
    CHECK_THROWS_AS(ChannelModel({}), TopologyError);
}

TEST_CASE("property: enumeration equals the naive filter and every member is feasible") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto inst = verify::random_instance(rng, 1, 12, 0.35, 0.3);
        const auto d = inst.graph.num_links();
        LinkSet active;
        for (std::size_t l = 0; l < d; ++l)
            if (coin(rng) < 0.8) active.emplace_back(l);
        const auto set = enumerate_schedules(inst.graph, active);

        std::vector<std::uint64_t> masks;
        for (const auto& s : set.schedules()) {
            CHECK(is_feasible(inst.graph, s));
            masks.push_back(s.mask());
        }
        REQUIRE(masks == naive_independent_sets(inst.graph, active));
        CHECK(set.index_of(0) == 0);
        for (auto l : active) CHECK(set.index_of(std::uint64_t{1} << l.value()) < set.size());

        // restriction consistency: S(A') is S(A) filtered to A'
        LinkSet sub;
        for (auto l : active)
            if (coin(rng) < 0.5) sub.push_back(l);
        CHECK(set.restrict_to(sub).schedules() == enumerate_schedules(inst.graph, sub).schedules());
    }
}

TEST_CASE("sample_channels") {
    SUBCASE("degenerate channels are always on") {
        RandomSource rng(3, 2);
        const ChannelModel ch({1.0, 1.0});
        for (int i = 0; i < 1000; ++i) CHECK(sample_channels(ch, rng) == std::vector<std::uint8_t>{1, 1});
    }
    SUBCASE("empirical mean within the 3-sigma binomial band") {
        RandomSource rng(5, 1);
        const ChannelModel ch({0.5});
        int on = 0;
        for (int i = 0; i < 100000; ++i) on += sample_channels(ch, rng)[0];
        CHECK(std::abs(on / 100000.0 - 0.5) <= 0.01);
    }
    SUBCASE("fixed seed reproduces the stream") {
        const ChannelModel ch({0.3, 0.7, 0.5});
        RandomSource a(42, 3), b(42, 3), c(43, 3);
        bool differs = false;
        for (int i = 0; i < 500; ++i) {
            const auto x = sample_channels(ch, a);
            CHECK(x == sample_channels(ch, b));
            differs = differs || x != sample_channels(ch, c);
        }
        CHECK(differs);
    }
}

TEST_CASE("stream seeds differ by purpose and link") {
    std::set<std::uint64_t> seeds;
    for (std::size_t l = 0; l < 16; ++l) {
        seeds.insert(derive_stream_seed(9, StreamPurpose::Channel, l));
        seeds.insert(derive_stream_seed(9, StreamPurpose::Arrival, l));
    }
    CHECK(seeds.size() == 32);
}

TEST_CASE("random stream uniforms use the top 53 bits") {
    // first mt19937_64 output for seed 5489 is 14514284786278117030 by the standard
    RandomStream s(5489);
    CHECK(s.uniform() == 0.7868209548678019);
}
