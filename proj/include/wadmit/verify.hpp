#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wadmit/network_model.hpp"

namespace wadmit::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Random conflict graph plus channel means, for property checks.
struct RandomInstance {
    ConflictGraph graph;
    ChannelModel channels;
};

/// D uniform in [min_links, max_links], each pair in conflict with probability `density`,
/// channel means uniform in [min_mean, 1].
RandomInstance random_instance(std::mt19937_64& rng, std::size_t min_links, std::size_t max_links, double density,
                               double min_mean);

/// Fast invariant battery behind `wadmit verify`. Every check is seeded and deterministic.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

} // namespace wadmit::verify
