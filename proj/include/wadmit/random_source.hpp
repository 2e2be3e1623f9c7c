#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace wadmit {

class ChannelModel;

/// Purposes that own a dedicated random stream per link.
enum class StreamPurpose : std::uint64_t {
    Channel = 1,
    Arrival = 2,
};

/// One portable random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms are formed from the top 53 bits of each draw, so a
/// Bernoulli(p) outcome is `u < p` and reproduces on any conforming library.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of stream (purpose, link) under a master seed.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, StreamPurpose purpose, std::size_t link);

/// Per-simulation randomness: one channel stream and one arrival stream per link.
/// Each stream advances by exactly one draw per link per slot.
class RandomSource {
public:
    RandomSource(std::uint64_t seed, std::size_t num_links);

    std::uint64_t seed() const { return seed_; }
    std::size_t num_links() const { return channel_.size(); }

    RandomStream& channel(std::size_t link) { return channel_.at(link); }
    RandomStream& arrival(std::size_t link) { return arrival_.at(link); }

private:
    std::uint64_t seed_;
    std::vector<RandomStream> channel_;
    std::vector<RandomStream> arrival_;
};

/// Independent Bernoulli(c̄_l) channel states for one slot.
std::vector<std::uint8_t> sample_channels(const ChannelModel& ch, RandomSource& rng);

} // namespace wadmit
