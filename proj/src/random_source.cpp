#include "wadmit/random_source.hpp"

#include "wadmit/network_model.hpp"

namespace wadmit {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t master_seed, StreamPurpose purpose, std::size_t link) {
    auto h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    return splitmix64(h ^ static_cast<std::uint64_t>(link));
}

RandomSource::RandomSource(std::uint64_t seed, std::size_t num_links) : seed_(seed) {
    channel_.reserve(num_links);
    arrival_.reserve(num_links);
    for (std::size_t l = 0; l < num_links; ++l) {
        channel_.emplace_back(derive_stream_seed(seed, StreamPurpose::Channel, l));
        arrival_.emplace_back(derive_stream_seed(seed, StreamPurpose::Arrival, l));
    }
}

std::vector<std::uint8_t> sample_channels(const ChannelModel& ch, RandomSource& rng) {
    if (rng.num_links() != ch.num_links()) throw TopologyError("random source and channel model disagree on D");
    std::vector<std::uint8_t> c(ch.num_links());
    for (std::size_t l = 0; l < c.size(); ++l) c[l] = rng.channel(l).bernoulli(ch.means()[l]) ? 1 : 0;
    return c;
}

} // namespace wadmit
