#include "chorus/random.hpp"

#include <string>

namespace chorus {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
} // namespace

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::uint64_t StreamRng::next_u64() {
    state_ += kGolden;
    return splitmix64_mix(state_);
}

double StreamRng::next_uniform() {
    // Top 53 bits scaled into [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RandomSource::RandomSource(std::uint64_t seed)
    : seed_(seed), master_(splitmix64_mix(seed ^ fnv1a64("master"))) {}

double RandomSource::draw_uniform() { return master_.next_uniform(); }

StreamRng RandomSource::stream(std::string_view actor_id, std::string_view label) const {
    std::string key;
    key.reserve(actor_id.size() + label.size() + 1);
    key.append(actor_id);
    key.push_back('/');
    key.append(label);
    return StreamRng(splitmix64_mix(seed_ ^ fnv1a64(key)));
}

} // namespace chorus
