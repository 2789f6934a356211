#pragma once

#include <cstdint>
#include <string_view>

namespace chorus {

/// Deterministic uniform generator (splitmix64). The full draw sequence is a
/// function of the initial state alone, independent of platform or standard
/// library, which is what the reproducibility contract rests on.
class StreamRng {
public:
    StreamRng() = default;
    explicit StreamRng(std::uint64_t state) : state_(state) {}

    std::uint64_t next_u64();

    /// Next uniform variate in [0, 1), 53-bit resolution.
    double next_uniform();

    std::uint64_t state() const noexcept { return state_; }

    bool operator==(const StreamRng&) const = default;

private:
    std::uint64_t state_ = 0;
};

/// Master randomness source for one run.
///
/// Per-actor streams are derived by a fixed split function rather than drawn
/// from the master sequence, so adding or reordering actors never perturbs
/// another actor's draws:
///
///     stream(actor_id, label).state0 = mix(seed ^ fnv1a64(actor_id + "/" + label))
///
/// where mix is the splitmix64 output function and fnv1a64 the 64-bit FNV-1a
/// string hash. Identical seed implies identical draw sequences everywhere.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Next uniform variate in [0, 1) from the master stream.
    double draw_uniform();

    /// Derive the stream identified by (actor_id, label). Repeated calls with
    /// the same identifiers return a stream positioned at the same origin.
    StreamRng stream(std::string_view actor_id, std::string_view label) const;

private:
    std::uint64_t seed_;
    StreamRng master_;
};

/// Free-function form of the master draw.
inline double draw_uniform(RandomSource& rng) { return rng.draw_uniform(); }

std::uint64_t fnv1a64(std::string_view text);
std::uint64_t splitmix64_mix(std::uint64_t z);

} // namespace chorus
