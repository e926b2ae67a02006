#pragma once

#include <cstdint>

namespace ccgibbs {

// Purpose tag for a keyed random decision.  Every random choice in the
// system is addressed by (entity, round, tag, chain); two components that
// simulate the same logical decision draw from the same stream and
// therefore agree bitwise.
enum class RngTag : std::uint64_t {
    kVertex = 1,     // activation coin followed by the proposal draw
    kEdgeAccept = 3, // single acceptance coin of an undirected edge
    kCoin1 = 4,      // three-coin view: coin 1 of the (min,max) direction
    kCoin2 = 5,      // three-coin view: coin 1 of the (max,min) direction
    kCoin3 = 6,      // three-coin view: shared coin
    kInit = 7,       // initial labeling
    kGraphGen = 8,   // graph generators
    kTest = 9,       // test-local draws
};

struct RngKey {
    std::uint64_t entity = 0;
    std::uint64_t round = 0;
    RngTag tag = RngTag::kTest;
    std::uint64_t chain = 0;
};

// Entity ids: vertices use their own id, undirected edges get a dedicated
// id space so edge keys can never collide with vertex keys.
inline std::uint64_t vertex_entity(int v) { return static_cast<std::uint64_t>(v); }

inline std::uint64_t edge_entity(int u, int v) {
    if (u > v) { const int t = u; u = v; v = t; }
    return (1ULL << 63) | (static_cast<std::uint64_t>(u) << 31) | static_cast<std::uint64_t>(v);
}

// Deterministic counter-based stream.  Construction hashes (seed, key) into
// the state; draws are successive splitmix64 outputs.  Identical (seed, key)
// gives a bitwise identical stream regardless of host or call site.
//
// The entity field is folded last, so the (seed, round, tag, chain) part of
// the key can be hashed once and reused across all entities of a round.
class RngStream {
  public:
    struct Base {
        std::uint64_t h;
        Base(std::uint64_t seed, std::uint64_t round, RngTag tag, std::uint64_t chain) {
            std::uint64_t x = seed ^ 0x6A09E667F3BCC909ULL;
            x = mix(x ^ (round * 0xC2B2AE3D27D4EB4FULL));
            x = mix(x ^ (static_cast<std::uint64_t>(tag) * 0x165667B19E3779F9ULL));
            x = mix(x ^ (chain * 0x27D4EB2F165667C5ULL));
            h = x;
        }
    };

    RngStream(const Base& base, std::uint64_t entity) {
        state_ = mix(base.h ^ (entity * 0x9E3779B97F4A7C15ULL));
    }

    RngStream(std::uint64_t seed, const RngKey& key)
        : RngStream(Base(seed, key.round, key.tag, key.chain), key.entity) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, bound).
    std::uint32_t next_below(std::uint32_t bound) {
        // multiply-shift with rejection on the short lower slice
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0ULL - bound) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

    bool next_bernoulli(double prob) { return next_unit() < prob; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace ccgibbs
