#pragma once

#include <cmath>
#include <cstdint>

#include "ffts/errors.hpp"

namespace ffts {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_ids(std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = a;
    std::uint64_t h = splitmix64(state);
    state = h ^ (b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    return splitmix64(state);
}

}  // namespace detail

/// Seeded random stream addressed by (seed, stream id).
///
/// The same pair always produces the same draw sequence, independent of
/// thread count or scheduling. A stream must not be shared between parallel
/// workers; each task derives its own child with substream(). All sampling
/// routines are implemented here (xoshiro256++ core, Box-Muller normals) so
/// sequences do not depend on the standard library's distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {
        std::uint64_t init = detail::mix_ids(seed, stream);
        for (auto& word : state_) word = detail::splitmix64(init);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    /// Independent child stream, deterministic in (seed, stream, id).
    RngStream substream(std::uint64_t id) const {
        return RngStream(seed_, detail::mix_ids(stream_, id));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform draw in the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal draw; two uniforms per call, no cached spare.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Uniform integer in [0, n); unbiased via rejection. Requires n >= 1.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) throw DomainError("uniform_below: n must be positive");
        const std::uint64_t buckets = ~std::uint64_t{0} / n;
        const std::uint64_t limit = buckets * n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

}  // namespace ffts
