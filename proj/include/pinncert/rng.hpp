#pragma once

#include <cstdint>

namespace pinncert {

// Counter-based PRNG. Every randomized operation in the library takes an
// explicit seed and derives an independent stream from it; there is no global
// generator state. Streams for sub-tasks (layer init, per-epoch resampling,
// trial indices) are obtained with split(), so adding a consumer never
// perturbs the draws of another.
class RngStream {
public:
    static RngStream from_seed(std::uint64_t seed, std::uint64_t tag = 0);

    /// Child stream independent of this one and of other tags.
    RngStream split(std::uint64_t tag) const;

    std::uint64_t next_u64();

    /// Uniform double strictly inside (0, 1).
    double next_unit();

    /// Uniform double in (-1, 1), symmetric around 0.
    double next_symmetric();

private:
    RngStream(std::uint64_t key) : key_(key) {}
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace pinncert
