#include "pinncert/rng.hpp"

namespace pinncert {

namespace {

// SplitMix64 finalizer; full avalanche on 64 bits.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream RngStream::from_seed(std::uint64_t seed, std::uint64_t tag) {
    return RngStream(mix(mix(seed) ^ mix(tag ^ 0xa5a5a5a5a5a5a5a5ULL)));
}

RngStream RngStream::split(std::uint64_t tag) const {
    return RngStream(mix(key_ ^ mix(tag ^ 0xc3c3c3c3c3c3c3c3ULL)));
}

std::uint64_t RngStream::next_u64() {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
}

double RngStream::next_unit() {
    // 53-bit lattice midpoints: values lie in (0,1), both endpoints excluded.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::next_symmetric() {
    return 2.0 * next_unit() - 1.0;
}

}  // namespace pinncert
