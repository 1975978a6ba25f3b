#pragma once

#include <cstdint>

namespace nefrac {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so results do not depend on evaluation order or
// parallel schedule. Two mixing rounds of the splitmix64 finalizer.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream ^ 0xbf58476d1ce4e5b9ull)) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(mix(key_ + 0x9e3779b97f4a7c15ull * counter) ^ counter);
    }

    // uniform in [0,1), 53-bit mantissa
    double uniform01(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n); multiply-shift (bias < n / 2^64, negligible
    // for the small n used here)
    std::uint32_t below(std::uint64_t counter, std::uint32_t n) const {
        const unsigned __int128 wide = static_cast<unsigned __int128>(bits(counter)) * n;
        return static_cast<std::uint32_t>(wide >> 64);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

}  // namespace nefrac
