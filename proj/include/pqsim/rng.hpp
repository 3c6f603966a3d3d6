#pragma once

#include <cstdint>
#include <random>

namespace pqsim {

// SplitMix64 step; also the per-trial seed derivation primitive.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splittable trial seeding: seed_t = splitmix64(master + (t+1)*golden).
// Trials are independent streams regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// mt19937_64 with a manual 53-bit uniform. std::uniform_real_distribution is
// implementation-defined, which would break byte-identical reports across
// standard libraries; the shift construction below is fully specified.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace pqsim
