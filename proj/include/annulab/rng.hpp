#pragma once

#include <cstdint>
#include <random>

namespace annulab {

// Seeded generator with a platform-independent uniform(): all Monte Carlo in
// the library goes through this so identical seeds give identical bytes on
// any implementation (std distributions are not pinned by the standard).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double uniform() { return (gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) { return gen_() % n; }

    // Deterministic substream for worker/task `k`: splitmix64 round on the
    // base seed so forks never consume state from the parent stream.
    Rng fork(std::uint64_t k) const {
        std::uint64_t z = seed_ + (k + 1) * 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace annulab
