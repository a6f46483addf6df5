#ifndef STARKRES_RNG_HPP
#define STARKRES_RNG_HPP

#include <cstdint>

namespace starkres {

// Counter-based generator: every variate is a pure function of
// (seed, counter, dim), so sampling parallelizes over counters with results
// independent of worker scheduling.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t bits(std::uint64_t counter, std::uint64_t dim = 0) const {
        std::uint64_t z = seed_;
        z = mix(z + 0x9E3779B97F4A7C15ull * (counter + 1));
        z = mix(z ^ (0xBF58476D1CE4E5B9ull * (dim + 1)));
        return mix(z);
    }

    // uniform in [0, 1)
    double uniform(std::uint64_t counter, std::uint64_t dim = 0) const {
        return static_cast<double>(bits(counter, dim) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, std::uint64_t dim, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter, dim);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
};

}  // namespace starkres

#endif
