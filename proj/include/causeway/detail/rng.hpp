#pragma once

#include <cstdint>

#include "causeway/detail/special_functions.hpp"

namespace causeway::detail {

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Counter-based uniform stream: value i of stream `seed` is a pure function
// of (seed, i), so any draw can be produced out of order and the sequence is
// identical on every platform.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix64(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ull);
    }

    // uniform in the open interval (0,1); offset keeps 0 out so the
    // normal quantile stays finite
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via inverse CDF
    double normal(std::uint64_t counter) const { return normal_quantile(uniform(counter)); }

private:
    std::uint64_t seed_;
};

// Small stateful convenience wrapper over the same stream.
class SequentialRng {
public:
    explicit SequentialRng(std::uint64_t seed) : rng_(seed) {}

    std::uint64_t next() { return rng_.bits(counter_++); }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

    double uniform() { return rng_.uniform(counter_++); }

    // uniform in [lo, hi]
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool coin() { return (next() & 1ull) != 0; }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

}  // namespace causeway::detail
