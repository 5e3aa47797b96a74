#pragma once

#include <cstdint>
#include <vector>

#include "btlab/mechanisms.hpp"

namespace btlab {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    long long n = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Counter-based uniform stream: value i is a pure function of (key, i), so
/// shards can draw any index range without carrying generator state.
struct CounterStream {
    std::uint64_t key;

    double operator()(std::uint64_t i) const {
        std::uint64_t z = key + (i + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

std::uint64_t derive_key(std::uint64_t seed, std::uint64_t role);

}  // namespace detail

/// Inverse-transform samples on a deterministic uniform stream.
std::vector<double> sample(const Distribution& d, long long n, std::uint64_t seed);

/// Sampling estimators for the mechanism aggregates. Each draw applies the
/// exact mechanism rule (prices from the deterministic solvers at the shared
/// price tolerance) and averages the realized gain. Estimates are
/// bit-identical for fixed (inst, n, seed), independent of thread count.
Estimate mc_fb(const Instance& inst, long long n, std::uint64_t seed, int threads = 0);
Estimate mc_sellerp(const Instance& inst, long long n, std::uint64_t seed, int threads = 0);
Estimate mc_buyerp(const Instance& inst, long long n, std::uint64_t seed, int threads = 0);
/// Mean of max_p (v-p)G(p) over sampled v: the buyer's maximum utility.
Estimate mc_bprofit(const Instance& inst, long long n, std::uint64_t seed, int threads = 0);

}  // namespace btlab
