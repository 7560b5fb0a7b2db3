#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace ghd {

// splitmix64 step; used to whiten user seeds and derive per-replicate streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic sub-stream seed for (seed, index [, index2]).  Replicate k of
// an experiment always sees the same stream regardless of which worker runs
// it, which is what makes result files byte-identical under any --threads.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t index2 = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= index + 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    s ^= index2 + 0xd1b54a32d192ed03ULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b + 0x2545f4914f6cdd1dULL * c);
}

// All randomness goes through mt19937_64 plus the explicit draw helpers
// below, so sequences are pinned by the seed alone (no reliance on
// implementation-defined std::distribution behaviour).
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    return Rng(splitmix64(s));
}

// Uniform double in [0, 1) with 53 random bits.
inline double next_double(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, bound) via rejection.
inline std::uint64_t next_below(Rng& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

// Fisher-Yates shuffle with pinned draw order.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(next_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

// k distinct values from [0, n), order not meaningful (partial Fisher-Yates).
inline std::vector<int> sample_without_replacement(int n, int k, Rng& rng) {
    if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: need 0 <= k <= n");
    std::vector<int> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < k; ++i) {
        int j = i + static_cast<int>(next_below(rng, static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

// Uniform random permutation of 0..n-1.
inline std::vector<int> random_permutation(int n, Rng& rng) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    shuffle(p, rng);
    return p;
}

} // namespace ghd
