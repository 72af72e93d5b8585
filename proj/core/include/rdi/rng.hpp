#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace rdi {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Independent stream keyed by (seed, stream index); parallel and serial
// consumers of the same key see the same values.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701ULL)));
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// Uniform point on the k-simplex (Dirichlet(1)).
inline std::vector<double> dirichlet_uniform(std::mt19937_64& rng, int k) {
    std::vector<double> v(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& x : v) {
        double u = uniform01(rng);
        if (u <= 0.0) u = 0x1.0p-53;
        x = -std::log(u);
        total += x;
    }
    for (auto& x : v) x /= total;
    return v;
}

// Sample an index from an unnormalized weight vector.
inline int sample_index(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

// Compensated accumulator; exact entropy sums rely on it.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace rdi
