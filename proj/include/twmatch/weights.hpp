#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace twmatch {

// One weight per (vertex, flavor) pair, the flavors being membership in the
// saturated set and markedness. Drawn uniformly from {1..6n} so a random draw
// isolates a minimum-weight solution with probability at least 2/3.
struct WeightAssignment {
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<int> w_member;
    std::vector<int> w_marker;

    // every weight is at most 6n and a solution touches at most 2n of them
    int max_total() const { return 12 * n * n; }
};

inline WeightAssignment sample_weights(int n, std::uint64_t seed) {
    WeightAssignment wa;
    wa.n = n;
    wa.seed = seed;
    if (n == 0) return wa;
    std::mt19937_64 rng(seed);
    // modulo draw instead of uniform_int_distribution keeps the stream
    // identical across standard libraries; the bias at 64 bits is negligible
    const std::uint64_t range = 6ull * static_cast<std::uint64_t>(n);
    wa.w_member.resize(n);
    wa.w_marker.resize(n);
    for (int v = 0; v < n; ++v) wa.w_member[v] = static_cast<int>(rng() % range) + 1;
    for (int v = 0; v < n; ++v) wa.w_marker[v] = static_cast<int>(rng() % range) + 1;
    return wa;
}

}  // namespace twmatch
