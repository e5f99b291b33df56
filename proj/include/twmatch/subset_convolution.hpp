#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twmatch {

// Absorbing "no valid assignment" value for the max-sum semiring. Deep enough
// below zero that adding real values to it can never climb back into the
// range of genuine results, and safely away from signed overflow.
inline constexpr std::int64_t NEG_INF = std::numeric_limits<std::int64_t>::min() / 4;

enum class Semiring { MaxSum, Ring2 };

// How a solver combines the two child tables of a join node: pair compatible
// entries directly, or route each fixed zero-set through a subset convolution.
enum class JoinMode { Naive, Convolution };

// A function from subsets of {0..universe-1} to semiring values, stored
// densely by bitmask. Ring2 values are 0/1; MaxSum values are integers or
// NEG_INF.
struct SetFunction {
    Semiring ring = Semiring::MaxSum;
    int universe = 0;
    std::vector<std::int64_t> vals;

    static SetFunction max_sum(int universe) {
        check_universe(universe);
        SetFunction f;
        f.ring = Semiring::MaxSum;
        f.universe = universe;
        f.vals.assign(std::size_t{1} << universe, NEG_INF);
        return f;
    }

    static SetFunction ring2(int universe) {
        check_universe(universe);
        SetFunction f;
        f.ring = Semiring::Ring2;
        f.universe = universe;
        f.vals.assign(std::size_t{1} << universe, 0);
        return f;
    }

    // identity for the respective convolution: concentrated on the empty set
    static SetFunction identity(Semiring ring, int universe) {
        SetFunction f = ring == Semiring::MaxSum ? max_sum(universe) : ring2(universe);
        f.vals[0] = ring == Semiring::MaxSum ? 0 : 1;
        return f;
    }

    static void check_universe(int universe) {
        if (universe < 0 || universe > 25)
            throw std::invalid_argument("SetFunction: universe size must be in [0, 25]");
    }
};

namespace detail {

inline void check_pair(const SetFunction& f, const SetFunction& g) {
    if (f.ring != g.ring) throw std::invalid_argument("convolve: semiring mismatch");
    if (f.universe != g.universe) throw std::invalid_argument("convolve: universe mismatch");
}

inline void check_ring2_values(const SetFunction& f) {
    for (auto v : f.vals)
        if (v != 0 && v != 1) throw std::invalid_argument("convolve: ring2 value not 0/1");
}

// carryless 64x64 multiply, enough for rank polynomials of degree <= 25+25
inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (a) {
        r ^= b << __builtin_ctzll(a);
        a &= a - 1;
    }
    return r;
}

}  // namespace detail

// Reference implementation, quadratic over subset pairs. Kept simple on
// purpose: the fast versions are tested against it.
inline SetFunction naive_convolve(const SetFunction& f, const SetFunction& g) {
    detail::check_pair(f, g);
    if (f.universe > 16) throw std::invalid_argument("naive_convolve: universe > 16");
    const std::size_t full = std::size_t{1} << f.universe;
    SetFunction h = f;
    if (f.ring == Semiring::Ring2) {
        detail::check_ring2_values(f);
        detail::check_ring2_values(g);
        for (std::size_t y = 0; y < full; ++y) {
            std::int64_t acc = 0;
            // iterate s over submasks of y, including both ends
            std::size_t s = y;
            while (true) {
                acc ^= f.vals[s] & g.vals[y ^ s];
                if (s == 0) break;
                s = (s - 1) & y;
            }
            h.vals[y] = acc;
        }
    } else {
        for (std::size_t y = 0; y < full; ++y) {
            std::int64_t best = NEG_INF;
            std::size_t s = y;
            while (true) {
                std::int64_t a = f.vals[s], b = g.vals[y ^ s];
                if (a != NEG_INF && b != NEG_INF && a + b > best) best = a + b;
                if (s == 0) break;
                s = (s - 1) & y;
            }
            h.vals[y] = best;
        }
    }
    return h;
}

// Fast disjoint-union convolution mod 2. Rank polynomials live in single
// 64-bit words (bit k of word[m] is the parity at rank k), the zeta and the
// inverse transform are the same xor butterfly, and the pointwise step is a
// carryless multiply. Runs in O(2^n * n) word operations.
inline SetFunction convolve_ring2(const SetFunction& f, const SetFunction& g) {
    detail::check_pair(f, g);
    if (f.ring != Semiring::Ring2) throw std::invalid_argument("convolve_ring2: wrong semiring");
    detail::check_ring2_values(f);
    detail::check_ring2_values(g);
    const int n = f.universe;
    const std::size_t full = std::size_t{1} << n;
    std::vector<std::uint64_t> a(full), b(full);
    for (std::size_t m = 0; m < full; ++m) {
        const std::uint64_t bit = std::uint64_t{1} << __builtin_popcountll(m);
        a[m] = f.vals[m] ? bit : 0;
        b[m] = g.vals[m] ? bit : 0;
    }
    for (int d = 0; d < n; ++d) {
        const std::size_t step = std::size_t{1} << d;
        for (std::size_t m = 0; m < full; ++m)
            if (m & step) {
                a[m] ^= a[m ^ step];
                b[m] ^= b[m ^ step];
            }
    }
    for (std::size_t m = 0; m < full; ++m) a[m] = detail::clmul(a[m], b[m]);
    for (int d = 0; d < n; ++d) {
        const std::size_t step = std::size_t{1} << d;
        for (std::size_t m = 0; m < full; ++m)
            if (m & step) a[m] ^= a[m ^ step];
    }
    SetFunction h = SetFunction::ring2(n);
    for (std::size_t m = 0; m < full; ++m)
        h.vals[m] = (a[m] >> __builtin_popcountll(m)) & 1;
    return h;
}

// Fast disjoint-union convolution over (max, +). Values are embedded as
// polynomial exponents (the no-carry form of a base-beta integer embedding),
// normalized per call so the polynomial degree is the value spread, not the
// declared bound. Coefficients are pair counts taken mod 2^64; the true
// counts are below 2^universe, so a nonzero count can never alias to zero
// and the top nonzero exponent is exact.
inline SetFunction convolve_maxsum(const SetFunction& f, const SetFunction& g) {
    detail::check_pair(f, g);
    if (f.ring != Semiring::MaxSum) throw std::invalid_argument("convolve_maxsum: wrong semiring");
    const int n = f.universe;
    if (n > 20) throw std::invalid_argument("convolve_maxsum: universe > 20");
    const std::size_t full = std::size_t{1} << n;

    std::int64_t fmin = 0, fmax = 0, gmin = 0, gmax = 0;
    bool f_any = false, g_any = false;
    for (auto v : f.vals) {
        if (v == NEG_INF) continue;
        if (!f_any || v < fmin) fmin = v;
        if (!f_any || v > fmax) fmax = v;
        f_any = true;
    }
    for (auto v : g.vals) {
        if (v == NEG_INF) continue;
        if (!g_any || v < gmin) gmin = v;
        if (!g_any || v > gmax) gmax = v;
        g_any = true;
    }
    SetFunction h = SetFunction::max_sum(n);
    if (!f_any || !g_any) return h;  // one side is empty, so is the product

    const int df = static_cast<int>(fmax - fmin);
    const int dg = static_cast<int>(gmax - gmin);
    const int dd = df + dg;
    if (static_cast<double>(n + 1) * static_cast<double>(full) * (dd + 2) > 2e8)
        throw std::invalid_argument("convolve_maxsum: value spread too large for this universe");
    // ranked zeta tables: flat [rank][mask][coefficient]
    auto idx = [&](int rank, std::size_t m, int c, int width) {
        return (static_cast<std::size_t>(rank) * full + m) * (width + 1) + c;
    };
    std::vector<std::uint64_t> zf(static_cast<std::size_t>(n + 1) * full * (df + 1), 0);
    std::vector<std::uint64_t> zg(static_cast<std::size_t>(n + 1) * full * (dg + 1), 0);
    for (std::size_t m = 0; m < full; ++m) {
        const int pc = __builtin_popcountll(m);
        if (f.vals[m] != NEG_INF) zf[idx(pc, m, static_cast<int>(f.vals[m] - fmin), df)] = 1;
        if (g.vals[m] != NEG_INF) zg[idx(pc, m, static_cast<int>(g.vals[m] - gmin), dg)] = 1;
    }
    for (int k = 0; k <= n; ++k)
        for (int d = 0; d < n; ++d) {
            const std::size_t step = std::size_t{1} << d;
            for (std::size_t m = 0; m < full; ++m)
                if (m & step) {
                    std::uint64_t* dst = &zf[idx(k, m, 0, df)];
                    const std::uint64_t* src = &zf[idx(k, m ^ step, 0, df)];
                    for (int c = 0; c <= df; ++c) dst[c] += src[c];
                    dst = &zg[idx(k, m, 0, dg)];
                    src = &zg[idx(k, m ^ step, 0, dg)];
                    for (int c = 0; c <= dg; ++c) dst[c] += src[c];
                }
        }

    std::vector<std::uint64_t> level(full * (dd + 1));
    for (int k = 0; k <= n; ++k) {
        std::fill(level.begin(), level.end(), 0);
        for (std::size_t m = 0; m < full; ++m) {
            const int pc = __builtin_popcountll(m);
            std::uint64_t* out = &level[m * (dd + 1)];
            // ranks above the popcount are identically zero, skip them
            for (int i = std::max(0, k - pc); i <= std::min(k, pc); ++i) {
                const std::uint64_t* pa = &zf[idx(i, m, 0, df)];
                const std::uint64_t* pb = &zg[idx(k - i, m, 0, dg)];
                for (int ca = 0; ca <= df; ++ca) {
                    const std::uint64_t va = pa[ca];
                    if (!va) continue;
                    for (int cb = 0; cb <= dg; ++cb) out[ca + cb] += va * pb[cb];
                }
            }
        }
        for (int d = 0; d < n; ++d) {
            const std::size_t step = std::size_t{1} << d;
            for (std::size_t m = 0; m < full; ++m)
                if (m & step) {
                    std::uint64_t* dst = &level[m * (dd + 1)];
                    const std::uint64_t* src = &level[(m ^ step) * (dd + 1)];
                    for (int c = 0; c <= dd; ++c) dst[c] -= src[c];
                }
        }
        for (std::size_t m = 0; m < full; ++m) {
            if (__builtin_popcountll(m) != k) continue;
            const std::uint64_t* coeff = &level[m * (dd + 1)];
            for (int c = dd; c >= 0; --c)
                if (coeff[c]) {
                    h.vals[m] = c + fmin + gmin;
                    break;
                }
        }
    }
    return h;
}

inline SetFunction convolve(const SetFunction& f, const SetFunction& g) {
    detail::check_pair(f, g);
    return f.ring == Semiring::Ring2 ? convolve_ring2(f, g) : convolve_maxsum(f, g);
}

}  // namespace twmatch
