#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "twmatch/graph.hpp"
#include "twmatch/weights.hpp"

// Brute-force reference implementations. Everything here is exponential and
// deliberately written along a different route than the solvers, so that
// agreement between the two is meaningful evidence.

namespace twmatch {

struct OracleReport {
    int mu = 0;
    int mu_induced = 0;
    int mu_acyclic = 0;
    // c -> largest matching whose endpoints induce >= c components, -1 if
    // no matching does (the empty matching induces zero components)
    std::map<int, int> mu_discon;
};

namespace detail {

inline int cc_of_mask(const std::vector<std::uint32_t>& adj, std::uint32_t x) {
    int comps = 0;
    std::uint32_t rem = x;
    while (rem) {
        ++comps;
        std::uint32_t comp = rem & (~rem + 1);
        std::uint32_t frontier = comp;
        while (frontier) {
            std::uint32_t nxt = 0;
            std::uint32_t f = frontier;
            while (f) {
                int v = __builtin_ctz(f);
                f &= f - 1;
                nxt |= adj[v] & x;
            }
            frontier = nxt & ~comp;
            comp |= frontier;
        }
        rem &= ~comp;
    }
    return comps;
}

inline int edges_in_mask(const std::vector<std::uint32_t>& adj, std::uint32_t x) {
    int twice = 0;
    std::uint32_t f = x;
    while (f) {
        int v = __builtin_ctz(f);
        f &= f - 1;
        twice += __builtin_popcount(adj[v] & x);
    }
    return twice / 2;
}

}  // namespace detail

// Enumerates every matching of g (each exactly once, by increasing smallest
// free edge index) and tracks the best size per flavor. Exponential in the
// number of matchings; refuses n > 16.
inline OracleReport brute_matching_numbers(const Graph& g, int c_max = 3) {
    if (g.n > 16) throw std::invalid_argument("brute_matching_numbers: n > 16");
    if (c_max < 1) throw std::invalid_argument("brute_matching_numbers: c_max < 1");
    std::vector<std::uint32_t> adj(g.n, 0);
    for (auto [u, v] : g.edges) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    OracleReport rep;
    for (int c = 1; c <= c_max; ++c) rep.mu_discon[c] = -1;
    const int m = g.m();

    // own stack, the recursion depth equals the matching size anyway
    struct Frame { int next_edge; std::uint32_t used; int size; };
    std::vector<Frame> stack;
    stack.push_back({0, 0u, 0});
    while (!stack.empty()) {
        Frame fr = stack.back();
        stack.pop_back();
        if (fr.size > 0) {
            int ec = detail::edges_in_mask(adj, fr.used);
            int cc = detail::cc_of_mask(adj, fr.used);
            if (fr.size > rep.mu) rep.mu = fr.size;
            if (ec == fr.size && fr.size > rep.mu_induced) rep.mu_induced = fr.size;
            if (cc == 2 * fr.size - ec && fr.size > rep.mu_acyclic) rep.mu_acyclic = fr.size;
            for (int c = 1; c <= c_max; ++c)
                if (cc >= c && fr.size > rep.mu_discon[c]) rep.mu_discon[c] = fr.size;
        }
        for (int i = fr.next_edge; i < m; ++i) {
            auto [u, v] = g.edges[i];
            if (fr.used & ((1u << u) | (1u << v))) continue;
            stack.push_back({i + 1, fr.used | (1u << u) | (1u << v), fr.size + 1});
        }
    }
    return rep;
}

// Sets over the grid [k] x [k] with at most one element per row. A solution
// picks one column per row; it hits a set if they share an element.
using RowSet = std::vector<std::pair<int, int>>;

namespace detail {

inline void check_row_sets(int k, const std::vector<RowSet>& sets) {
    if (k < 1 || k > 6) throw std::invalid_argument("row-constrained search: need 1 <= k <= 6");
    for (const auto& s : sets) {
        if (s.empty()) throw std::invalid_argument("row-constrained search: empty set");
        std::uint32_t rows = 0;
        for (auto [i, j] : s) {
            if (i < 1 || i > k || j < 1 || j > k)
                throw std::invalid_argument("row-constrained search: element out of range");
            if (rows & (1u << i))
                throw std::invalid_argument("row-constrained search: two elements in one row");
            rows |= 1u << i;
        }
    }
}

}  // namespace detail

// Tries all k^k selections; returns the first one hitting every set,
// as f[i-1] = column chosen for row i.
inline std::optional<std::vector<int>> hitting_set_solution(int k, const std::vector<RowSet>& sets) {
    detail::check_row_sets(k, sets);
    std::vector<int> f(k, 1);
    while (true) {
        bool all_hit = true;
        for (const auto& s : sets) {
            bool hit = false;
            for (auto [i, j] : s)
                if (f[i - 1] == j) { hit = true; break; }
            if (!hit) { all_hit = false; break; }
        }
        if (all_hit) return f;
        int pos = 0;
        while (pos < k && f[pos] == k) f[pos++] = 1;
        if (pos == k) return std::nullopt;
        ++f[pos];
    }
}

inline bool brute_hitting_set(int k, const std::vector<RowSet>& sets) {
    return hitting_set_solution(k, sets).has_value();
}

// Counts of the three families behind the counting solver, for one profile
// (A, B, C, W): candidate pairs, the forest-and-fully-marked subset of them,
// and candidate-with-consistent-cut triples.
struct CutClassCounts {
    long long candidates = 0;
    long long marked_forests = 0;
    long long cut_pairs = 0;
};

// key = {A, B, C, W}: |X|, edges of G[X], |P|, total weight
using CutClassMap = std::map<std::array<int, 4>, CutClassCounts>;

// Exhaustive enumeration over all (X, P, cut) triples; 5^n work, so n <= 8.
// X must induce a subgraph with a perfect matching, P is any marker set
// inside X, and a cut splits X with no crossing edge and all markers left.
inline CutClassMap enumerate_cut_classes(const Graph& g, const WeightAssignment& wa) {
    if (g.n > 8) throw std::invalid_argument("enumerate_cut_classes: n > 8");
    if (wa.n != g.n) throw std::invalid_argument("enumerate_cut_classes: weight size mismatch");
    const int n = g.n;
    std::vector<std::uint32_t> adj(n, 0);
    for (auto [u, v] : g.edges) {
        adj[u] |= 1u << v;
        adj[v] |= 1u << u;
    }
    // memoized perfect-matching test per subset
    std::vector<signed char> pm(std::size_t{1} << n, -1);
    pm[0] = 1;
    auto has_pm = [&](auto&& self, std::uint32_t x) -> bool {
        signed char& memo = pm[x];
        if (memo >= 0) return memo != 0;
        int v = __builtin_ctz(x);
        std::uint32_t cand = adj[v] & x;
        bool ok = false;
        while (cand && !ok) {
            int u = __builtin_ctz(cand);
            cand &= cand - 1;
            ok = self(self, x & ~((1u << v) | (1u << u)));
        }
        memo = ok ? 1 : 0;
        return ok;
    };

    CutClassMap out;
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
        if (!has_pm(has_pm, x)) continue;
        const int a = __builtin_popcount(x);
        const int b = detail::edges_in_mask(adj, x);
        // component masks of G[X], for the marker coverage check
        std::vector<std::uint32_t> comps;
        {
            std::uint32_t rem = x;
            while (rem) {
                std::uint32_t comp = rem & (~rem + 1);
                std::uint32_t frontier = comp;
                while (frontier) {
                    std::uint32_t nxt = 0, f = frontier;
                    while (f) {
                        int v = __builtin_ctz(f);
                        f &= f - 1;
                        nxt |= adj[v] & x;
                    }
                    frontier = nxt & ~comp;
                    comp |= frontier;
                }
                comps.push_back(comp);
                rem &= ~comp;
            }
        }
        const bool forest = static_cast<int>(comps.size()) == a - b;
        int wx = 0;
        for (std::uint32_t f = x; f;) {
            int v = __builtin_ctz(f);
            f &= f - 1;
            wx += wa.w_member[v];
        }
        // all P subseteq X, including the empty one
        std::uint32_t p = 0;
        while (true) {
            int wp = 0;
            for (std::uint32_t f = p; f;) {
                int v = __builtin_ctz(f);
                f &= f - 1;
                wp += wa.w_marker[v];
            }
            auto& slot = out[{a, b, __builtin_popcount(p), wx + wp}];
            ++slot.candidates;
            if (forest) {
                bool covered = true;
                for (auto comp : comps)
                    if (!(comp & p)) { covered = false; break; }
                if (covered) ++slot.marked_forests;
            }
            // left sides: P plus any subset of X \ P, kept when no edge crosses
            const std::uint32_t free = x & ~p;
            std::uint32_t extra = 0;
            while (true) {
                const std::uint32_t left = p | extra;
                const std::uint32_t right = x & ~left;
                bool consistent = true;
                for (std::uint32_t f = left; f;) {
                    int v = __builtin_ctz(f);
                    f &= f - 1;
                    if (adj[v] & right) { consistent = false; break; }
                }
                if (consistent) ++slot.cut_pairs;
                if (extra == free) break;
                extra = (extra - free) & free;
            }
            if (p == x) break;
            p = (p - x) & x;
        }
    }
    return out;
}

inline CutClassCounts enumerate_cut_parity(const Graph& g, const WeightAssignment& wa,
                                           int a, int b, int c, int w) {
    CutClassMap all = enumerate_cut_classes(g, wa);
    auto it = all.find({a, b, c, w});
    return it == all.end() ? CutClassCounts{} : it->second;
}

}  // namespace twmatch
