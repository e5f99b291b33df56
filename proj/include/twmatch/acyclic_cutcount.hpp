#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graph.hpp"
#include "nice_decomposition.hpp"
#include "subset_convolution.hpp"
#include "tree_decomposition.hpp"
#include "weights.hpp"

namespace twmatch {

// Randomized decision procedure for acyclic matchings (saturated vertices
// must induce a forest), by cut counting with random weight isolation.
//
// The objects counted are triples: a matching M with saturated set X, a
// marker set P inside X, and a split of X into a left and a right side where
// no induced edge crosses and every marker sits left. For one (M, P) the
// consistent splits number a power of two per unmarked component of G[X], so
// mod 2 only fully marked choices survive. Classes are keyed by |X|, induced
// edge count, |P|, and random weight; reading a class whose marker count
// equals |X| minus the edge count forces G[X] to be a forest with one marker
// per component, and a forest has at most one perfect matching, so an odd
// class certifies an acyclic matching outright. Conversely random weights
// concentrate some class on exactly one solution with probability >= 2/3,
// so repeated trials make a miss exponentially unlikely.
//
// Tables are sparse parity sets over packed keys. A bag vertex is in one of
// five states, stored as a base-5 digit per bag position:
//   0  outside X
//   1  matched, edge seen, left side      2  same but right side
//   3  matched, edge still due, left      4  same but right side

struct CutKey {
    std::uint64_t ds = 0;    // base-5 state digits over the bag
    std::uint64_t abcw = 0;  // packed |X| : edges : |P| : weight
    bool operator==(const CutKey&) const = default;
};

struct CutKeyHash {
    std::size_t operator()(const CutKey& k) const {
        std::uint64_t x = k.ds * 0x9E3779B97F4A7C15ull ^ k.abcw;
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return static_cast<std::size_t>(x);
    }
};

// membership = odd count of objects in that class
using CutTable = std::unordered_set<CutKey, CutKeyHash>;

// Inclusive caps on the packed counters. All four only ever grow on the way
// to the root, so anything past a cap can never come back into the window
// the root read looks at, and dropping it early is safe.
struct CutLimits {
    std::uint64_t amax = 0, bmax = 0, cmax = 0, wmax = 0;
};

namespace detail {

constexpr int kAShift = 52, kBShift = 40, kCShift = 28;
constexpr std::uint64_t kA1 = std::uint64_t{1} << kAShift;
constexpr std::uint64_t kB1 = std::uint64_t{1} << kBShift;
constexpr std::uint64_t kC1 = std::uint64_t{1} << kCShift;

inline std::uint64_t cut_a(std::uint64_t abcw) { return abcw >> kAShift; }
inline std::uint64_t cut_b(std::uint64_t abcw) { return abcw >> kBShift & 0xFFF; }
inline std::uint64_t cut_c(std::uint64_t abcw) { return abcw >> kCShift & 0xFFF; }
inline std::uint64_t cut_w(std::uint64_t abcw) { return abcw & 0xFFFFFFF; }

inline std::uint64_t pow5(int k) {
    std::uint64_t r = 1;
    while (k-- > 0) r *= 5;
    return r;
}

inline void cut_flip(CutTable& t, const CutKey& k) {
    auto [it, inserted] = t.insert(k);
    if (!inserted) t.erase(it);
}

inline void cut_push(CutTable& t, const CutLimits& lim, std::uint64_t ds,
                     std::uint64_t abcw) {
    if (cut_a(abcw) > lim.amax || cut_b(abcw) > lim.bmax ||
        cut_c(abcw) > lim.cmax || cut_w(abcw) > lim.wmax)
        return;
    cut_flip(t, CutKey{ds, abcw});
}

inline CutTable cut_introduce(const CutTable& child, const std::vector<int>& bag,
                              int v, const WeightAssignment& wa,
                              const CutLimits& lim) {
    const std::uint64_t below = pow5(bag_position(bag, v));
    const std::uint64_t wmem = static_cast<std::uint64_t>(wa.w_member[v]);
    CutTable out;
    out.reserve(child.size() * 2);
    for (const CutKey& k : child) {
        // make room for the new digit; the vertex enters either outside X or
        // matched-with-edge-due on one of the two sides
        const std::uint64_t ds = k.ds % below + k.ds / below * (below * 5);
        cut_flip(out, CutKey{ds, k.abcw});
        const std::uint64_t grown = k.abcw + kA1 + wmem;
        cut_push(out, lim, ds + 3 * below, grown);
        cut_push(out, lim, ds + 4 * below, grown);
    }
    return out;
}

inline CutTable cut_introduce_edge(const CutTable& child, const std::vector<int>& bag,
                                   int u, int v, const CutLimits& lim) {
    const std::uint64_t pu = pow5(bag_position(bag, u));
    const std::uint64_t pv = pow5(bag_position(bag, v));
    CutTable out;
    out.reserve(child.size());
    for (const CutKey& k : child) {
        const int su = static_cast<int>(k.ds / pu % 5);
        const int sv = static_cast<int>(k.ds / pv % 5);
        if (su == 0 || sv == 0) {
            // at most one endpoint saturated: nothing to count or to cut
            cut_flip(out, k);
            continue;
        }
        if (((su - 1) ^ (sv - 1)) & 1) continue;  // edge would cross the split
        cut_push(out, lim, k.ds, k.abcw + kB1);
        if (su >= 3 && sv >= 3)
            // take the edge into M: both endpoints flip from due to seen
            cut_push(out, lim, k.ds - 2 * pu - 2 * pv, k.abcw + kB1);
    }
    return out;
}

inline CutTable cut_forget(const CutTable& child, const std::vector<int>& child_bag,
                           int u, const WeightAssignment& wa, const CutLimits& lim) {
    const std::uint64_t below = pow5(bag_position(child_bag, u));
    const std::uint64_t wmark = static_cast<std::uint64_t>(wa.w_marker[u]);
    CutTable out;
    out.reserve(child.size());
    for (const CutKey& k : child) {
        const int su = static_cast<int>(k.ds / below % 5);
        if (su >= 3) continue;  // its matching edge can never come now
        const std::uint64_t ds = k.ds % below + k.ds / (below * 5) * below;
        cut_flip(out, CutKey{ds, k.abcw});
        // a left-side vertex may additionally leave as a marker
        if (su == 1) cut_push(out, lim, ds, k.abcw + kC1 + wmark);
    }
    return out;
}

inline CutTable cut_join(const CutTable& left, const CutTable& right,
                         const std::vector<int>& bag, const WeightAssignment& wa,
                         const CutLimits& lim, JoinMode mode) {
    const int p = static_cast<int>(bag.size());
    std::vector<std::uint64_t> pw(p + 1, 1);
    for (int i = 0; i < p; ++i) pw[i + 1] = pw[i] * 5;

    // Two keys combine when the per-vertex membership and side agree, and no
    // vertex has its matching edge counted in both branches. The signature
    // keeps membership and side; within it, "edge seen" sets must be disjoint
    // and their union becomes the seen set of the combined key.
    struct Item {
        std::uint64_t abcw = 0, seen_pw = 0;
        std::uint32_t seen = 0;  // bag positions with state 1 or 2
    };
    auto bucket = [&](const CutTable& t) {
        std::unordered_map<std::uint64_t, std::vector<Item>> out;
        for (const CutKey& k : t) {
            std::uint64_t sigma = 0, seen_pw = 0, rest = k.ds;
            std::uint32_t seen = 0;
            for (int pos = 0; pos < p; ++pos, rest /= 5) {
                const int dig = static_cast<int>(rest % 5);
                if (dig == 0) continue;
                sigma += static_cast<std::uint64_t>(dig <= 2 ? dig : dig - 2) * pw[pos];
                if (dig <= 2) {
                    seen |= std::uint32_t{1} << pos;
                    seen_pw += 2 * pw[pos];
                }
            }
            out[sigma].push_back(Item{k.abcw, seen_pw, seen});
        }
        return out;
    };
    const auto bl = bucket(left);
    const auto br = bucket(right);

    CutTable out;
    for (const auto& [sigma, litems] : bl) {
        const auto rit = br.find(sigma);
        if (rit == br.end()) continue;
        const auto& ritems = rit->second;

        std::vector<int> upos;
        std::uint64_t both_due = sigma, offset = 0, rest = sigma;
        for (int pos = 0; pos < p; ++pos, rest /= 5) {
            if (rest % 5 == 0) continue;
            upos.push_back(pos);
            both_due += 2 * pw[pos];
            // shared saturated vertices were weighed in by both branches
            offset += kA1 + static_cast<std::uint64_t>(wa.w_member[bag[pos]]);
        }
        const int u = static_cast<int>(upos.size());

        bool use_conv = false;
        if (mode == JoinMode::Convolution && u <= 25) {
            // grouping by the numeric part lets one parity transform serve
            // many key pairs, but only pays off when masks per group
            // outnumber the 2^u transform work
            std::unordered_set<std::uint64_t> ga, gb;
            for (const Item& it : litems) ga.insert(it.abcw);
            for (const Item& it : ritems) gb.insert(it.abcw);
            const double conv_cost = static_cast<double>(ga.size()) *
                                     static_cast<double>(gb.size()) * (u + 2) *
                                     static_cast<double>(std::uint64_t{1} << u);
            const double pair_cost = static_cast<double>(litems.size()) *
                                     static_cast<double>(ritems.size());
            use_conv = conv_cost < pair_cost;
        }

        if (!use_conv) {
            for (const Item& a : litems)
                for (const Item& b : ritems) {
                    if (a.seen & b.seen) continue;
                    cut_push(out, lim, both_due - a.seen_pw - b.seen_pw,
                             a.abcw + b.abcw - offset);
                }
            continue;
        }

        auto group = [&](const std::vector<Item>& items) {
            std::unordered_map<std::uint64_t, SetFunction> gs;
            for (const Item& it : items) {
                auto [slot, fresh] = gs.try_emplace(it.abcw, SetFunction::ring2(u));
                (void)fresh;
                std::uint32_t cmask = 0;
                for (int j = 0; j < u; ++j)
                    if (it.seen >> upos[j] & 1) cmask |= std::uint32_t{1} << j;
                slot->second.vals[cmask] ^= 1;
            }
            return gs;
        };
        const auto gl = group(litems);
        const auto gr = group(ritems);
        std::vector<std::uint64_t> bit_pw(u);
        for (int j = 0; j < u; ++j) bit_pw[j] = 2 * pw[upos[j]];
        for (const auto& [aw, fa] : gl)
            for (const auto& [bw, fb] : gr) {
                const SetFunction h = convolve(fa, fb);
                const std::uint64_t abcw = aw + bw - offset;
                for (std::size_t mask = 0; mask < h.vals.size(); ++mask) {
                    if (!h.vals[mask]) continue;
                    std::uint64_t sub = 0;
                    for (std::uint32_t mm = static_cast<std::uint32_t>(mask); mm;
                         mm &= mm - 1)
                        sub += bit_pw[__builtin_ctz(mm)];
                    cut_push(out, lim, both_due - sub, abcw);
                }
            }
    }
    return out;
}

}  // namespace detail

// Runs one weighted counting sweep and returns the root's parity classes.
// Exposed mainly so tests can hold the whole table against an exhaustive
// enumeration; the decision procedure below is the intended entry point.
inline CutTable acyclic_root_parities(const Graph& g, const NiceDecomposition& nd,
                                      const WeightAssignment& wa,
                                      const CutLimits& lim,
                                      JoinMode mode = JoinMode::Naive) {
    if (wa.n != g.n)
        throw std::invalid_argument("acyclic_root_parities: weight size mismatch");
    if (nd.width() + 1 > 25)
        throw std::invalid_argument("acyclic_root_parities: bag too wide");
    if (lim.amax > 0xFFF || lim.bmax > 0xFFF || lim.cmax > 0xFFF || lim.wmax > 0xFFFFFFF)
        throw std::invalid_argument("acyclic_root_parities: limits exceed packed fields");
    assert(validate_nice(g, nd).empty());
    std::vector<CutTable> tab(nd.nodes.size());
    for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
        const NiceNode& node = nd.nodes[i];
        switch (node.kind) {
            case NodeKind::Leaf:
                tab[i] = CutTable{CutKey{}};
                break;
            case NodeKind::IntroduceVertex:
                tab[i] = detail::cut_introduce(tab[node.child], node.bag, node.u, wa, lim);
                tab[node.child] = CutTable{};
                break;
            case NodeKind::IntroduceEdge:
                tab[i] = detail::cut_introduce_edge(tab[node.child], node.bag, node.u,
                                                    node.v, lim);
                tab[node.child] = CutTable{};
                break;
            case NodeKind::Forget:
                tab[i] = detail::cut_forget(tab[node.child], nd.nodes[node.child].bag,
                                            node.u, wa, lim);
                tab[node.child] = CutTable{};
                break;
            case NodeKind::Join:
                tab[i] = detail::cut_join(tab[node.child], tab[node.child2], node.bag,
                                          wa, lim, mode);
                tab[node.child] = CutTable{};
                tab[node.child2] = CutTable{};
                break;
        }
    }
    return std::move(tab[nd.root()]);
}

// Caps wide enough to keep every class of the graph; for full-table tests.
inline CutLimits loose_cut_limits(const Graph& g) {
    CutLimits lim;
    lim.amax = static_cast<std::uint64_t>(g.n);
    lim.bmax = static_cast<std::uint64_t>(g.m());
    lim.cmax = static_cast<std::uint64_t>(g.n);
    lim.wmax = static_cast<std::uint64_t>(WeightAssignment{g.n, 0, {}, {}}.max_total());
    return lim;
}

struct AcyclicOptions {
    int trials = 7;  // miss probability <= (1/3)^trials on yes instances
    std::uint64_t seed = 1;
    JoinMode join = JoinMode::Naive;
};

struct AcyclicResult {
    bool yes = false;
    int witness_trial = -1;  // trial whose weights produced an odd class
};

// Decides whether g has an acyclic matching with at least ell edges. A yes
// is always sound; a no is wrong with probability at most (1/3)^trials.
inline AcyclicResult decide_acyclic(const Graph& g, const NiceDecomposition& nd,
                                    int ell, const AcyclicOptions& opts = {}) {
    assert(ell >= 0 && opts.trials >= 1);
    if (g.n > 2048)
        throw std::invalid_argument("decide_acyclic: graph too large for packed weights");
    if (ell == 0) return {true, -1};
    if (2 * ell > g.n) return {false, -1};
    const std::uint64_t target = 2 * static_cast<std::uint64_t>(ell);
    CutLimits lim;
    lim.amax = target;
    lim.bmax = std::min<std::uint64_t>(g.n - 1, target - 1);
    lim.cmax = target;
    lim.wmax = std::min<std::uint64_t>(12ull * g.n * g.n,
                                       6ull * g.n * (lim.amax + lim.cmax));
    for (int t = 0; t < opts.trials; ++t) {
        const WeightAssignment wa = sample_weights(g.n, opts.seed + static_cast<std::uint64_t>(t));
        const CutTable root = acyclic_root_parities(g, nd, wa, lim, opts.join);
        for (const CutKey& k : root)
            if (detail::cut_a(k.abcw) == target &&
                detail::cut_b(k.abcw) + detail::cut_c(k.abcw) == target)
                return {true, t};
    }
    return {false, -1};
}

// Turns a yes answer into an actual matching: shrink the vertex set while the
// decision stays yes, then read the unique perfect matching off the forest
// the survivors induce by peeling leaves. Returns nothing if any step fails,
// which can happen with the same small probability as a wrong no.
inline std::optional<Matching> extract_acyclic_certificate(const Graph& g, int ell,
                                                           const AcyclicOptions& opts = {}) {
    assert(ell >= 0);
    if (ell == 0) return Matching{};
    if (2 * ell > g.n) return std::nullopt;
    const auto accepts = [&](const Graph& h) {
        const TreeDecomposition td = min_fill_decompose(h);
        const NiceDecomposition nd = make_nice_deferred(h, td);
        return decide_acyclic(h, nd, ell, opts).yes;
    };
    if (!accepts(g)) return std::nullopt;
    std::vector<int> live(g.n);
    std::iota(live.begin(), live.end(), 0);
    for (int v = 0; v < g.n && static_cast<int>(live.size()) > 2 * ell; ++v) {
        std::vector<int> test;
        for (int x : live)
            if (x != v) test.push_back(x);
        if (static_cast<int>(test.size()) < 2 * ell || test.size() == live.size()) continue;
        auto [sub, names] = induced_subgraph(g, test);
        (void)names;
        if (accepts(sub)) live = std::move(test);
    }
    if (static_cast<int>(live.size()) != 2 * ell) return std::nullopt;
    auto [sub, names] = induced_subgraph(g, live);
    std::vector<int> all(sub.n);
    std::iota(all.begin(), all.end(), 0);
    if (!is_forest(sub, all)) return std::nullopt;
    std::vector<int> deg(sub.n);
    std::vector<char> gone(sub.n, 0);
    std::vector<int> leaves;
    for (int i = 0; i < sub.n; ++i) {
        deg[i] = static_cast<int>(sub.adj[i].size());
        if (deg[i] <= 1) leaves.push_back(i);
    }
    Matching m;
    while (!leaves.empty()) {
        const int a = leaves.back();
        leaves.pop_back();
        if (gone[a]) continue;
        int b = -1;
        for (int x : sub.adj[a])
            if (!gone[x]) {
                b = x;
                break;
            }
        if (b < 0) return std::nullopt;  // stranded vertex: no perfect matching
        m.push_back({std::min(names[a], names[b]), std::max(names[a], names[b])});
        gone[a] = gone[b] = 1;
        for (int x : sub.adj[b]) {
            if (gone[x]) continue;
            if (--deg[x] <= 1) leaves.push_back(x);
        }
    }
    for (int i = 0; i < sub.n; ++i)
        if (!gone[i]) return std::nullopt;
    std::sort(m.begin(), m.end());
    const MatchingReport rep = classify_matching(g, m);
    if (!rep.is_matching || !rep.is_acyclic || static_cast<int>(m.size()) != ell)
        return std::nullopt;
    return m;
}

}  // namespace twmatch
