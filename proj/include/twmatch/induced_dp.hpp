#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "graph.hpp"
#include "nice_decomposition.hpp"
#include "subset_convolution.hpp"

namespace twmatch {

// Maximum induced matching by dynamic programming over a nice decomposition
// with explicit edge nodes. Each bag vertex carries one of three colors:
//   0  free
//   1  saturated, and its matching edge has already been introduced
//   2  saturated, still waiting for its matching edge
// Table entries count saturated vertices in the processed part of the graph,
// so the root (empty bag) ends up holding twice the optimum size.

struct InducedTable {
    std::vector<int> bag;             // sorted ascending
    std::vector<std::int64_t> vals;   // 3^|bag| entries, base-3 coded by bag position
};

namespace detail {

inline std::size_t pow3(int k) {
    std::size_t r = 1;
    while (k-- > 0) r *= 3;
    return r;
}

inline int color_at(std::size_t code, std::size_t place) {
    return static_cast<int>(code / place % 3);
}

inline InducedTable induced_leaf() {
    return InducedTable{{}, {0}};
}

inline InducedTable induced_introduce(const InducedTable& child, int v) {
    InducedTable out;
    out.bag = child.bag;
    out.bag.insert(std::upper_bound(out.bag.begin(), out.bag.end(), v), v);
    const int pos = bag_position(out.bag, v);
    const std::size_t below = pow3(pos);
    out.vals.assign(child.vals.size() * 3, NEG_INF);
    for (std::size_t code = 0; code < out.vals.size(); ++code) {
        const int c = color_at(code, below);
        // Color 1 is impossible here: v has no introduced edges yet.
        if (c == 1) continue;
        const std::size_t src = code % below + code / (below * 3) * below;
        const std::int64_t base = child.vals[src];
        if (base == NEG_INF) continue;
        out.vals[code] = base + (c == 2 ? 1 : 0);
    }
    return out;
}

inline InducedTable induced_introduce_edge(const InducedTable& child, int u, int v) {
    InducedTable out;
    out.bag = child.bag;
    const std::size_t pu = pow3(bag_position(out.bag, u));
    const std::size_t pv = pow3(bag_position(out.bag, v));
    out.vals.assign(child.vals.size(), NEG_INF);
    for (std::size_t code = 0; code < out.vals.size(); ++code) {
        const int cu = color_at(code, pu);
        const int cv = color_at(code, pv);
        if (cu == 0 || cv == 0) {
            out.vals[code] = child.vals[code];
        } else if (cu == 1 && cv == 1) {
            // This edge matches u with v; below it both were still waiting,
            // and bumping a color from 1 to 2 just adds the place value.
            out.vals[code] = child.vals[code + pu + pv];
        }
        // Any other combination means two saturated neighbors not matched
        // to each other, which an induced matching forbids.
    }
    return out;
}

inline InducedTable induced_forget(const InducedTable& child, int u) {
    InducedTable out;
    out.bag = child.bag;
    const int pos = bag_position(out.bag, u);
    const std::size_t below = pow3(pos);
    out.bag.erase(out.bag.begin() + pos);
    out.vals.assign(child.vals.size() / 3, NEG_INF);
    for (std::size_t code = 0; code < out.vals.size(); ++code) {
        // Forgetting color 2 is not allowed: every edge of u sits below this
        // node, so a still-waiting vertex could never be matched later.
        const std::size_t c0 = code % below + code / below * (below * 3);
        out.vals[code] = std::max(child.vals[c0], child.vals[c0 + below]);
    }
    return out;
}

inline InducedTable induced_join_naive(const InducedTable& a, const InducedTable& b) {
    assert(a.bag == b.bag);
    InducedTable out;
    out.bag = a.bag;
    const int p = static_cast<int>(out.bag.size());
    std::vector<std::size_t> pw(p + 1, 1);
    for (int i = 0; i < p; ++i) pw[i + 1] = pw[i] * 3;
    out.vals.assign(pw[p], NEG_INF);
    std::size_t pairs = 1;
    for (int i = 0; i < p; ++i) pairs *= 4;
    // Per vertex the valid (parent, left, right) color triples are
    // (0,0,0), (1,1,2), (1,2,1) and (2,2,2): free sets must agree, and a
    // matched edge lives in exactly one branch.
    for (std::size_t pair = 0; pair < pairs; ++pair) {
        std::size_t cf = 0, ca = 0, cb = 0;
        int sat = 0;
        std::size_t rest = pair;
        for (int i = 0; i < p; ++i, rest /= 4) {
            switch (rest & 3) {
                case 0: break;
                case 1: cf += pw[i]; ca += pw[i]; cb += 2 * pw[i]; ++sat; break;
                case 2: cf += pw[i]; ca += 2 * pw[i]; cb += pw[i]; ++sat; break;
                case 3: cf += 2 * pw[i]; ca += 2 * pw[i]; cb += 2 * pw[i]; ++sat; break;
            }
        }
        const std::int64_t va = a.vals[ca];
        const std::int64_t vb = b.vals[cb];
        if (va == NEG_INF || vb == NEG_INF) continue;
        // Saturated bag vertices were counted once per branch.
        out.vals[cf] = std::max(out.vals[cf], va + vb - sat);
    }
    return out;
}

inline InducedTable induced_join_conv(const InducedTable& a, const InducedTable& b) {
    assert(a.bag == b.bag);
    InducedTable out;
    out.bag = a.bag;
    const int p = static_cast<int>(out.bag.size());
    std::vector<std::size_t> pw(p + 1, 1);
    for (int i = 0; i < p; ++i) pw[i + 1] = pw[i] * 3;
    out.vals.assign(pw[p], NEG_INF);
    // Fix the set of free vertices, then over the rest the left branch's
    // color-1 set and the right branch's color-1 set must be disjoint, with
    // their union becoming the parent's color-1 set: a subset convolution
    // where value 1 marks membership and value 2 marks the complement.
    for (std::size_t freemask = 0; freemask < (std::size_t{1} << p); ++freemask) {
        std::vector<int> upos;
        for (int i = 0; i < p; ++i)
            if (!(freemask >> i & 1)) upos.push_back(i);
        const int u = static_cast<int>(upos.size());
        SetFunction fa = SetFunction::max_sum(u);
        SetFunction fb = SetFunction::max_sum(u);
        std::vector<std::size_t> codes(std::size_t{1} << u);
        for (std::size_t s = 0; s < codes.size(); ++s) {
            std::size_t code = 0;
            for (int j = 0; j < u; ++j) code += (s >> j & 1 ? 1 : 2) * pw[upos[j]];
            codes[s] = code;
            fa.vals[s] = a.vals[code];
            fb.vals[s] = b.vals[code];
        }
        const SetFunction h = convolve(fa, fb);
        for (std::size_t s = 0; s < codes.size(); ++s) {
            const std::int64_t v = h.vals[s];
            out.vals[codes[s]] = v == NEG_INF ? NEG_INF : v - u;
        }
    }
    return out;
}

}  // namespace detail

inline InducedTable induced_join(const InducedTable& a, const InducedTable& b,
                                 JoinMode mode) {
    return mode == JoinMode::Naive ? detail::induced_join_naive(a, b)
                                   : detail::induced_join_conv(a, b);
}

struct InducedResult {
    bool yes = false;
    std::int64_t saturated = 0;  // twice the best induced matching size

    std::int64_t matching_size() const { return saturated / 2; }
};

// Decides whether g has an induced matching with at least ell edges; the
// returned count is exact, so callers can also read off the optimum.
inline InducedResult solve_induced(const Graph& g, const NiceDecomposition& nd,
                                   int ell, JoinMode mode = JoinMode::Naive) {
    assert(ell >= 0);
    assert(validate_nice(g, nd).empty());
    (void)g;
    std::vector<InducedTable> tab(nd.nodes.size());
    for (std::size_t i = 0; i < nd.nodes.size(); ++i) {
        const NiceNode& node = nd.nodes[i];
        switch (node.kind) {
            case NodeKind::Leaf:
                tab[i] = detail::induced_leaf();
                break;
            case NodeKind::IntroduceVertex:
                tab[i] = detail::induced_introduce(tab[node.child], node.u);
                tab[node.child] = InducedTable{};
                break;
            case NodeKind::IntroduceEdge:
                tab[i] = detail::induced_introduce_edge(tab[node.child], node.u, node.v);
                tab[node.child] = InducedTable{};
                break;
            case NodeKind::Forget:
                tab[i] = detail::induced_forget(tab[node.child], node.u);
                tab[node.child] = InducedTable{};
                break;
            case NodeKind::Join:
                tab[i] = induced_join(tab[node.child], tab[node.child2], mode);
                tab[node.child] = InducedTable{};
                tab[node.child2] = InducedTable{};
                break;
        }
        assert(tab[i].bag == node.bag);
    }
    const InducedTable& root = tab[nd.root()];
    assert(root.bag.empty());
    const std::int64_t best = root.vals[0];
    assert(best >= 0 && best % 2 == 0);
    return InducedResult{best >= 2LL * ell, best};
}

}  // namespace twmatch
