#pragma once

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "oracle.hpp"
#include "tree_decomposition.hpp"

namespace twmatch {

// Turns a row-constrained hitting-set family into a disconnected-matching
// instance: choosing one column per row so that every set is hit corresponds
// exactly to a matching of 3k+m edges whose saturated graph splits into at
// least k components. Selector vertices vL_i / vR_j stand for rows and
// columns, each set X grows one vertex per element wired to its row and
// column selectors, and star gadgets (a single new vertex joined to a given
// set) provide the pendant edges that pad the matching. The instance ships
// with a path decomposition of width exactly 3k.

// Attaches a new vertex adjacent to exactly the vertices in x; returns its id.
inline int add_star_gadget(Graph& g, const std::vector<int>& x) {
    if (x.empty()) throw std::invalid_argument("star gadget: empty attachment set");
    for (int v : x)
        if (v < 0 || v >= g.n)
            throw std::invalid_argument("star gadget: vertex out of range");
    const int u = g.n;
    g.n += 1;
    g.adj.emplace_back();
    for (int v : x) g.add_edge(v, u);
    return u;
}

struct ReductionInstance {
    Graph graph{0};
    int k = 0;
    int m = 0;    // input sets, before the full rows are appended
    int ell = 0;  // 3k + m
    int c = 0;    // k
    TreeDecomposition path_decomposition;
    std::vector<std::string> labels;  // one name per vertex id

    // layout bookkeeping, in vertex-id order
    std::vector<int> vL, vR;                      // row and column selectors
    std::vector<RowSet> family;                   // S_1..S_m then rows P_1..P_k
    std::vector<std::vector<int>> set_vertices;   // per family set, per element
    std::vector<int> uL, uR, uX;                  // star gadget centers
};

struct EdgePartition {
    std::vector<std::pair<int, int>> pendant;   // selector to its private gadget
    std::vector<std::pair<int, int>> center;    // element vertex to its set's gadget
    std::vector<std::pair<int, int>> selector;  // element vertex to row/column selector
};

namespace detail {

inline void check_reduction_sets(int k, const std::vector<RowSet>& sets) {
    if (k < 1 || k > 8) throw std::invalid_argument("reduction: need 1 <= k <= 8");
    if (sets.size() > 20) throw std::invalid_argument("reduction: too many sets");
    for (const auto& s : sets) {
        if (s.empty()) throw std::invalid_argument("reduction: empty set");
        std::uint32_t rows = 0;
        for (auto [i, j] : s) {
            if (i < 1 || i > k || j < 1 || j > k)
                throw std::invalid_argument("reduction: element out of range");
            if (rows & (1u << i))
                throw std::invalid_argument("reduction: two elements in one row");
            rows |= 1u << i;
        }
    }
}

}  // namespace detail

inline ReductionInstance build_reduction(int k, const std::vector<RowSet>& sets) {
    detail::check_reduction_sets(k, sets);
    ReductionInstance inst;
    inst.k = k;
    inst.m = static_cast<int>(sets.size());
    inst.ell = 3 * k + inst.m;
    inst.c = k;

    inst.family = sets;
    for (RowSet& s : inst.family) std::sort(s.begin(), s.end());
    for (int i = 1; i <= k; ++i) {
        RowSet row;
        for (int j = 1; j <= k; ++j) row.push_back({i, j});
        inst.family.push_back(row);
    }
    auto set_name = [&](int s) {
        return s < inst.m ? "S" + std::to_string(s + 1) : "P" + std::to_string(s - inst.m + 1);
    };

    int total = 2 * k;
    for (const RowSet& s : inst.family) total += static_cast<int>(s.size());
    Graph g(total);
    for (int i = 1; i <= k; ++i) {
        inst.vL.push_back(i - 1);
        inst.labels.push_back("vL_" + std::to_string(i));
    }
    for (int j = 1; j <= k; ++j) {
        inst.vR.push_back(k + j - 1);
        inst.labels.push_back("vR_" + std::to_string(j));
    }
    int next = 2 * k;
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
        std::vector<int> ids;
        for (auto [i, j] : inst.family[s]) {
            ids.push_back(next);
            inst.labels.push_back("vX_" + set_name(static_cast<int>(s)) + "_" +
                                  std::to_string(i) + "_" + std::to_string(j));
            g.add_edge(inst.vL[i - 1], next);
            g.add_edge(inst.vR[j - 1], next);
            ++next;
        }
        inst.set_vertices.push_back(std::move(ids));
    }
    for (int i = 1; i <= k; ++i) {
        inst.uL.push_back(add_star_gadget(g, {inst.vL[i - 1]}));
        inst.labels.push_back("uL_" + std::to_string(i));
    }
    for (int j = 1; j <= k; ++j) {
        inst.uR.push_back(add_star_gadget(g, {inst.vR[j - 1]}));
        inst.labels.push_back("uR_" + std::to_string(j));
    }
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
        inst.uX.push_back(add_star_gadget(g, inst.set_vertices[s]));
        inst.labels.push_back("uX_" + set_name(static_cast<int>(s)));
    }
    inst.graph = std::move(g);
    assert(static_cast<int>(inst.labels.size()) == inst.graph.n);

    // One bag per set holding its element vertices next to all selectors,
    // followed by a copy with the set's gadget; gadget bags for the pendant
    // stars trail at the end. Selectors sit in every bag, everything else is
    // local, so the chain is a valid path decomposition of width 3k.
    std::vector<int> selectors(2 * k);
    for (int v = 0; v < 2 * k; ++v) selectors[v] = v;
    TreeDecomposition td;
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
        std::vector<int> bag = selectors;
        bag.insert(bag.end(), inst.set_vertices[s].begin(), inst.set_vertices[s].end());
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
        bag.push_back(inst.uX[s]);
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
    }
    for (int u : inst.uL) {
        std::vector<int> bag = selectors;
        bag.push_back(u);
        td.bags.push_back(bag);
    }
    for (int u : inst.uR) {
        std::vector<int> bag = selectors;
        bag.push_back(u);
        td.bags.push_back(bag);
    }
    for (std::size_t t = 1; t < td.bags.size(); ++t)
        td.edges.push_back({static_cast<int>(t) - 1, static_cast<int>(t)});
    inst.path_decomposition = std::move(td);
    assert(validate_td(inst.graph, inst.path_decomposition).empty());
    assert(inst.path_decomposition.width() == 3 * k);
    return inst;
}

// Splits the instance's edges into the three structural classes. Any matching
// fits at most 2k pendant edges, at most k+m center edges, and at most 2k
// selector edges (pendant and selector combined still at most 2k), which is
// what pins optimal matchings to pendant and center edges only. Refuses a
// graph whose edges disagree with the stored layout.
inline EdgePartition classify_edges(const ReductionInstance& inst) {
    const auto norm = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    EdgePartition part;
    const int k = inst.k;
    if (static_cast<int>(inst.vL.size()) != k || static_cast<int>(inst.vR.size()) != k ||
        static_cast<int>(inst.uL.size()) != k || static_cast<int>(inst.uR.size()) != k ||
        inst.uX.size() != inst.family.size() ||
        inst.set_vertices.size() != inst.family.size())
        throw std::invalid_argument("edge classes: instance layout is inconsistent");
    for (int i = 0; i < k; ++i) {
        part.pendant.push_back(norm(inst.vL[i], inst.uL[i]));
        part.pendant.push_back(norm(inst.vR[i], inst.uR[i]));
    }
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
        if (inst.set_vertices[s].size() != inst.family[s].size())
            throw std::invalid_argument("edge classes: instance layout is inconsistent");
        for (std::size_t e = 0; e < inst.family[s].size(); ++e) {
            const auto [i, j] = inst.family[s][e];
            const int x = inst.set_vertices[s][e];
            part.center.push_back(norm(x, inst.uX[s]));
            part.selector.push_back(norm(inst.vL[i - 1], x));
            part.selector.push_back(norm(inst.vR[j - 1], x));
        }
    }
    std::set<std::pair<int, int>> expected;
    for (const auto* cls : {&part.pendant, &part.center, &part.selector})
        for (auto e : *cls)
            if (!expected.insert(e).second)
                throw std::invalid_argument("edge classes: instance layout is inconsistent");
    std::set<std::pair<int, int>> actual(inst.graph.edges.begin(), inst.graph.edges.end());
    if (actual != expected)
        throw std::invalid_argument("edge classes: graph does not match the construction");
    return part;
}

// The matching behind a yes-instance: every selector pairs with its pendant
// gadget, and each set's gadget pairs with an element vertex picked by the
// column selection (f[i-1] = column chosen for row i). Saturated components
// group by column, so exactly k of them appear.
inline Matching witness_matching(const ReductionInstance& inst, const std::vector<int>& f) {
    if (static_cast<int>(f.size()) != inst.k)
        throw std::invalid_argument("witness: selection must pick one column per row");
    for (int col : f)
        if (col < 1 || col > inst.k)
            throw std::invalid_argument("witness: column out of range");
    Matching m;
    for (int i = 0; i < inst.k; ++i) m.push_back({inst.vL[i], inst.uL[i]});
    for (int j = 0; j < inst.k; ++j) m.push_back({inst.vR[j], inst.uR[j]});
    for (std::size_t s = 0; s < inst.family.size(); ++s) {
        int picked = -1;
        for (std::size_t e = 0; e < inst.family[s].size(); ++e) {
            const auto [i, j] = inst.family[s][e];
            if (f[i - 1] == j) {
                picked = inst.set_vertices[s][e];
                break;
            }
        }
        if (picked < 0) throw std::invalid_argument("witness: selection misses a set");
        m.push_back({picked, inst.uX[s]});
    }
    return m;
}

}  // namespace twmatch
