#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twmatch/graph.hpp"
#include "twmatch/tree_decomposition.hpp"

namespace twmatch {

enum class NodeKind { Leaf, IntroduceVertex, IntroduceEdge, Forget, Join };

struct NiceNode {
    NodeKind kind = NodeKind::Leaf;
    int u = -1, v = -1;   // introduced/forgotten vertex; for edges u < v
    int child = -1, child2 = -1;
    std::vector<int> bag;  // sorted
};

// Nice decomposition with explicit edge nodes. Nodes are stored in post
// order (children before parents, root last), so solvers can run a single
// forward sweep. Every graph edge appears at exactly one edge node, placed
// directly below the forget of its first-forgotten endpoint; in particular
// no edge between two bag vertices of a join is introduced below the join.
struct NiceDecomposition {
    std::vector<NiceNode> nodes;

    int root() const { return static_cast<int>(nodes.size()) - 1; }

    int width() const {
        int w = -1;
        for (const auto& nd : nodes) w = std::max(w, static_cast<int>(nd.bag.size()) - 1);
        return w;
    }
};

namespace detail {

struct PoolNode {
    NodeKind kind = NodeKind::Leaf;
    int u = -1, v = -1;
    int child = -1, child2 = -1;
    std::vector<int> bag;
};

inline int bag_position(const std::vector<int>& bag, int v) {
    auto it = std::lower_bound(bag.begin(), bag.end(), v);
    assert(it != bag.end() && *it == v);
    return static_cast<int>(it - bag.begin());
}

}  // namespace detail

// Expands a valid decomposition into the nice form above. Throws on an
// invalid input decomposition, quoting the first violation.
inline NiceDecomposition make_nice_deferred(const Graph& g, const TreeDecomposition& td) {
    {
        auto bad = validate_td(g, td);
        if (!bad.empty())
            throw std::invalid_argument("make_nice_deferred: invalid decomposition: " + bad[0]);
    }
    using detail::PoolNode;
    std::vector<PoolNode> pool;
    auto add = [&](NodeKind k, int u, int v, int child, int child2, std::vector<int> bag) {
        pool.push_back({k, u, v, child, child2, std::move(bag)});
        return static_cast<int>(pool.size()) - 1;
    };

    const int nb = static_cast<int>(td.bags.size());
    std::vector<std::vector<int>> tadj(nb);
    for (auto [a, b] : td.edges) {
        tadj[a].push_back(b);
        tadj[b].push_back(a);
    }
    // root the decomposition tree at bag 0
    std::vector<int> order, parent(nb, -1);
    std::vector<std::vector<int>> children(nb);
    {
        std::vector<int> stack{0};
        std::vector<char> seen(nb, 0);
        seen[0] = 1;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            order.push_back(x);
            for (int y : tadj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    parent[y] = x;
                    children[x].push_back(y);
                    stack.push_back(y);
                }
        }
    }

    // grows a chain from `tip` (ending with bag `have`) to end with bag
    // `want`: forgets first, then introduces, both in ascending vertex order
    auto morph = [&](int tip, const std::vector<int>& have, const std::vector<int>& want) {
        std::vector<int> cur = have, drop, take;
        std::set_difference(have.begin(), have.end(), want.begin(), want.end(),
                            std::back_inserter(drop));
        std::set_difference(want.begin(), want.end(), have.begin(), have.end(),
                            std::back_inserter(take));
        for (int x : drop) {
            cur.erase(std::find(cur.begin(), cur.end(), x));
            tip = add(NodeKind::Forget, x, -1, tip, -1, cur);
        }
        for (int x : take) {
            cur.insert(std::lower_bound(cur.begin(), cur.end(), x), x);
            tip = add(NodeKind::IntroduceVertex, x, -1, tip, -1, cur);
        }
        return tip;
    };

    // bottom-up over the rooted tree: each bag becomes a chain tip whose bag
    // matches it; children get morphed to the parent bag and joined pairwise
    std::vector<int> tip_of(nb, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = *it;
        if (children[x].empty()) {
            int tip = add(NodeKind::Leaf, -1, -1, -1, -1, {});
            tip_of[x] = morph(tip, {}, td.bags[x]);
            continue;
        }
        int combined = -1;
        for (int c : children[x]) {
            int ct = morph(tip_of[c], td.bags[c], td.bags[x]);
            combined = combined < 0 ? ct : add(NodeKind::Join, -1, -1, combined, ct, td.bags[x]);
        }
        tip_of[x] = combined;
    }
    int top = morph(tip_of[0], td.bags[0], {});

    // locate each vertex's forget node; a valid decomposition forgets each
    // vertex exactly once
    std::vector<int> forget_of(g.n, -1);
    for (int i = 0; i < static_cast<int>(pool.size()); ++i)
        if (pool[i].kind == NodeKind::Forget) {
            assert(forget_of[pool[i].u] == -1);
            forget_of[pool[i].u] = i;
        }
    for (int v = 0; v < g.n; ++v) assert(forget_of[v] >= 0);

    // ancestor tests over the chain structure via entry/exit times
    std::vector<int> tin(pool.size()), tout(pool.size());
    {
        int clock = 0;
        std::vector<std::pair<int, int>> stack{{top, 0}};
        while (!stack.empty()) {
            const int x = stack.back().first;
            if (stack.back().second == 0) {
                stack.back().second = 1;
                tin[x] = clock++;
                const int c = pool[x].child, c2 = pool[x].child2;
                if (c >= 0) stack.push_back({c, 0});
                if (c2 >= 0) stack.push_back({c2, 0});
            } else {
                tout[x] = clock++;
                stack.pop_back();
            }
        }
    }
    auto is_ancestor = [&](int a, int b) { return tin[a] <= tin[b] && tout[b] <= tout[a]; };

    // each edge goes below the forget of its first-forgotten endpoint, that
    // is the endpoint whose forget node is the descendant of the other's
    std::vector<std::vector<std::pair<int, int>>> edges_at(pool.size());
    for (auto [a, b] : g.edges) {
        int fa = forget_of[a], fb = forget_of[b];
        assert(is_ancestor(fa, fb) || is_ancestor(fb, fa));
        int first = is_ancestor(fa, fb) ? b : a;
        edges_at[forget_of[first]].emplace_back(std::min(a, b), std::max(a, b));
    }
    for (int f = 0; f < static_cast<int>(edges_at.size()); ++f) {
        auto& group = edges_at[f];
        if (group.empty()) continue;
        // ascending by the partner of the forgotten vertex, introduced
        // bottom-up; the chain reuses the bag the forget consumed
        int fv = pool[f].u;
        std::sort(group.begin(), group.end(), [&](auto e1, auto e2) {
            int p1 = e1.first == fv ? e1.second : e1.first;
            int p2 = e2.first == fv ? e2.second : e2.first;
            return p1 < p2;
        });
        int below = pool[f].child;
        const std::vector<int> bag = pool[below].bag;
        for (auto [u, v] : group) {
            assert(std::binary_search(bag.begin(), bag.end(), u));
            assert(std::binary_search(bag.begin(), bag.end(), v));
            below = add(NodeKind::IntroduceEdge, u, v, below, -1, bag);
        }
        pool[f].child = below;
    }

    // emit in post order
    NiceDecomposition nd;
    nd.nodes.reserve(pool.size());
    std::vector<int> remap(pool.size(), -1);
    {
        std::vector<std::pair<int, int>> stack{{top, 0}};
        while (!stack.empty()) {
            const int x = stack.back().first;
            if (stack.back().second == 0) {
                stack.back().second = 1;
                const int c = pool[x].child, c2 = pool[x].child2;
                if (c >= 0) stack.push_back({c, 0});
                if (c2 >= 0) stack.push_back({c2, 0});
            } else {
                NiceNode out;
                out.kind = pool[x].kind;
                out.u = pool[x].u;
                out.v = pool[x].v;
                out.bag = std::move(pool[x].bag);
                out.child = pool[x].child >= 0 ? remap[pool[x].child] : -1;
                out.child2 = pool[x].child2 >= 0 ? remap[pool[x].child2] : -1;
                assert(pool[x].child < 0 || out.child >= 0);
                assert(pool[x].child2 < 0 || out.child2 >= 0);
                remap[x] = static_cast<int>(nd.nodes.size());
                nd.nodes.push_back(std::move(out));
                stack.pop_back();
            }
        }
    }
    return nd;
}

// Structural validator for the nice form; empty result means valid. Used by
// tests and by callers handed a decomposition of unknown pedigree.
inline std::vector<std::string> validate_nice(const Graph& g, const NiceDecomposition& nd) {
    std::vector<std::string> out;
    const int nn = static_cast<int>(nd.nodes.size());
    if (nn == 0) return {"structure: empty"};
    auto name = [](int i) { return "node " + std::to_string(i); };
    std::vector<int> ref_count(nn, 0);
    for (int i = 0; i < nn; ++i) {
        const auto& x = nd.nodes[i];
        if (!std::is_sorted(x.bag.begin(), x.bag.end()) ||
            std::adjacent_find(x.bag.begin(), x.bag.end()) != x.bag.end())
            out.push_back(name(i) + ": bag not sorted/unique");
        for (int c : {x.child, x.child2})
            if (c >= 0) {
                if (c >= i) out.push_back(name(i) + ": child after parent");
                else ++ref_count[c];
            }
        auto has = [&](const std::vector<int>& b, int v) {
            return std::binary_search(b.begin(), b.end(), v);
        };
        switch (x.kind) {
            case NodeKind::Leaf:
                if (x.child >= 0 || x.child2 >= 0 || !x.bag.empty())
                    out.push_back(name(i) + ": malformed leaf");
                break;
            case NodeKind::IntroduceVertex: {
                if (x.child < 0 || x.child2 >= 0 || x.u < 0 || x.u >= g.n) {
                    out.push_back(name(i) + ": malformed introduce");
                    break;
                }
                const auto& cb = nd.nodes[x.child].bag;
                std::vector<int> expect = cb;
                expect.insert(std::lower_bound(expect.begin(), expect.end(), x.u), x.u);
                if (has(cb, x.u) || x.bag != expect)
                    out.push_back(name(i) + ": introduce of " + std::to_string(x.u) +
                                  " does not extend child bag");
                break;
            }
            case NodeKind::IntroduceEdge: {
                if (x.child < 0 || x.child2 >= 0) {
                    out.push_back(name(i) + ": malformed edge node");
                    break;
                }
                if (x.bag != nd.nodes[x.child].bag)
                    out.push_back(name(i) + ": edge node changes the bag");
                if (!g.has_edge(x.u, x.v))
                    out.push_back(name(i) + ": edge " + std::to_string(x.u) + "-" +
                                  std::to_string(x.v) + " not in the graph");
                else if (!has(x.bag, x.u) || !has(x.bag, x.v))
                    out.push_back(name(i) + ": edge endpoints not in bag");
                break;
            }
            case NodeKind::Forget: {
                if (x.child < 0 || x.child2 >= 0 || x.u < 0 || x.u >= g.n) {
                    out.push_back(name(i) + ": malformed forget");
                    break;
                }
                const auto& cb = nd.nodes[x.child].bag;
                std::vector<int> expect;
                for (int v : cb)
                    if (v != x.u) expect.push_back(v);
                if (!has(cb, x.u) || x.bag != expect)
                    out.push_back(name(i) + ": forget of " + std::to_string(x.u) +
                                  " does not shrink child bag");
                break;
            }
            case NodeKind::Join:
                if (x.child < 0 || x.child2 < 0)
                    out.push_back(name(i) + ": join needs two children");
                else if (nd.nodes[x.child].bag != x.bag || nd.nodes[x.child2].bag != x.bag)
                    out.push_back(name(i) + ": join children bags differ from join bag");
                break;
        }
    }
    for (int i = 0; i + 1 < nn; ++i)
        if (ref_count[i] != 1)
            out.push_back(name(i) + ": referenced " + std::to_string(ref_count[i]) +
                          " times (want 1)");
    if (ref_count[nn - 1] != 0) out.push_back("structure: root is referenced as a child");
    if (!nd.nodes[nn - 1].bag.empty()) out.push_back("structure: root bag not empty");
    if (!out.empty()) return out;

    // every graph edge at exactly one edge node
    {
        std::map<std::pair<int, int>, int> seen;
        for (const auto& x : nd.nodes)
            if (x.kind == NodeKind::IntroduceEdge)
                ++seen[{std::min(x.u, x.v), std::max(x.u, x.v)}];
        for (auto [e, cnt] : seen)
            if (cnt != 1)
                out.push_back("edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
                              " introduced " + std::to_string(cnt) + " times");
        for (auto [u, v] : g.edges)
            if (!seen.count({u, v}))
                out.push_back("edge " + std::to_string(u) + "-" + std::to_string(v) +
                              " never introduced");
    }
    // every vertex appears, and is forgotten exactly once
    {
        std::vector<int> forgets(g.n, 0);
        std::vector<char> appears(g.n, 0);
        for (const auto& x : nd.nodes) {
            if (x.kind == NodeKind::Forget) ++forgets[x.u];
            for (int v : x.bag) appears[v] = 1;
        }
        for (int v = 0; v < g.n; ++v) {
            if (!appears[v]) out.push_back("vertex " + std::to_string(v) + " in no bag");
            else if (forgets[v] != 1)
                out.push_back("vertex " + std::to_string(v) + " forgotten " +
                              std::to_string(forgets[v]) + " times");
        }
    }
    // occurrences of each vertex form a connected subtree: a vertex whose
    // occurrence set is connected has exactly one occurrence whose parent
    // does not contain it (the top of its subtree)
    {
        std::vector<int> parent_of(nn, -1);
        for (int i = 0; i < nn; ++i)
            for (int c : {nd.nodes[i].child, nd.nodes[i].child2})
                if (c >= 0) parent_of[c] = i;
        std::vector<int> tops(g.n, 0);
        for (int i = 0; i < nn; ++i) {
            const auto& x = nd.nodes[i];
            for (int v : x.bag) {
                int p = parent_of[i];
                bool parent_has = false;
                if (p >= 0) {
                    const auto& pb = nd.nodes[p].bag;
                    parent_has = std::binary_search(pb.begin(), pb.end(), v);
                }
                if (!parent_has) ++tops[v];
            }
        }
        for (int v = 0; v < g.n; ++v)
            if (tops[v] > 1)
                out.push_back("vertex " + std::to_string(v) + " occurs in " +
                              std::to_string(tops[v]) + " disjoint subtrees");
    }
    if (!out.empty()) return out;

    // deferred placement: walking up from an edge node through edge nodes
    // must reach the forget of one of its endpoints
    std::vector<int> parent_of(nn, -1);
    for (int i = 0; i < nn; ++i)
        for (int c : {nd.nodes[i].child, nd.nodes[i].child2})
            if (c >= 0) parent_of[c] = i;
    for (int i = 0; i < nn; ++i) {
        if (nd.nodes[i].kind != NodeKind::IntroduceEdge) continue;
        int p = parent_of[i];
        while (p >= 0 && nd.nodes[p].kind == NodeKind::IntroduceEdge) p = parent_of[p];
        if (p < 0 || nd.nodes[p].kind != NodeKind::Forget ||
            (nd.nodes[p].u != nd.nodes[i].u && nd.nodes[p].u != nd.nodes[i].v))
            out.push_back("node " + std::to_string(i) +
                          ": edge node not directly below the forget of an endpoint");
    }
    // and no edge between two bag vertices of a join is introduced below it
    {
        std::vector<int> tin(nn), tout_(nn);
        int clock = 0;
        std::vector<std::pair<int, int>> stack{{nn - 1, 0}};
        while (!stack.empty()) {
            const int x = stack.back().first;
            if (stack.back().second == 0) {
                stack.back().second = 1;
                tin[x] = clock++;
                const int c = nd.nodes[x].child, c2 = nd.nodes[x].child2;
                if (c >= 0) stack.push_back({c, 0});
                if (c2 >= 0) stack.push_back({c2, 0});
            } else {
                tout_[x] = clock++;
                stack.pop_back();
            }
        }
        std::map<std::pair<int, int>, int> where;
        for (int i = 0; i < nn; ++i)
            if (nd.nodes[i].kind == NodeKind::IntroduceEdge)
                where[{nd.nodes[i].u, nd.nodes[i].v}] = i;
        for (int j = 0; j < nn; ++j) {
            if (nd.nodes[j].kind != NodeKind::Join) continue;
            const auto& bag = nd.nodes[j].bag;
            for (std::size_t p = 0; p < bag.size(); ++p)
                for (std::size_t q = p + 1; q < bag.size(); ++q) {
                    auto it = where.find({bag[p], bag[q]});
                    if (it == where.end()) continue;
                    int z = it->second;
                    if (tin[j] <= tin[z] && tout_[z] <= tout_[j])
                        out.push_back("join " + std::to_string(j) + ": edge " +
                                      std::to_string(bag[p]) + "-" + std::to_string(bag[q]) +
                                      " introduced below it");
                }
        }
    }
    return out;
}

inline void write_nice_debug(std::ostream& os, const NiceDecomposition& nd) {
    auto bag_str = [](const std::vector<int>& b) {
        std::string s = "{";
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(b[i]);
        }
        return s + "}";
    };
    for (int i = 0; i < static_cast<int>(nd.nodes.size()); ++i) {
        const auto& x = nd.nodes[i];
        os << i << ": ";
        switch (x.kind) {
            case NodeKind::Leaf: os << "leaf"; break;
            case NodeKind::IntroduceVertex: os << "introduce v" << x.u << " <- " << x.child; break;
            case NodeKind::IntroduceEdge:
                os << "edge " << x.u << "-" << x.v << " <- " << x.child;
                break;
            case NodeKind::Forget: os << "forget v" << x.u << " <- " << x.child; break;
            case NodeKind::Join: os << "join <- " << x.child << "," << x.child2; break;
        }
        os << ' ' << bag_str(x.bag) << '\n';
    }
}

}  // namespace twmatch
