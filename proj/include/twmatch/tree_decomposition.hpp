#pragma once

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "twmatch/graph.hpp"

namespace twmatch {

struct TreeDecomposition {
    std::vector<std::vector<int>> bags;  // sorted vertex lists
    std::vector<std::pair<int, int>> edges;  // between bag indices

    int width() const {
        int w = -1;
        for (const auto& b : bags) w = std::max(w, static_cast<int>(b.size()) - 1);
        return w;
    }
};

// Checks the three decomposition properties plus basic shape, and returns a
// human-readable violation list (empty means valid). Every violation names a
// witness so a bad decomposition can be debugged from the message alone.
inline std::vector<std::string> validate_td(const Graph& g, const TreeDecomposition& td) {
    std::vector<std::string> out;
    const int nb = static_cast<int>(td.bags.size());
    if (nb == 0) {
        out.push_back("structure: no bags");
        return out;
    }
    for (int i = 0; i < nb; ++i)
        for (int v : td.bags[i])
            if (v < 0 || v >= g.n) {
                out.push_back("bag " + std::to_string(i) + ": vertex " + std::to_string(v) +
                              " out of range");
                return out;
            }
    for (auto [a, b] : td.edges)
        if (a < 0 || b < 0 || a >= nb || b >= nb || a == b) {
            out.push_back("structure: bad tree edge " + std::to_string(a) + "-" + std::to_string(b));
            return out;
        }
    if (static_cast<int>(td.edges.size()) != nb - 1)
        out.push_back("structure: " + std::to_string(td.edges.size()) + " tree edges for " +
                      std::to_string(nb) + " bags");
    // connectivity of the tree itself
    {
        std::vector<std::vector<int>> adj(nb);
        for (auto [a, b] : td.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<char> seen(nb, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int cnt = 0;
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            ++cnt;
            for (int y : adj[x])
                if (!seen[y]) {
                    seen[y] = 1;
                    stack.push_back(y);
                }
        }
        if (cnt != nb) out.push_back("structure: tree is disconnected");
    }
    if (!out.empty()) return out;  // coverage checks assume a sane tree

    std::vector<std::vector<int>> holding(g.n);  // bags containing each vertex
    for (int i = 0; i < nb; ++i)
        for (int v : td.bags[i]) holding[v].push_back(i);
    for (int v = 0; v < g.n; ++v)
        if (holding[v].empty())
            out.push_back("coverage: vertex " + std::to_string(v) + " in no bag");
    for (auto [u, v] : g.edges) {
        bool found = false;
        const auto& hu = holding[u];
        for (int i : hu)
            if (std::binary_search(td.bags[i].begin(), td.bags[i].end(), v)) {
                found = true;
                break;
            }
        if (!found)
            out.push_back("coverage: edge " + std::to_string(u) + "-" + std::to_string(v) +
                          " in no bag");
    }
    // connectivity of each vertex's bag set
    {
        std::vector<std::vector<int>> adj(nb);
        for (auto [a, b] : td.edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::vector<int> mark(nb, -1);
        for (int v = 0; v < g.n; ++v) {
            if (holding[v].size() <= 1) continue;
            for (int i : holding[v]) mark[i] = v;
            std::vector<int> stack{holding[v][0]};
            mark[holding[v][0]] = -2;  // visited
            std::size_t cnt = 1;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int y : adj[x])
                    if (mark[y] == v) {
                        mark[y] = -2;
                        ++cnt;
                        stack.push_back(y);
                    }
            }
            if (cnt != holding[v].size())
                out.push_back("connectivity: bags containing vertex " + std::to_string(v) +
                              " are not connected in the tree");
        }
    }
    return out;
}

// Greedy elimination ordering picking the vertex whose neighborhood needs the
// fewest fill edges, lowest id on ties. One bag per eliminated vertex; the
// parent is the neighbor eliminated soonest after it. Exact on chordal
// graphs, a decent heuristic elsewhere.
inline TreeDecomposition min_fill_decompose(const Graph& g) {
    TreeDecomposition td;
    const int n = g.n;
    if (n == 0) {
        td.bags.push_back({});
        return td;
    }
    std::vector<std::set<int>> adj(n);
    for (auto [u, v] : g.edges) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    std::vector<char> gone(n, 0);
    std::vector<int> position(n, -1);
    td.bags.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        long best_fill = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            long fill = 0;
            const auto& nb = adj[v];
            for (auto it = nb.begin(); it != nb.end(); ++it) {
                auto jt = it;
                for (++jt; jt != nb.end(); ++jt)
                    if (!adj[*it].count(*jt)) ++fill;
            }
            if (best == -1 || fill < best_fill) {
                best = v;
                best_fill = fill;
            }
        }
        std::vector<int> bag{best};
        for (int w : adj[best]) bag.push_back(w);
        std::sort(bag.begin(), bag.end());
        position[best] = step;
        td.bags.push_back(std::move(bag));
        // make the neighborhood a clique, then detach the vertex
        const std::vector<int> nbrs(adj[best].begin(), adj[best].end());
        for (std::size_t i = 0; i < nbrs.size(); ++i)
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                adj[nbrs[i]].insert(nbrs[j]);
                adj[nbrs[j]].insert(nbrs[i]);
            }
        for (int w : nbrs) adj[w].erase(best);
        adj[best].clear();
        gone[best] = 1;
    }
    // hook each bag to the earliest-eliminated remaining neighbor; bags whose
    // vertex had no survivors become roots and get chained together
    std::vector<int> elim_vertex(n);
    for (int v = 0; v < n; ++v) elim_vertex[position[v]] = v;
    std::vector<int> roots;
    for (int step = 0; step < n; ++step) {
        int v = elim_vertex[step];
        int parent_pos = -1;
        for (int w : td.bags[step])
            if (w != v && (parent_pos == -1 || position[w] < parent_pos)) parent_pos = position[w];
        if (parent_pos == -1) roots.push_back(step);
        else td.edges.emplace_back(step, parent_pos);
    }
    for (std::size_t i = 1; i < roots.size(); ++i)
        td.edges.emplace_back(roots[i - 1], roots[i]);
    assert(validate_td(g, td).empty());
    return td;
}

struct TdParse {
    TreeDecomposition td;
    int declared_n = 0;
    int declared_width = -1;
};

// PACE-style decomposition files: "s td <bags> <width+1> <n>", bag lines
// "b <index> <vertices...>", remaining numeric lines are tree edges. All ids
// are 1-based in the file and 0-based in memory.
inline TdParse parse_td(std::istream& in) {
    TdParse res;
    bool have_header = false;
    std::vector<char> bag_seen;
    int lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (line[0] == 's') {
            std::string s, tdword;
            long nb = -1, w1 = -1, n = -1;
            ls >> s >> tdword >> nb >> w1 >> n;
            if (ls.fail() || tdword != "td" || have_header)
                throw detail::parse_error(lineno, "bad or repeated 's td' header");
            if (nb < 0 || w1 < 0 || n < 0)
                throw detail::parse_error(lineno, "negative size in header");
            res.td.bags.assign(nb, {});
            bag_seen.assign(nb, 0);
            res.declared_n = static_cast<int>(n);
            res.declared_width = static_cast<int>(w1) - 1;
            have_header = true;
            continue;
        }
        if (!have_header) throw detail::parse_error(lineno, "expected 's td' header first");
        if (line[0] == 'b') {
            char bch;
            long idx = -1;
            ls >> bch >> idx;
            if (ls.fail() || idx < 1 || idx > static_cast<long>(res.td.bags.size()))
                throw detail::parse_error(lineno, "bad bag index");
            if (bag_seen[idx - 1]) throw detail::parse_error(lineno, "bag listed twice");
            bag_seen[idx - 1] = 1;
            long v;
            std::vector<int> bag;
            while (ls >> v) {
                if (v < 1 || v > res.declared_n)
                    throw detail::parse_error(lineno, "bag vertex out of range");
                bag.push_back(static_cast<int>(v) - 1);
            }
            std::sort(bag.begin(), bag.end());
            bag.erase(std::unique(bag.begin(), bag.end()), bag.end());
            res.td.bags[idx - 1] = std::move(bag);
            continue;
        }
        long a = -1, b = -1;
        ls >> a >> b;
        if (ls.fail()) throw detail::parse_error(lineno, "expected tree edge 'i j'");
        if (a < 1 || b < 1 || a > static_cast<long>(res.td.bags.size()) ||
            b > static_cast<long>(res.td.bags.size()))
            throw detail::parse_error(lineno, "tree edge endpoint out of range");
        res.td.edges.emplace_back(static_cast<int>(a) - 1, static_cast<int>(b) - 1);
    }
    if (!have_header) throw std::runtime_error("empty input, expected 's td' header");
    return res;
}

inline TdParse parse_td(const std::string& text) {
    std::istringstream in(text);
    return parse_td(in);
}

inline void write_td(std::ostream& out, const TreeDecomposition& td, int n) {
    out << "s td " << td.bags.size() << ' ' << td.width() + 1 << ' ' << n << '\n';
    for (std::size_t i = 0; i < td.bags.size(); ++i) {
        out << "b " << i + 1;
        for (int v : td.bags[i]) out << ' ' << v + 1;
        out << '\n';
    }
    for (auto [a, b] : td.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

}  // namespace twmatch
