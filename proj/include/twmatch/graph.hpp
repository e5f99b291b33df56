#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twmatch {

// Undirected graph on vertices 0..n-1. Each edge is stored once with u < v;
// adjacency lists stay sorted so has_edge can binary search.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> adj;

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_) {}

    bool has_edge(int u, int v) const {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v) return false;
        const auto& a = adj[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    // Inserts u-v, keeping adjacency sorted. Duplicates are the caller's
    // problem; parse_graph filters them, generators never produce them.
    void add_edge(int u, int v) {
        assert(u >= 0 && v >= 0 && u < n && v < n && u != v);
        assert(!has_edge(u, v));
        if (u > v) std::swap(u, v);
        edges.emplace_back(u, v);
        adj[u].insert(std::lower_bound(adj[u].begin(), adj[u].end(), v), v);
        adj[v].insert(std::lower_bound(adj[v].begin(), adj[v].end(), u), u);
    }

    int m() const { return static_cast<int>(edges.size()); }
};

struct ParseResult {
    Graph graph;
    int duplicate_edges = 0;  // dropped duplicates, reported as a warning upstream
};

namespace detail {

inline std::runtime_error parse_error(int line, const std::string& what) {
    return std::runtime_error("line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

// Reads either a plain edge list ("n m" header, then m lines "u v", 0-based)
// or the .gr treewidth format ("p tw n m" header, 1-based endpoints, lines
// starting with 'c' are comments). The two are distinguished by the header.
// Self-loops and out-of-range endpoints are hard errors naming the line;
// repeated edges are dropped and counted.
inline ParseResult parse_graph(std::istream& in) {
    ParseResult res;
    int lineno = 0;
    std::string line;
    bool have_header = false;
    bool one_based = false;
    long declared_m = -1;
    long seen_m = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        if (!have_header) {
            if (line[0] == 'p') {
                std::string p, fmt;
                long n = -1, m = -1;
                ls >> p >> fmt >> n >> m;
                if (ls.fail() || (fmt != "tw" && fmt != "td"))
                    throw detail::parse_error(lineno, "bad problem line, expected 'p tw <n> <m>'");
                if (n < 0 || m < 0) throw detail::parse_error(lineno, "negative size in problem line");
                res.graph = Graph(static_cast<int>(n));
                declared_m = m;
                one_based = true;
            } else {
                long n = -1, m = -1;
                ls >> n >> m;
                if (ls.fail()) throw detail::parse_error(lineno, "expected header 'n m'");
                if (n < 0 || m < 0) throw detail::parse_error(lineno, "negative size in header");
                res.graph = Graph(static_cast<int>(n));
                declared_m = m;
            }
            have_header = true;
            continue;
        }
        long u = -1, v = -1;
        ls >> u >> v;
        if (ls.fail()) throw detail::parse_error(lineno, "expected edge 'u v'");
        if (seen_m >= declared_m) throw detail::parse_error(lineno, "more edges than declared in header");
        ++seen_m;
        if (one_based) { --u; --v; }
        if (u < 0 || v < 0 || u >= res.graph.n || v >= res.graph.n)
            throw detail::parse_error(lineno, "edge endpoint out of range");
        if (u == v) throw detail::parse_error(lineno, "self-loop");
        if (res.graph.has_edge(static_cast<int>(u), static_cast<int>(v)))
            ++res.duplicate_edges;
        else
            res.graph.add_edge(static_cast<int>(u), static_cast<int>(v));
    }
    if (!have_header) throw std::runtime_error("empty input, expected a graph header");
    if (seen_m + res.duplicate_edges < declared_m)
        throw std::runtime_error("fewer edges than declared in header (got " +
                                 std::to_string(seen_m + res.duplicate_edges) + ", expected " +
                                 std::to_string(declared_m) + ")");
    return res;
}

inline ParseResult parse_graph(const std::string& text) {
    std::istringstream in(text);
    return parse_graph(in);
}

// Plain 0-based edge list, the inverse of the first parse_graph flavor.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << g.n << ' ' << g.m() << '\n';
    for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

// Number of connected components of G[X].
inline int component_count(const Graph& g, const std::vector<int>& X) {
    std::vector<char> in_x(g.n, 0), seen(g.n, 0);
    for (int v : X) {
        assert(v >= 0 && v < g.n);
        in_x[v] = 1;
    }
    int comps = 0;
    std::vector<int> stack;
    for (int s : X) {
        if (seen[s]) continue;
        ++comps;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : g.adj[v])
                if (in_x[w] && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
    }
    return comps;
}

inline int edge_count_induced(const Graph& g, const std::vector<int>& X) {
    std::vector<char> in_x(g.n, 0);
    for (int v : X) in_x[v] = 1;
    int cnt = 0;
    for (int v : X)
        for (int w : g.adj[v])
            if (w > v && in_x[w]) ++cnt;
    return cnt;
}

// G[X] is a forest iff its component count equals |X| minus its edge count.
// That identity is what the counting DP leans on, so it is the primary route.
inline bool is_forest(const Graph& g, const std::vector<int>& X) {
    return component_count(g, X) == static_cast<int>(X.size()) - edge_count_induced(g, X);
}

// Independent cycle check by DFS, kept around so tests can pit the two
// routes against each other.
inline bool forest_check_by_dfs(const Graph& g, const std::vector<int>& X) {
    std::vector<char> in_x(g.n, 0);
    for (int v : X) in_x[v] = 1;
    std::vector<int> state(g.n, 0);  // 0 unseen, 1 done
    std::vector<std::pair<int, int>> stack;  // (vertex, parent)
    for (int s : X) {
        if (state[s]) continue;
        stack.emplace_back(s, -1);
        state[s] = 1;
        while (!stack.empty()) {
            auto [v, parent] = stack.back();
            stack.pop_back();
            bool skipped_parent = false;
            for (int w : g.adj[v]) {
                if (!in_x[w]) continue;
                if (w == parent && !skipped_parent) {
                    // one parent edge is legit, a second means a multi-path
                    skipped_parent = true;
                    continue;
                }
                if (state[w]) return false;  // back edge closes a cycle
                state[w] = 1;
                stack.emplace_back(w, v);
            }
        }
    }
    return true;
}

// Subgraph induced by the given vertices (deduped); vertex i of the result
// stands for keep[i] in the original, and keep is returned sorted.
inline std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g,
                                                           std::vector<int> keep) {
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    assert(keep.empty() || (keep.front() >= 0 && keep.back() < g.n));
    std::vector<int> local(g.n, -1);
    for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<int>(i);
    Graph sub(static_cast<int>(keep.size()));
    for (auto [u, v] : g.edges)
        if (local[u] >= 0 && local[v] >= 0) sub.add_edge(local[u], local[v]);
    return {std::move(sub), std::move(keep)};
}

using Matching = std::vector<std::pair<int, int>>;

struct MatchingReport {
    bool is_matching = false;
    bool is_induced = false;
    bool is_acyclic = false;
    int components = 0;  // of G[V(M)]
};

// Checks a candidate edge set and classifies the subgraph induced by its
// endpoints. A set that is not a matching (shared endpoint, or an edge absent
// from g) still gets the induced/acyclic flags for whatever V(M) it spans.
inline MatchingReport classify_matching(const Graph& g, const Matching& m) {
    MatchingReport rep;
    rep.is_matching = true;
    std::vector<char> used(g.n, 0);
    std::vector<int> verts;
    for (auto [u, v] : m) {
        if (u < 0 || v < 0 || u >= g.n || v >= g.n || u == v || !g.has_edge(u, v))
            rep.is_matching = false;
        for (int x : {u, v}) {
            if (x < 0 || x >= g.n) continue;
            if (used[x]) rep.is_matching = false;
            else {
                used[x] = 1;
                verts.push_back(x);
            }
        }
    }
    std::sort(verts.begin(), verts.end());
    rep.components = component_count(g, verts);
    rep.is_acyclic = is_forest(g, verts);
    // induced means the endpoints span no edges beyond the matching itself
    rep.is_induced = rep.is_matching &&
                     edge_count_induced(g, verts) == static_cast<int>(m.size());
    return rep;
}

}  // namespace twmatch
