#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <vector>

#include "graph.hpp"
#include "tree_decomposition.hpp"

namespace twmatch {

// p x q grid, column-major ids: vertex (row r, column c) is c*p + r.
inline Graph grid_graph(int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("grid: need positive dimensions");
    Graph g(p * q);
    for (int c = 0; c < q; ++c)
        for (int r = 0; r < p; ++r) {
            if (r + 1 < p) g.add_edge(c * p + r, c * p + r + 1);
            if (c + 1 < q) g.add_edge(c * p + r, (c + 1) * p + r);
        }
    return g;
}

// The staircase sweep: between columns c and c+1, bag i holds the lower part
// of column c and the upper part of column c+1, so every bag has p+1 vertices
// and the width is exactly p. With spurs enabled, a redundant copy of the
// last bag of each boundary hangs off the chain; the copies change nothing
// about the decomposition but give the nice expansion a join per column,
// which is what lets benchmarks exercise both join strategies on grids.
inline TreeDecomposition grid_decomposition(int p, int q, bool join_spurs = false) {
    if (p < 1 || q < 1) throw std::invalid_argument("grid: need positive dimensions");
    TreeDecomposition td;
    if (q == 1) {
        std::vector<int> bag(p);
        for (int r = 0; r < p; ++r) bag[r] = r;
        td.bags.push_back(bag);
        return td;
    }
    int prev = -1;
    for (int c = 0; c + 1 < q; ++c) {
        for (int i = 0; i < p; ++i) {
            std::vector<int> bag;
            for (int r = i; r < p; ++r) bag.push_back(c * p + r);
            for (int r = 0; r <= i; ++r) bag.push_back((c + 1) * p + r);
            std::sort(bag.begin(), bag.end());
            td.bags.push_back(bag);
            const int id = static_cast<int>(td.bags.size()) - 1;
            if (prev >= 0) td.edges.push_back({prev, id});
            prev = id;
        }
        if (join_spurs) {
            td.bags.push_back(td.bags[prev]);
            td.edges.push_back({prev, static_cast<int>(td.bags.size()) - 1});
        }
    }
    return td;
}

}  // namespace twmatch
