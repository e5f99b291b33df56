#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "twmatch/graph.hpp"
#include "twmatch/nice_decomposition.hpp"
#include "twmatch/tree_decomposition.hpp"

using namespace twmatch;

namespace {

Graph path(int n) {
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph cycle(int n) {
    Graph g = path(n);
    g.add_edge(0, n - 1);
    return g;
}

Graph complete(int n) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

Graph random_graph(std::mt19937_64& rng, int n, int percent) {
    Graph g(n);
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng() % 100 < static_cast<unsigned>(percent)) g.add_edge(u, v);
    return g;
}

}  // namespace

TEST_CASE("greedy elimination hits known widths", "[decomp]") {
    CHECK(min_fill_decompose(path(6)).width() == 1);
    CHECK(min_fill_decompose(cycle(4)).width() == 2);
    CHECK(min_fill_decompose(cycle(7)).width() == 2);
    CHECK(min_fill_decompose(complete(4)).width() == 3);
    CHECK(min_fill_decompose(complete(7)).width() == 6);
    CHECK(min_fill_decompose(Graph(5)).width() == 0);  // isolated vertices, singleton bags
    CHECK(min_fill_decompose(Graph(0)).width() == -1);

    Graph tree(7);  // a binary tree
    tree.add_edge(0, 1);
    tree.add_edge(0, 2);
    tree.add_edge(1, 3);
    tree.add_edge(1, 4);
    tree.add_edge(2, 5);
    tree.add_edge(2, 6);
    CHECK(min_fill_decompose(tree).width() == 1);

    Graph two_parts(6);  // disconnected input still yields one tree
    two_parts.add_edge(0, 1);
    two_parts.add_edge(1, 2);
    two_parts.add_edge(3, 4);
    two_parts.add_edge(4, 5);
    auto td = min_fill_decompose(two_parts);
    CHECK(td.width() == 1);
    CHECK(validate_td(two_parts, td).empty());
}

TEST_CASE("decomposition validator names violations", "[decomp]") {
    Graph g = path(3);
    SECTION("valid") {
        TreeDecomposition td;
        td.bags = {{0, 1}, {1, 2}};
        td.edges = {{0, 1}};
        CHECK(validate_td(g, td).empty());
    }
    SECTION("vertex not covered") {
        TreeDecomposition td;
        td.bags = {{0, 1}, {1}};
        td.edges = {{0, 1}};
        auto bad = validate_td(g, td);
        REQUIRE_FALSE(bad.empty());
        CHECK(bad[0].find("vertex 2") != std::string::npos);
    }
    SECTION("edge not covered") {
        TreeDecomposition td;
        td.bags = {{0, 1}, {2}};
        td.edges = {{0, 1}};
        auto bad = validate_td(g, td);
        REQUIRE_FALSE(bad.empty());
        CHECK(bad[0].find("edge 1-2") != std::string::npos);
    }
    SECTION("vertex occurrences disconnected") {
        TreeDecomposition td;
        td.bags = {{0, 1}, {1, 2}, {0}};
        td.edges = {{0, 1}, {1, 2}};
        auto bad = validate_td(g, td);
        REQUIRE_FALSE(bad.empty());
        CHECK(bad[0].find("vertex 0") != std::string::npos);
    }
    SECTION("not a tree") {
        TreeDecomposition td;
        td.bags = {{0, 1}, {1, 2}};
        td.edges = {};
        auto bad = validate_td(g, td);
        REQUIRE_FALSE(bad.empty());
        CHECK(bad[0].find("structure") != std::string::npos);
    }
}

TEST_CASE("td file format round trips", "[decomp][io]") {
    Graph g = cycle(4);
    auto td = min_fill_decompose(g);
    std::ostringstream out;
    write_td(out, td, g.n);
    auto parsed = parse_td(out.str());
    CHECK(parsed.declared_n == 4);
    CHECK(parsed.declared_width == td.width());
    CHECK(parsed.td.bags == td.bags);
    CHECK(parsed.td.edges == td.edges);
    CHECK(validate_td(g, parsed.td).empty());
}

TEST_CASE("td parse errors name the line", "[decomp][io]") {
    using Catch::Matchers::ContainsSubstring;
    CHECK_THROWS_WITH(parse_td("b 1 2\n"), ContainsSubstring("header first"));
    CHECK_THROWS_WITH(parse_td("s td 1 1 2\nb 2 1\n"), ContainsSubstring("bag index"));
    CHECK_THROWS_WITH(parse_td("s td 1 1 2\nb 1 3\n"), ContainsSubstring("out of range"));
    CHECK_THROWS_WITH(parse_td("s td 2 1 2\nb 1 1\nb 1 2\n"), ContainsSubstring("twice"));
    CHECK_THROWS_WITH(parse_td("s td 2 2 2\nb 1 1\nb 2 2\n1 5\n"),
                      ContainsSubstring("line 4"));
}

TEST_CASE("nice expansion on a triangle from a handmade decomposition", "[nice]") {
    Graph g = complete(3);
    TreeDecomposition td;
    td.bags = {{0, 1, 2}};
    auto nd = make_nice_deferred(g, td);
    CHECK(validate_nice(g, nd).empty());
    CHECK(nd.width() == 2);
    CHECK(nd.nodes.back().bag.empty());
    int edge_nodes = 0;
    for (const auto& x : nd.nodes)
        if (x.kind == NodeKind::IntroduceEdge) ++edge_nodes;
    CHECK(edge_nodes == 3);
}

TEST_CASE("nice expansion rejects invalid decompositions", "[nice]") {
    Graph g = path(3);
    TreeDecomposition td;
    td.bags = {{0, 1}};  // misses vertex 2 and edge 1-2
    CHECK_THROWS_AS(make_nice_deferred(g, td), std::invalid_argument);
}

TEST_CASE("nice expansion of the empty and edgeless graphs", "[nice]") {
    auto nd0 = make_nice_deferred(Graph(0), min_fill_decompose(Graph(0)));
    CHECK(nd0.nodes.size() == 1);
    CHECK(nd0.nodes[0].kind == NodeKind::Leaf);

    Graph g(3);
    auto nd = make_nice_deferred(g, min_fill_decompose(g));
    CHECK(validate_nice(g, nd).empty());
}

TEST_CASE("nice expansion keeps width and passes validation on random graphs",
          "[nice][property]") {
    std::mt19937_64 rng(31337);
    for (int iter = 0; iter < 60; ++iter) {
        int n = 1 + static_cast<int>(rng() % 30);
        Graph g = random_graph(rng, n, 12 + static_cast<int>(rng() % 25));
        auto td = min_fill_decompose(g);
        REQUIRE(validate_td(g, td).empty());
        auto nd = make_nice_deferred(g, td);
        INFO("n=" << n << " m=" << g.m() << " width=" << td.width());
        auto bad = validate_nice(g, nd);
        if (!bad.empty()) INFO("first violation: " << bad[0]);
        REQUIRE(bad.empty());
        REQUIRE(nd.width() == td.width());
    }
}

TEST_CASE("nice validator catches tampering", "[nice]") {
    Graph g = cycle(5);
    auto nd = make_nice_deferred(g, min_fill_decompose(g));
    REQUIRE(validate_nice(g, nd).empty());
    SECTION("dropping an edge node's edge") {
        for (auto& x : nd.nodes)
            if (x.kind == NodeKind::IntroduceEdge) {
                x.kind = NodeKind::IntroduceVertex;  // now malformed on two counts
                break;
            }
        CHECK_FALSE(validate_nice(g, nd).empty());
    }
    SECTION("emptying the root bag's child chain") {
        nd.nodes.back().bag.push_back(0);
        CHECK_FALSE(validate_nice(g, nd).empty());
    }
}

TEST_CASE("debug writer mentions every node", "[nice]") {
    Graph g = path(4);
    auto nd = make_nice_deferred(g, min_fill_decompose(g));
    std::ostringstream os;
    write_nice_debug(os, nd);
    std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(nd.nodes.size()));
    CHECK(text.find("join") == std::string::npos);  // a path needs no joins
    CHECK(text.find("forget") != std::string::npos);
}
