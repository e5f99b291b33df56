#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "twmatch/graph.hpp"

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

}  // namespace

TEST_CASE("edge list parsing round trips", "[graph][io]") {
    const std::string text = "4 3\n0 1\n1 2\n2 3\n";
    auto res = parse_graph(text);
    REQUIRE(res.graph.n == 4);
    REQUIRE(res.graph.m() == 3);
    REQUIRE(res.duplicate_edges == 0);
    REQUIRE(res.graph.has_edge(1, 2));
    REQUIRE_FALSE(res.graph.has_edge(0, 2));

    std::ostringstream out;
    write_edge_list(out, res.graph);
    auto again = parse_graph(out.str());
    REQUIRE(again.graph.edges == res.graph.edges);
}

TEST_CASE("pace format with comments and 1-based endpoints", "[graph][io]") {
    const std::string text = "c generated\np tw 3 2\n1 2\nc mid comment\n2 3\n";
    auto res = parse_graph(text);
    REQUIRE(res.graph.n == 3);
    REQUIRE(res.graph.has_edge(0, 1));
    REQUIRE(res.graph.has_edge(1, 2));
    REQUIRE_FALSE(res.graph.has_edge(0, 2));
}

TEST_CASE("parse errors name the offending line", "[graph][io]") {
    using Catch::Matchers::ContainsSubstring;
    CHECK_THROWS_WITH(parse_graph("2 1\n0 5\n"), ContainsSubstring("line 2"));
    CHECK_THROWS_WITH(parse_graph("2 1\n1 1\n"), ContainsSubstring("self-loop"));
    CHECK_THROWS_WITH(parse_graph("3 2\n0 1\n"), ContainsSubstring("fewer edges"));
    CHECK_THROWS_WITH(parse_graph("2 1\n0 1\n1 0\n"), ContainsSubstring("more edges"));
    CHECK_THROWS_WITH(parse_graph(""), ContainsSubstring("empty"));
    CHECK_THROWS_WITH(parse_graph("p xx 3 2\n"), ContainsSubstring("problem line"));
}

TEST_CASE("duplicate edges are dropped and counted", "[graph][io]") {
    auto res = parse_graph("3 3\n0 1\n1 0\n1 2\n");
    REQUIRE(res.duplicate_edges == 1);
    REQUIRE(res.graph.m() == 2);
}

TEST_CASE("component count over vertex subsets", "[graph]") {
    Graph g = path(6);
    CHECK(component_count(g, {0, 1, 2, 3, 4, 5}) == 1);
    CHECK(component_count(g, {0, 1, 3, 4}) == 2);
    CHECK(component_count(g, {0, 2, 4}) == 3);
    CHECK(component_count(g, {}) == 0);
}

TEST_CASE("forest recognition agrees between counting and dfs", "[graph][property]") {
    std::mt19937_64 rng(20260822);
    for (int iter = 0; iter < 300; ++iter) {
        int n = 2 + static_cast<int>(rng() % 9);
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 35) g.add_edge(u, v);
        std::vector<int> x;
        for (int v = 0; v < n; ++v)
            if (rng() % 2) x.push_back(v);
        bool by_count = is_forest(g, x);
        bool by_dfs = forest_check_by_dfs(g, x);
        INFO("n=" << n << " m=" << g.m() << " |X|=" << x.size());
        REQUIRE(by_count == by_dfs);
    }
}

TEST_CASE("matching classification on the canonical small graphs", "[graph]") {
    SECTION("path on four vertices") {
        Graph g = path(4);
        auto full = classify_matching(g, {{0, 1}, {2, 3}});
        CHECK(full.is_matching);
        CHECK(full.is_acyclic);
        CHECK_FALSE(full.is_induced);  // the middle edge 1-2 is also induced
        CHECK(full.components == 1);
        auto single = classify_matching(g, {{0, 1}});
        CHECK(single.is_induced);
        CHECK(single.components == 1);
    }
    SECTION("four cycle") {
        Graph g = cycle(4);
        auto full = classify_matching(g, {{0, 1}, {2, 3}});
        CHECK(full.is_matching);
        CHECK_FALSE(full.is_acyclic);  // endpoints span the whole cycle
        CHECK_FALSE(full.is_induced);
        CHECK(full.components == 1);
    }
    SECTION("two disjoint edges") {
        Graph g(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        auto full = classify_matching(g, {{0, 1}, {2, 3}});
        CHECK(full.is_matching);
        CHECK(full.is_induced);
        CHECK(full.is_acyclic);
        CHECK(full.components == 2);
    }
    SECTION("not a matching") {
        Graph g = path(4);
        auto bad = classify_matching(g, {{0, 1}, {1, 2}});
        CHECK_FALSE(bad.is_matching);
        auto absent = classify_matching(g, {{0, 2}});
        CHECK_FALSE(absent.is_matching);
    }
    SECTION("empty matching") {
        Graph g = path(4);
        auto rep = classify_matching(g, {});
        CHECK(rep.is_matching);
        CHECK(rep.is_induced);
        CHECK(rep.is_acyclic);
        CHECK(rep.components == 0);
    }
}
