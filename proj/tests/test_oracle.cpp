#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "twmatch/graph.hpp"
#include "twmatch/oracle.hpp"

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

}  // namespace

TEST_CASE("matching numbers on hand-checked graphs", "[oracle]") {
    SECTION("P4") {
        auto r = brute_matching_numbers(path(4));
        CHECK(r.mu == 2);
        CHECK(r.mu_acyclic == 2);
        CHECK(r.mu_induced == 1);
        CHECK(r.mu_discon.at(1) == 2);
        CHECK(r.mu_discon.at(2) == -1);  // endpoints of any matching stay connected
    }
    SECTION("C4") {
        auto r = brute_matching_numbers(cycle(4));
        CHECK(r.mu == 2);
        CHECK(r.mu_acyclic == 1);
        CHECK(r.mu_induced == 1);
    }
    SECTION("C6") {
        auto r = brute_matching_numbers(cycle(6));
        CHECK(r.mu == 3);
        CHECK(r.mu_acyclic == 2);
        CHECK(r.mu_induced == 2);
        CHECK(r.mu_discon.at(2) == 2);
    }
    SECTION("C7") {
        auto r = brute_matching_numbers(cycle(7));
        CHECK(r.mu == 3);
        CHECK(r.mu_acyclic == 3);  // dropping one vertex leaves a path
        CHECK(r.mu_induced == 2);
    }
    SECTION("P7") {
        auto r = brute_matching_numbers(path(7));
        CHECK(r.mu == 3);
        CHECK(r.mu_acyclic == 3);
        CHECK(r.mu_induced == 2);
    }
    SECTION("K4") {
        auto r = brute_matching_numbers(complete(4));
        CHECK(r.mu == 2);
        CHECK(r.mu_acyclic == 1);
        CHECK(r.mu_induced == 1);
        CHECK(r.mu_discon.at(2) == -1);
    }
    SECTION("star") {
        Graph g(4);
        g.add_edge(0, 1);
        g.add_edge(0, 2);
        g.add_edge(0, 3);
        auto r = brute_matching_numbers(g);
        CHECK(r.mu == 1);
        CHECK(r.mu_acyclic == 1);
        CHECK(r.mu_induced == 1);
    }
    SECTION("two disjoint edges") {
        Graph g(4);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        auto r = brute_matching_numbers(g);
        CHECK(r.mu == 2);
        CHECK(r.mu_acyclic == 2);
        CHECK(r.mu_induced == 2);
        CHECK(r.mu_discon.at(2) == 2);
        CHECK(r.mu_discon.at(3) == -1);
    }
    SECTION("edgeless") {
        auto r = brute_matching_numbers(Graph(3));
        CHECK(r.mu == 0);
        CHECK(r.mu_induced == 0);
        CHECK(r.mu_acyclic == 0);
        CHECK(r.mu_discon.at(1) == -1);
    }
}

TEST_CASE("oracle chain inequalities on random graphs", "[oracle][property]") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        int n = 1 + static_cast<int>(rng() % 9);
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 40) g.add_edge(u, v);
        auto r = brute_matching_numbers(g, 4);
        INFO("n=" << n << " m=" << g.m());
        CHECK(r.mu >= r.mu_acyclic);
        CHECK(r.mu_acyclic >= r.mu_induced);
        if (r.mu >= 1) CHECK(r.mu_discon.at(1) == r.mu);
        int prev = r.mu_discon.at(1);
        for (int c = 2; c <= 4; ++c) {
            int cur = r.mu_discon.at(c);
            if (prev == -1) CHECK(cur == -1);
            else CHECK(cur <= prev);
            prev = cur;
        }
        // an induced matching of size s spans exactly s components
        for (int c = 1; c <= std::min(4, r.mu_induced); ++c)
            CHECK(r.mu_discon.at(c) >= r.mu_induced);
    }
}

TEST_CASE("row-constrained set search", "[oracle]") {
    SECTION("single singleton set") {
        REQUIRE(brute_hitting_set(2, {{{1, 1}}}));
        auto sol = hitting_set_solution(2, {{{1, 1}}});
        REQUIRE(sol.has_value());
        CHECK((*sol)[0] == 1);
    }
    SECTION("contradictory singletons") {
        REQUIRE_FALSE(brute_hitting_set(2, {{{1, 1}}, {{1, 2}}}));
    }
    SECTION("solvable via one of two rows") {
        std::vector<RowSet> sets = {{{1, 1}, {2, 2}}, {{1, 2}, {2, 1}}, {{3, 3}}};
        auto sol = hitting_set_solution(3, sets);
        REQUIRE(sol.has_value());
        CHECK((*sol)[2] == 3);
    }
    SECTION("needs a coordinated choice") {
        // f(1)=2 kills S1, f(1)=1 forces f(2)=2 for S2, then S3 needs f(2)=1
        std::vector<RowSet> sets = {{{1, 1}}, {{1, 2}, {2, 2}}, {{2, 1}}};
        REQUIRE_FALSE(brute_hitting_set(2, sets));
    }
    SECTION("input validation") {
        CHECK_THROWS_AS(brute_hitting_set(7, {}), std::invalid_argument);
        CHECK_THROWS_AS(brute_hitting_set(2, {{{1, 3}}}), std::invalid_argument);
        CHECK_THROWS_AS(brute_hitting_set(2, {{{1, 1}, {1, 2}}}), std::invalid_argument);
        CHECK_THROWS_AS(brute_hitting_set(2, {{}}), std::invalid_argument);
    }
}

TEST_CASE("cut class enumeration on a single edge", "[oracle]") {
    Graph g(2);
    g.add_edge(0, 1);
    WeightAssignment wa;  // handmade so every bucket below is a singleton
    wa.n = 2;
    wa.w_member = {3, 5};
    wa.w_marker = {2, 7};
    const int w01 = wa.w_member[0] + wa.w_member[1];
    auto all = enumerate_cut_classes(g, wa);

    // empty selection: one candidate, trivially a covered forest, one cut
    auto zero = all.at({0, 0, 0, 0});
    CHECK(zero.candidates == 1);
    CHECK(zero.marked_forests == 1);
    CHECK(zero.cut_pairs == 1);

    // both endpoints, no marker: the single component is uncovered, and the
    // two all-on-one-side cuts are the only consistent ones
    auto unmarked = all.at({2, 1, 0, w01});
    CHECK(unmarked.candidates == 1);
    CHECK(unmarked.marked_forests == 0);
    CHECK(unmarked.cut_pairs == 2);

    // one marker: covered, and only the everything-left cut keeps the
    // marked component on the left side
    auto marked = all.at({2, 1, 1, w01 + wa.w_marker[0]});
    CHECK(marked.candidates == 1);
    CHECK(marked.marked_forests == 1);
    CHECK(marked.cut_pairs == 1);
}

TEST_CASE("cut parity identity on random graphs", "[oracle][property]") {
    // counting cuts mod 2 must agree with counting covered forests whenever
    // the marker budget C is at most A - B
    std::mt19937_64 rng(99);
    for (int iter = 0; iter < 40; ++iter) {
        int n = 2 + static_cast<int>(rng() % 5);
        Graph g(n);
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (rng() % 100 < 45) g.add_edge(u, v);
        auto wa = sample_weights(n, rng());
        auto all = enumerate_cut_classes(g, wa);
        for (const auto& [key, counts] : all) {
            auto [a, b, c, w] = key;
            if (c > a - b) continue;
            INFO("n=" << n << " A=" << a << " B=" << b << " C=" << c << " W=" << w);
            CHECK((counts.cut_pairs & 1) == (counts.marked_forests & 1));
        }
    }
}

TEST_CASE("weight sampling is deterministic and in range", "[oracle]") {
    auto a = sample_weights(10, 123);
    auto b = sample_weights(10, 123);
    auto c = sample_weights(10, 124);
    CHECK(a.w_member == b.w_member);
    CHECK(a.w_marker == b.w_marker);
    CHECK(a.w_member != c.w_member);
    for (int v = 0; v < 10; ++v) {
        CHECK(a.w_member[v] >= 1);
        CHECK(a.w_member[v] <= 60);
        CHECK(a.w_marker[v] >= 1);
        CHECK(a.w_marker[v] <= 60);
    }
}
