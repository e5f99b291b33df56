#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "twmatch/cdisc_dp.hpp"
#include "twmatch/graph.hpp"
#include "twmatch/nice_decomposition.hpp"
#include "twmatch/oracle.hpp"
#include "twmatch/reduction.hpp"
#include "twmatch/tree_decomposition.hpp"

using namespace twmatch;

TEST_CASE("star gadget attaches one vertex of prescribed degree") {
    Graph g(2);
    g.add_edge(0, 1);
    const int u = add_star_gadget(g, {0});
    CHECK(u == 2);
    CHECK(g.n == 3);
    CHECK(g.has_edge(0, 2));
    CHECK_FALSE(g.has_edge(1, 2));

    Graph p(3);
    p.add_edge(0, 1);
    p.add_edge(1, 2);
    const int w = add_star_gadget(p, {0, 1, 2});
    CHECK(p.adj[w].size() == 3);

    CHECK_THROWS_AS(add_star_gadget(g, {}), std::invalid_argument);
    CHECK_THROWS_AS(add_star_gadget(g, {7}), std::invalid_argument);
}

TEST_CASE("the two-row single-set instance is built exactly") {
    const ReductionInstance inst = build_reduction(2, {{{1, 1}}});
    CHECK(inst.graph.n == 16);
    CHECK(inst.graph.edges.size() == 19);
    CHECK(inst.ell == 7);
    CHECK(inst.c == 2);
    CHECK(inst.labels.size() == 16);
    CHECK(inst.labels[0] == "vL_1");
    CHECK(inst.labels[4] == "vX_S1_1_1");
    CHECK(inst.labels[9] == "uL_1");
    CHECK(inst.labels[15] == "uX_P2");

    CHECK(validate_td(inst.graph, inst.path_decomposition).empty());
    CHECK(inst.path_decomposition.width() == 6);
    std::vector<int> deg(inst.path_decomposition.bags.size(), 0);
    for (auto [a, b] : inst.path_decomposition.edges) {
        ++deg[a];
        ++deg[b];
    }
    CHECK(*std::max_element(deg.begin(), deg.end()) <= 2);

    const EdgePartition part = classify_edges(inst);
    CHECK(part.pendant.size() == 4);
    CHECK(part.center.size() == 5);
    CHECK(part.selector.size() == 10);
}

TEST_CASE("tampered instances are refused") {
    ReductionInstance inst = build_reduction(2, {{{1, 1}}});
    CHECK_NOTHROW(classify_edges(inst));
    inst.graph.add_edge(0, 2);  // row selectors are never adjacent to columns
    CHECK_THROWS_AS(classify_edges(inst), std::invalid_argument);
}

TEST_CASE("bad families are rejected") {
    CHECK_THROWS_AS(build_reduction(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(9, {}), std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(2, std::vector<RowSet>(21, {{1, 1}})),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(2, {RowSet{}}), std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(2, {{{1, 1}, {1, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(2, {{{3, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(build_reduction(2, {{{1, 0}}}), std::invalid_argument);
}

TEST_CASE("witness matchings have exactly k components") {
    const ReductionInstance inst = build_reduction(2, {{{1, 1}}});
    const auto f = hitting_set_solution(2, {{{1, 1}}});
    REQUIRE(f.has_value());
    const Matching m = witness_matching(inst, *f);
    CHECK(m.size() == 7);
    const MatchingReport rep = classify_matching(inst.graph, m);
    CHECK(rep.is_matching);
    CHECK(rep.components == 2);

    // a selection that misses a set is not a witness
    CHECK_THROWS_AS(witness_matching(build_reduction(2, {{{1, 1}}, {{1, 2}}}),
                                     std::vector<int>{1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(witness_matching(inst, std::vector<int>{1}), std::invalid_argument);
    CHECK_THROWS_AS(witness_matching(inst, std::vector<int>{1, 3}), std::invalid_argument);
}

TEST_CASE("swapping a selector edge for its pendant partner keeps components") {
    const ReductionInstance inst = build_reduction(2, {{{1, 1}}});
    // saturating a selector through an element vertex glues parts together;
    // retreating to the pendant gadget can only split them apart
    const Matching before = {{inst.vL[0], inst.set_vertices[0][0]},
                             {inst.vR[0], inst.uR[0]}};
    const Matching after = {{inst.vL[0], inst.uL[0]}, {inst.vR[0], inst.uR[0]}};
    const MatchingReport rb = classify_matching(inst.graph, before);
    const MatchingReport ra = classify_matching(inst.graph, after);
    REQUIRE(rb.is_matching);
    REQUIRE(ra.is_matching);
    CHECK(rb.components == 1);
    CHECK(ra.components == 2);
    CHECK(ra.components >= rb.components);
}

TEST_CASE("two-row families decide exactly like the hitting set") {
    // every nonempty row-constrained subset of the 2x2 grid
    std::vector<RowSet> pool;
    for (int j = 1; j <= 2; ++j) {
        pool.push_back({{1, j}});
        pool.push_back({{2, j}});
    }
    for (int j1 = 1; j1 <= 2; ++j1)
        for (int j2 = 1; j2 <= 2; ++j2) pool.push_back({{1, j1}, {2, j2}});
    REQUIRE(pool.size() == 8);

    int families = 0;
    for (int mask = 1; mask < (1 << 8); ++mask) {
        if (__builtin_popcount(mask) > 3) continue;
        std::vector<RowSet> fam;
        for (int b = 0; b < 8; ++b)
            if (mask >> b & 1) fam.push_back(pool[b]);
        ++families;
        INFO("family mask " << mask);
        const bool hs = brute_hitting_set(2, fam);
        const ReductionInstance inst = build_reduction(2, fam);
        const NiceDecomposition nd =
            make_nice_deferred(inst.graph, inst.path_decomposition);
        const CdiscResult res = solve_cdisc(inst.graph, nd, inst.ell, inst.c);
        CHECK(res.yes == hs);
        if (hs) {
            const Matching m = witness_matching(inst, *hitting_set_solution(2, fam));
            const MatchingReport rep = classify_matching(inst.graph, m);
            CHECK(rep.is_matching);
            CHECK(static_cast<int>(m.size()) == inst.ell);
            CHECK(rep.components >= inst.c);
        }
    }
    CHECK(families == 92);
}

TEST_CASE("the smallest instances agree with the exhaustive reference three ways") {
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            INFO("singleton (" << i << "," << j << ")");
            const std::vector<RowSet> fam = {{{i, j}}};
            const ReductionInstance inst = build_reduction(2, fam);
            REQUIRE(inst.graph.n == 16);
            const bool hs = brute_hitting_set(2, fam);
            const int mu2 = brute_matching_numbers(inst.graph, 2).mu_discon.at(2);
            const NiceDecomposition nd =
                make_nice_deferred(inst.graph, inst.path_decomposition);
            const CdiscResult res = solve_cdisc(inst.graph, nd, inst.ell, inst.c);
            CHECK(hs);  // one set, hit by picking its column
            CHECK(res.yes == hs);
            CHECK((mu2 >= inst.ell) == hs);
            CHECK(res.matching_size() == mu2);
        }
}

TEST_CASE("three-row families produce verifiable witnesses") {
    std::mt19937 rng(146);
    int yes_seen = 0;
    for (int round = 0; round < 50; ++round) {
        INFO("round " << round);
        const int m = 1 + static_cast<int>(rng() % 4);
        std::vector<RowSet> fam;
        for (int s = 0; s < m; ++s) {
            RowSet set;
            while (set.empty())
                for (int i = 1; i <= 3; ++i)
                    if (rng() % 2 == 0) set.push_back({i, 1 + static_cast<int>(rng() % 3)});
            fam.push_back(set);
        }
        const auto f = hitting_set_solution(3, fam);
        const ReductionInstance inst = build_reduction(3, fam);
        CHECK(validate_td(inst.graph, inst.path_decomposition).empty());
        CHECK(inst.path_decomposition.width() == 9);
        if (!f.has_value()) continue;
        ++yes_seen;
        const Matching w = witness_matching(inst, *f);
        const MatchingReport rep = classify_matching(inst.graph, w);
        CHECK(rep.is_matching);
        CHECK(static_cast<int>(w.size()) == inst.ell);
        CHECK(rep.components == inst.c);
    }
    CHECK(yes_seen >= 20);  // most random families are hittable
}
