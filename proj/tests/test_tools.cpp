#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "treedist/generators.hpp"
#include "treedist/isomorphism.hpp"
#include "treedist/matching.hpp"
#include "treedist/oracles.hpp"
#include "treedist/perm_distance.hpp"
#include "treedist/reduction.hpp"

#include "test_support.hpp"

using namespace treedist;
using test_support::forest;

TEST_CASE("degree reduction leaves small-degree graphs alone") {
    auto g = test_support::random_bipartite(4, 4, 6, 1);
    bool small = true;
    std::vector<int> ld(5, 0), rd(5, 0);
    for (auto [l, r] : g.edges) {
        if (++ld[l] > 3 || ++rd[r] > 3) small = false;
    }
    if (small) {
        auto reduced = degree_reduce(g);
        CHECK(reduced.splits == 0);
        CHECK(reduced.graph.edges == g.edges);
    }
}

TEST_CASE("degree reduction splits a four-star once") {
    BipartiteGraph star{1, 4, {{1, 1}, {1, 2}, {1, 3}, {1, 4}}};
    auto reduced = degree_reduce(star);
    CHECK(reduced.splits == 1);
    CHECK(max_matching(star).size() == 1);
    CHECK(max_matching(reduced.graph).size() == 2);
    for (auto side : {0, 1}) {
        std::vector<int> deg(1 + (side ? reduced.graph.right_count : reduced.graph.left_count), 0);
        for (auto [l, r] : reduced.graph.edges) ++deg[side ? r : l];
        for (int d : deg) CHECK(d <= 3);
    }
}

TEST_CASE("degree reduction offsets the matching size by the split count") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto g = test_support::random_bipartite(1 + seed % 6, 1 + (seed / 6) % 6,
                                                static_cast<int>(seed % 20), seed);
        auto reduced = degree_reduce(g);
        std::vector<int> ld(reduced.graph.left_count + 1, 0), rd(reduced.graph.right_count + 1, 0);
        for (auto [l, r] : reduced.graph.edges) {
            ++ld[l];
            ++rd[r];
        }
        for (int d : ld) CHECK(d <= 3);
        for (int d : rd) CHECK(d <= 3);
        CHECK(max_matching(reduced.graph).size() - reduced.splits == max_matching(g).size());
    }
}

TEST_CASE("the empty graph becomes two tiny isomorphic trees") {
    BipartiteGraph empty{3, 3, {}};
    auto out = matching_to_trees(empty);
    CHECK(out.edge_count == 0);
    CHECK(out.t1.node_count() == 2);
    CHECK(isomorphic(out.t1, out.t2));
    CHECK(permutation_distance(out.t1, out.t2) == 2);  // (7*0+2) - 0
}

TEST_CASE("a single edge encodes matching size one") {
    BipartiteGraph one{1, 1, {{1, 1}}};
    auto out = matching_to_trees(one);
    CHECK(out.edge_count == 1);
    CHECK(out.t1.node_count() == 9);
    CHECK(isomorphic(out.t1, out.t2));
    long long d = oracle_perm_distance(out.t1, out.t2);
    CHECK(d == 9 - 1);
    CHECK(permutation_distance(out.t1, out.t2) == d);
}

TEST_CASE("reduction trees encode the matching affinely per edge count") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        auto g = test_support::random_bipartite(1 + seed % 5, 1 + (seed / 5) % 5,
                                                1 + static_cast<int>(seed % 9), seed + 3);
        auto reduced = degree_reduce(g);
        auto out = matching_to_trees(reduced.graph);
        CHECK(isomorphic(out.t1, out.t2));
        int m = out.edge_count;
        CHECK(out.t1.node_count() == 7 * m + 2);
        long long mm = max_matching(reduced.graph).size();
        CHECK(permutation_distance(out.t1, out.t2) == 7 * m + 2 - mm);
    }
}

TEST_CASE("reduction audit: extras per root decompose as 1 + m + 2m") {
    auto g = test_support::random_bipartite(3, 3, 5, 11);
    auto reduced = degree_reduce(g);
    auto out = matching_to_trees(reduced.graph);
    const int m = out.edge_count;
    auto ch1 = out.t1.children_lists();
    // root children: m side nodes with three leaf children each, 3m+1 extras
    int side_nodes = 0, extras = 0;
    int other_side_labels = 0, other_pads = 0, other_root = 0;
    for (int c : ch1[out.root1_label()]) {
        if (!ch1[c].empty()) {
            ++side_nodes;
            CHECK(ch1[c].size() == 3);
        } else {
            ++extras;
            if (c > m && c <= 2 * m) ++other_side_labels;
            if (c > 5 * m && c <= 7 * m) ++other_pads;
            if (c == out.root2_label()) ++other_root;
        }
    }
    CHECK(side_nodes == m);
    CHECK(extras == 3 * m + 1);
    CHECK(other_root == 1);
    CHECK(other_side_labels == m);
    CHECK(other_pads == 2 * m);
}

TEST_CASE("reduction rejects degrees above three") {
    BipartiteGraph star{1, 4, {{1, 1}, {1, 2}, {1, 3}, {1, 4}}};
    CHECK_THROWS_AS(matching_to_trees(star), PreconditionError);
}

TEST_CASE("permutation oracle") {
    auto t = random_tree(7, 3);
    CHECK(oracle_perm_distance(t, t) == 0);
    CHECK(oracle_perm_distance(forest({0, 1, 1}), forest({2, 0, 2})) == 2);
    CHECK_THROWS_AS(oracle_perm_distance(forest({0, 1, 2}), forest({0, 1, 1})),
                    NotIsomorphicError);
    CHECK_THROWS_AS(oracle_perm_distance(random_tree(10, 0), random_tree(10, 0)),
                    PreconditionError);  // above the cap
}

TEST_CASE("rearrangement oracle") {
    auto f = random_forest(6, 2, 8);
    CHECK(oracle_rearrangement(f, f) == 0);
    CHECK(oracle_rearrangement(forest({0, 1, 1}), forest({0, 3, 1})) == 1);
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        int n = 2 + static_cast<int>(seed % 5);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 2), seed);
        auto f2 = random_forest(n, 1, seed + 10000);
        CHECK(oracle_rearrangement(f1, f2) == oracle_rearrangement(f2, f1));
    }
}

TEST_CASE("anchored pairs stay below the leaf count") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        int n = 2 + static_cast<int>(seed % 2);
        auto t1 = random_tree(n, seed);
        auto t2 = random_tree(n, seed + 321);
        if (t1.root() != t2.root()) {
            std::vector<std::pair<int, int>> swap{{t2.root(), t1.root()},
                                                  {t1.root(), t2.root()}};
            t2 = apply_permutation(t2, Permutation::from_pairs(n, swap));
        }
        CHECK(oracle_rearrangement(anchor(t1), anchor(t2)) < n);
    }
}

TEST_CASE("anchoring equates the two oracle distances on a sample") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        int n = 2 + static_cast<int>(seed % 2);
        auto t1 = random_tree(n, seed + 7);
        auto t2 = random_tree(n, seed + 9);
        if (t1.root() != t2.root()) {
            std::vector<std::pair<int, int>> swap{{t2.root(), t1.root()},
                                                  {t1.root(), t2.root()}};
            t2 = apply_permutation(t2, Permutation::from_pairs(n, swap));
        }
        CHECK(oracle_rearrangement(anchor(t1), anchor(t2)) ==
              oracle_tree_distance(anchor(t1), anchor(t2)));
    }
}

TEST_CASE("generators are deterministic and respect their parameters") {
    CHECK(random_tree(1, 5) == forest({0}));
    CHECK(random_tree(40, 9) == random_tree(40, 9));
    CHECK(random_forest(12, 4, 2).roots().size() == 4);
    auto t = random_tree(15, 4);
    CHECK(random_relabel(t, 0, 1) == t);
    CHECK(random_relabel(t, 7, 2) == random_relabel(t, 7, 2));
    CHECK(isomorphic(random_relabel(t, 15, 3), t));
    CHECK_THROWS_AS(random_forest(3, 5, 1), ValidationError);
}
