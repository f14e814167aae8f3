#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>

#include "treedist/generators.hpp"
#include "treedist/oracles.hpp"
#include "treedist/rearrange.hpp"

#include "test_support.hpp"

using namespace treedist;
using test_support::forest;

TEST_CASE("family partition") {
    CHECK(family_partition(forest({0, 1, 1}), forest({0, 3, 1})) ==
          std::set<std::pair<int, int>>{{1, 3}});
    auto f = forest({0, 1, 2});
    CHECK(family_partition(f, f).empty());
    CHECK_THROWS_AS(family_partition(forest({0}), forest({0, 1})), ValidationError);
}

TEST_CASE("migrations graph") {
    CHECK(migrations_graph(forest({0, 1, 1}), forest({0, 3, 1})) ==
          std::set<std::pair<int, int>>{{2, 3}});
    auto f = forest({0, 1, 2});
    CHECK(migrations_graph(f, f).empty());
}

TEST_CASE("migrations matching is a maximum matching of the migrations graph") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 2), seed);
        auto f2 = random_forest(n, 1 + static_cast<int>((seed / 2) % 2), seed + 1000);
        auto mg = migrations_graph(f1, f2);
        auto matching = migrations_max_matching(f1, f2);
        // valid: edges of the graph, vertex disjoint
        std::set<int> used;
        for (auto e : matching.edges) {
            CHECK(mg.count(e));
            CHECK(used.insert(e.first).second);
            CHECK(used.insert(e.second).second);
        }
        CHECK(matching.size() == test_support::brute_general_matching(mg));
    }
}

TEST_CASE("any migrations matching lower-bounds the rearrangement oracle") {
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 3), seed + 7);
        auto f2 = random_forest(n, 1 + static_cast<int>(seed % 2), seed + 77);
        CHECK(migrations_max_matching(f1, f2).size() <= oracle_rearrangement(f1, f2));
    }
}

TEST_CASE("pair partition examples") {
    auto p = pair_partition({3, 3, 3, 2, 7});
    CHECK(p.pairs.size() == 2);
    CHECK(p.leftover == std::vector<int>{3});

    auto all_same = pair_partition({5, 5, 5, 5});
    CHECK(all_same.pairs.empty());
    CHECK(all_same.leftover.size() == 4);

    auto two = pair_partition({1, 2});
    CHECK(two.pairs.size() == 1);
    CHECK(two.leftover.empty());

    CHECK(pair_partition({}).pairs.empty());
}

TEST_CASE("pair partition matches the bound on random multisets") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 3000; ++trial) {
        int size = static_cast<int>(rng() % 12);
        std::vector<int> s(size);
        for (int& x : s) x = 1 + static_cast<int>(rng() % 5);
        auto result = pair_partition(s);
        int freq = s.empty() ? 0 : multiset_mode(s).second;
        int expected = s.empty() ? 0 : std::min<int>(size - freq, size / 2);
        CHECK(static_cast<int>(result.pairs.size()) == expected);
        CHECK(static_cast<int>(result.leftover.size()) == size - 2 * expected);
        for (auto [x, y] : result.pairs) CHECK(x != y);
        // pairs + leftover rebuild the multiset
        std::vector<int> rebuilt = result.leftover;
        for (auto [x, y] : result.pairs) {
            rebuilt.push_back(x);
            rebuilt.push_back(y);
        }
        std::sort(rebuilt.begin(), rebuilt.end());
        std::sort(s.begin(), s.end());
        CHECK(rebuilt == s);
    }
}

TEST_CASE("step 1 makes both disagreeing parents roots") {
    auto s = step1(forest({0, 1, 1}), forest({0, 3, 1}));
    CHECK(s.forest == forest({0, 1, 0}));
    REQUIRE(s.cuts.size() == 1);
    CHECK(s.cuts[0] == CutOp{3, 1});

    auto f = forest({0, 1, 2});
    CHECK(step1(f, f).cuts.empty());

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1, seed);
        auto f2 = random_forest(n, 1, seed + 999);
        auto r = step1(f1, f2);
        CHECK(static_cast<long long>(r.cuts.size()) <=
              2 * static_cast<long long>(family_partition(f1, f2).size()));
        for (int i = 1; i <= n; ++i) {
            int a = r.forest.parent(i), b = f2.parent(i);
            if (a != 0 && b != 0 && a != b) {
                CHECK(r.forest.is_root(a));
                CHECK(r.forest.is_root(b));
            }
        }
    }
}

TEST_CASE("step 2 keeps only the most common target parent") {
    // children 2, 5, 6 of node 1 whose target parents are {3, 3, 7}: one cut
    auto f1 = forest({0, 1, 0, 0, 1, 1, 0});
    auto f2 = forest({0, 3, 0, 0, 3, 7, 0});
    auto s = step2(f1, f2);
    REQUIRE(s.cuts.size() == 1);
    CHECK(s.cuts[0] == CutOp{6, 1});
    CHECK(s.rep[1] == 3);

    // all children share a target parent: nothing to cut
    auto uniform = step2(forest({0, 1, 1, 0}), forest({0, 4, 4, 0}));
    CHECK(uniform.cuts.empty());
    CHECK(uniform.rep[1] == 4);

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 2), seed);
        auto f2 = random_forest(n, 1, seed + 5);
        auto r = step2(f1, f2);
        auto kept = r.forest.children_lists();
        for (int u = 1; u <= n; ++u) {
            for (int v : kept[u]) {
                int b = f2.parent(v);
                CHECK((b == 0 || b == r.rep[u]));
            }
        }
        CHECK(static_cast<long long>(r.cuts.size()) <= 2 * oracle_rearrangement(f1, f2));
    }
}

TEST_CASE("step 3 mirrors step 2 with the forests swapped") {
    // children of 3 in f2 have current parents {2, 2, 7, 7, 7}: two cuts
    auto f1 = forest({0, 0, 0, 2, 2, 7, 0, 7, 7, 0, 0});
    auto f2 = forest({0, 0, 0, 3, 3, 3, 0, 3, 3, 0, 0});
    auto direct = step3(f1, f2);
    CHECK(direct.cuts.size() == 2);
    CHECK(direct.rep[3] == 7);
    auto swapped = step2(f2, f1);
    CHECK(direct.cuts.size() == swapped.cuts.size());

    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1r = random_forest(n, 1 + static_cast<int>(seed % 3), seed + 11);
        auto f2r = random_forest(n, 1 + static_cast<int>(seed % 2), seed + 13);
        CHECK(step3(f1r, f2r).cuts.size() == step2(f2r, f1r).cuts.size());
        auto r = step3(f1r, f2r);
        auto goal_children = f2r.children_lists();
        for (int u = 1; u <= n; ++u) {
            for (int v : goal_children[u]) {
                int a = r.forest.parent(v);
                CHECK((a == 0 || a == r.rep[u]));
            }
        }
    }
}

TEST_CASE("step 4 permutation shapes") {
    // no requirements
    auto f = forest({0, 1, 2});
    auto none = step4(f, f);
    CHECK(none.perm.is_identity());
    CHECK(none.forest == f);

    // single requirement 3 -> 7 closes into a transposition
    // node 2 has parent 3 here and parent 7 there; 3 and 7 are roots
    auto f1 = forest({0, 3, 0, 0, 0, 0, 0});
    auto f2 = forest({0, 7, 0, 0, 0, 0, 0});
    auto single = step4(f1, f2);
    CHECK(single.perm.moved_pairs() ==
          std::vector<std::pair<int, int>>{{3, 7}, {7, 3}});

    // chain 1 -> 2 -> 3 closes into a three-cycle
    // node 4 wants pi(1)=2, node 5 wants pi(2)=3
    auto c1 = forest({0, 0, 0, 1, 2});
    auto c2 = forest({0, 0, 0, 2, 3});
    auto chain = step4(c1, c2);
    CHECK(chain.perm.apply(1) == 2);
    CHECK(chain.perm.apply(2) == 3);
    CHECK(chain.perm.apply(3) == 1);
    CHECK(similar(chain.forest, c2));
}

TEST_CASE("step 4 permutes only roots") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1, seed + 21);
        auto f2 = random_forest(n, 1, seed + 22);
        auto pipeline3 = step3(step2(step1(f1, f2).forest, f2).forest, f2);
        auto s4 = step4(pipeline3.forest, f2);
        for (int u = 1; u <= n; ++u)
            if (s4.perm.apply(u) != u) CHECK(pipeline3.forest.is_root(u));
        CHECK(similar(s4.forest, f2));
    }
}

TEST_CASE("approximation produces a verified script within the constant factor") {
    auto same = random_forest(9, 2, 3);
    CHECK(script_size(approximate_rearrangement(same, same).script) == 0);

    auto small = approximate_rearrangement(forest({0, 1, 1}), forest({0, 3, 1}));
    long long ssize = script_size(small.script);
    CHECK(ssize >= 1);
    CHECK(ssize <= 224);

    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 2), seed + 31);
        auto f2 = random_forest(n, 1 + static_cast<int>((seed / 2) % 2), seed + 32);
        auto approx = approximate_rearrangement(f1, f2);
        long long size = script_size(approx.script);
        long long oracle = oracle_rearrangement(f1, f2);
        CHECK(similar(apply_script(f1, approx.script), f2));
        CHECK(oracle <= size);
        CHECK(size <= 224 * oracle);
        CHECK((size == 0) == (oracle == 0));
        CHECK(size == approx.trace.total_ops());
    }
}

TEST_CASE("per-step operation bounds against oracle distances") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        int n = 2 + static_cast<int>(seed % 6);
        auto f1 = random_forest(n, 1 + static_cast<int>(seed % 3), seed + 61);
        auto f2 = random_forest(n, 1 + static_cast<int>(seed % 2), seed + 62);
        auto approx = approximate_rearrangement(f1, f2);
        const auto& tr = approx.trace;
        long long p0 = static_cast<long long>(family_partition(f1, f2).size());
        CHECK(tr.alg(1) <= 2 * p0);
        CHECK(p0 <= 2 * oracle_rearrangement(f1, f2));
        CHECK(tr.alg(2) <= 2 * oracle_rearrangement(tr.after_step1, f2));
        CHECK(tr.alg(3) <= 2 * oracle_rearrangement(tr.after_step2, f2));
        long long p3 = static_cast<long long>(family_partition(tr.after_step3, f2).size());
        CHECK(tr.alg(4) <= 2 * p3);
        CHECK(2 * p3 <= 4 * oracle_rearrangement(tr.after_step3, f2));
    }
}

TEST_CASE("oracle rearrangement distance is symmetric and zero on equal inputs") {
    std::vector<LabeledForest> corpus;
    for (std::uint64_t seed = 0; seed < 12; ++seed)
        corpus.push_back(random_forest(4, 1 + static_cast<int>(seed % 3), seed));
    for (const auto& a : corpus) {
        CHECK(oracle_rearrangement(a, a) == 0);
        for (const auto& b : corpus)
            CHECK(oracle_rearrangement(a, b) == oracle_rearrangement(b, a));
    }
}

TEST_CASE("similarity slack defeats the three-point inequality") {
    // Distance zero is similarity, which is not transitive, so chaining
    // through an all-roots forest can undercut a positive direct distance.
    auto a = forest({0, 1, 1});
    auto b = forest({0, 0, 0});
    auto c = forest({0, 3, 0});
    CHECK(oracle_rearrangement(a, b) == 0);
    CHECK(oracle_rearrangement(b, c) == 0);
    CHECK(oracle_rearrangement(a, c) == 1);
}

TEST_CASE("applying operations moves the distance by at most their size") {
    // The form of chaining the analysis relies on: editing one side changes
    // the distance to a fixed target by at most the edit size.
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        int n = 2 + static_cast<int>(seed % 5);
        auto f1 = random_forest(n, 1, seed + 71);
        auto f2 = random_forest(n, 1, seed + 72);
        auto approx = approximate_rearrangement(f1, f2);
        long long prev = oracle_rearrangement(f1, f2);
        const auto& tr = approx.trace;
        const LabeledForest* stages[] = {&tr.after_step1, &tr.after_step2, &tr.after_step3,
                                         &tr.after_step4};
        for (int j = 0; j < 4; ++j) {
            long long next = oracle_rearrangement(*stages[j], f2);
            CHECK(next <= tr.alg(j + 1) + prev);
            prev = next;
        }
    }
}

TEST_CASE("tree distance approximation anchors and verifies") {
    auto t = random_tree(8, 99);
    CHECK(approximate_tree_distance(t, t).size == 0);

    CHECK_THROWS_AS(approximate_tree_distance(forest({0, 1}), forest({2, 0})),
                    PreconditionError);  // different root labels

    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        int n = 2 + static_cast<int>(seed % 2);  // anchored size 2n <= 6
        auto t1 = random_tree(n, seed + 201);
        // force the same root label by permuting t2's root onto t1's
        auto t2 = random_tree(n, seed + 401);
        if (t1.root() != t2.root()) {
            std::vector<std::pair<int, int>> swap{{t2.root(), t1.root()},
                                                  {t1.root(), t2.root()}};
            t2 = apply_permutation(t2, Permutation::from_pairs(n, swap));
        }
        auto result = approximate_tree_distance(t1, t2);
        long long oracle = oracle_tree_distance(t1, t2);
        CHECK(oracle <= result.size);
        CHECK(result.size <= 224 * oracle);
        CHECK(similar(apply_script(result.anchored1, result.cut_script), result.anchored2));
        if (result.link_script) {
            CHECK(script_size(*result.link_script) == result.size);
            CHECK(apply_script(result.anchored1, *result.link_script) == result.anchored2);
        }
    }
}

TEST_CASE("trace report lists every step") {
    auto approx = approximate_rearrangement(forest({0, 1, 1}), forest({0, 3, 1}));
    auto text = format_trace(approx.trace);
    CHECK(text.find("step1 cuts: 1") != std::string::npos);
    CHECK(text.find("step4 permutation size:") != std::string::npos);
    CHECK(text.find("total ops: 3") != std::string::npos);
}
