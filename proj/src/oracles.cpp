#include "treedist/oracles.hpp"

#include <algorithm>
#include <climits>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "treedist/check.hpp"
#include "treedist/isomorphism.hpp"

namespace treedist {

namespace {

struct ConservedEnumerator {
    const std::vector<std::vector<int>>& ch1;
    const std::vector<std::vector<int>>& ch2;
    const CanonicalIds& ids;
    int n;
    std::unordered_map<long long, long long> memo;

    long long best(int u, int v) {
        long long key = static_cast<long long>(u) * (n + 1) + v;
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;

        long long total = (u == v) ? 1 : 0;
        std::map<int, std::pair<std::vector<int>, std::vector<int>>> groups;
        for (int c : ch1[u]) groups[ids.ids1[c]].first.push_back(c);
        for (int c : ch2[v]) groups[ids.ids2[c]].second.push_back(c);
        for (auto& [id, lists] : groups) {
            auto& [left, right] = lists;
            TREEDIST_CHECK(left.size() == right.size(), "children classes differ in size");
            std::sort(right.begin(), right.end());
            long long group_best = -1;
            do {
                long long sum = 0;
                for (size_t i = 0; i < left.size(); ++i) sum += best(left[i], right[i]);
                group_best = std::max(group_best, sum);
            } while (std::next_permutation(right.begin(), right.end()));
            total += group_best;
        }
        memo[key] = total;
        return total;
    }
};

}  // namespace

long long oracle_perm_distance(const LabeledForest& t1, const LabeledForest& t2) {
    const int n = t1.node_count();
    if (n > kOraclePermutationCap)
        throw PreconditionError("permutation oracle is capped at " +
                                std::to_string(kOraclePermutationCap) + " nodes");
    if (n != t2.node_count()) throw NotIsomorphicError();
    auto ids = canonical_ids(t1, t2);
    if (ids.ids1[t1.root()] != ids.ids2[t2.root()]) throw NotIsomorphicError();
    auto ch1 = t1.children_lists(), ch2 = t2.children_lists();
    ConservedEnumerator e{ch1, ch2, ids, n, {}};
    return n - e.best(t1.root(), t2.root());
}

long long oracle_rearrangement(const LabeledForest& f1, const LabeledForest& f2) {
    const int n = f1.node_count();
    if (n > kOracleRearrangementCap)
        throw PreconditionError("rearrangement oracle is capped at " +
                                std::to_string(kOracleRearrangementCap) + " nodes");
    if (n != f2.node_count()) throw ValidationError("forests have different sizes");

    std::vector<int> image(n + 1);
    std::iota(image.begin(), image.end(), 0);
    long long best = LLONG_MAX;
    do {
        long long moved = 0;
        for (int u = 1; u <= n; ++u)
            if (image[u] != u) ++moved;
        long long conflicts = 0;
        for (int u = 1; u <= n; ++u) {
            int p1 = f1.parent(u);
            int mapped_parent = (p1 == 0) ? 0 : image[p1];
            int p2 = f2.parent(image[u]);
            if (mapped_parent != 0 && p2 != 0 && mapped_parent != p2) ++conflicts;
        }
        best = std::min(best, moved + conflicts);
    } while (std::next_permutation(image.begin() + 1, image.end()));
    return best;
}

namespace {

std::uint64_t encode(const std::vector<int>& parent, int n) {
    std::uint64_t code = 0;
    for (int u = n; u >= 1; --u) code = code * (n + 1) + parent[u];
    return code;
}

bool weak_descendant(const std::vector<int>& parent, int node, int of) {
    for (int u = node; u != 0; u = parent[u])
        if (u == of) return true;
    return false;
}

}  // namespace

long long oracle_tree_distance(const LabeledForest& t1, const LabeledForest& t2) {
    const int n = t1.node_count();
    if (n > kOracleTreeDistanceCap)
        throw PreconditionError("tree distance oracle is capped at " +
                                std::to_string(kOracleTreeDistanceCap) + " nodes");
    if (!t1.is_tree() || !t2.is_tree()) throw ValidationError("expected single trees");
    if (n != t2.node_count()) throw ValidationError("trees have different sizes");
    const int root = t1.root();
    if (root != t2.root()) throw PreconditionError("trees must share their root label");

    // Link-and-cut moves are reversible, so distances from t2 serve as
    // distances to t2.
    std::vector<int> target(n + 1, 0);
    for (int u = 1; u <= n; ++u) target[u] = t2.parent(u);
    std::unordered_map<std::uint64_t, int> dist;
    std::queue<std::vector<int>> frontier;
    dist[encode(target, n)] = 0;
    frontier.push(target);
    while (!frontier.empty()) {
        auto cur = frontier.front();
        frontier.pop();
        int d = dist.at(encode(cur, n));
        for (int v = 1; v <= n; ++v) {
            if (cur[v] == 0) continue;
            for (int w = 1; w <= n; ++w) {
                if (w == v || w == cur[v] || weak_descendant(cur, w, v)) continue;
                int old = cur[v];
                cur[v] = w;
                auto code = encode(cur, n);
                if (!dist.count(code)) {
                    dist[code] = d + 1;
                    frontier.push(cur);
                }
                cur[v] = old;
            }
        }
    }

    // Root-fixing permutations applied first, link-and-cut completion after.
    std::vector<int> others;
    for (int u = 1; u <= n; ++u)
        if (u != root) others.push_back(u);
    std::vector<int> image(n + 1);
    long long best = LLONG_MAX;
    std::vector<int> arranged = others;
    do {
        image[0] = 0;
        image[root] = root;
        for (size_t i = 0; i < others.size(); ++i) image[others[i]] = arranged[i];
        long long moved = 0;
        for (int u = 1; u <= n; ++u)
            if (image[u] != u) ++moved;
        std::vector<int> permuted(n + 1, 0);
        for (int u = 1; u <= n; ++u) {
            int p = t1.parent(u);
            permuted[image[u]] = (p == 0) ? 0 : image[p];
        }
        auto it = dist.find(encode(permuted, n));
        TREEDIST_CHECK(it != dist.end(), "state space is not connected");
        best = std::min(best, moved + it->second);
    } while (std::next_permutation(arranged.begin(), arranged.end()));
    return best;
}

}  // namespace treedist
