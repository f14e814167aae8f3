#include "treedist/isomorphism.hpp"

#include <algorithm>
#include <map>

namespace treedist {

namespace {

// Deepest level first, so children always precede their parent.
std::vector<int> bottom_up_order(const LabeledForest& t, const std::vector<int>& lvl) {
    std::vector<int> order(t.node_count());
    for (int u = 1; u <= t.node_count(); ++u) order[u - 1] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lvl[a] > lvl[b]; });
    return order;
}

}  // namespace

CanonicalIds canonical_ids(const LabeledForest& t1, const LabeledForest& t2) {
    if (!t1.is_tree() || !t2.is_tree())
        throw ValidationError("canonical ids are defined for single trees");

    CanonicalIds out;
    out.ids1.assign(t1.node_count() + 1, 0);
    out.ids2.assign(t2.node_count() + 1, 0);

    // Signature of a node: sorted ids of its children. One dictionary shared
    // across both trees; nodes are processed deepest level first so children
    // ids are ready before their parent's signature is formed.
    std::map<std::vector<int>, int> dict;
    int next_id = 0;
    auto assign = [&](const LabeledForest& t, std::vector<int>& ids) {
        auto lvl = levels(t);
        auto ch = t.children_lists();
        for (int u : bottom_up_order(t, lvl)) {
            std::vector<int> sig;
            sig.reserve(ch[u].size());
            for (int c : ch[u]) sig.push_back(ids[c]);
            std::sort(sig.begin(), sig.end());
            auto [it, inserted] = dict.emplace(std::move(sig), next_id + 1);
            if (inserted) ++next_id;
            ids[u] = it->second;
        }
    };
    assign(t1, out.ids1);
    assign(t2, out.ids2);
    out.distinct_count = next_id;
    return out;
}

bool isomorphic(const LabeledForest& t1, const LabeledForest& t2) {
    if (t1.node_count() != t2.node_count()) return false;
    auto ids = canonical_ids(t1, t2);
    return ids.ids1[t1.root()] == ids.ids2[t2.root()];
}

}  // namespace treedist
