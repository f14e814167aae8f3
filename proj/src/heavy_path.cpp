#include "treedist/heavy_path.hpp"

#include <algorithm>
#include <unordered_map>

#include "treedist/check.hpp"

namespace treedist {

std::optional<int> HeavyPathDecomposition::access(int u, int lvl) const {
    const auto& p = path_[path_id_[u]];
    int head_level = level_[p[0]];
    if (lvl < head_level)
        throw PreconditionError("access: level " + std::to_string(lvl) +
                                " is above the path head at level " +
                                std::to_string(head_level));
    size_t idx = static_cast<size_t>(lvl - head_level);
    if (idx >= p.size()) return std::nullopt;
    return p[idx];
}

namespace {

std::vector<int> bottom_up_order(int n, const std::vector<int>& lvl) {
    std::vector<int> order(n);
    for (int u = 1; u <= n; ++u) order[u - 1] = u;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lvl[a] > lvl[b]; });
    return order;
}

}  // namespace

std::pair<HeavyPathDecomposition, HeavyPathDecomposition> decompose_consistent(
    const LabeledForest& t1, const LabeledForest& t2, const CanonicalIds& ids) {
    // Subtree sizes and child-id multisets are determined by the canonical id,
    // so the heavy-child id can be fixed once per id group.
    std::unordered_map<int, int> heavy_id_of_group;
    auto scan = [&](const LabeledForest& t, const std::vector<int>& idv) {
        auto lvl = levels(t);
        auto ch = t.children_lists();
        std::vector<int> size(t.node_count() + 1, 1);
        for (int u : bottom_up_order(t.node_count(), lvl)) {
            if (t.parent(u) != 0) size[t.parent(u)] += size[u];
            if (ch[u].empty() || heavy_id_of_group.count(idv[u])) continue;
            int best_id = 0, best_size = 0;
            for (int c : ch[u]) {
                int s = size[c];
                if (s > best_size || (s == best_size && idv[c] < best_id)) {
                    best_size = s;
                    best_id = idv[c];
                }
            }
            heavy_id_of_group.emplace(idv[u], best_id);
        }
    };
    scan(t1, ids.ids1);
    scan(t2, ids.ids2);

    auto build_one = [&](const LabeledForest& t, const std::vector<int>& idv,
                         HeavyPathDecomposition& d) {
        const int n = t.node_count();
        d.n_ = n;
        d.parent_.assign(n + 1, 0);
        for (int u = 1; u <= n; ++u) d.parent_[u] = t.parent(u);
        d.level_ = levels(t);
        auto ch = t.children_lists();
        auto order = bottom_up_order(n, d.level_);

        d.size_.assign(n + 1, 1);
        for (int u : order)
            if (d.parent_[u] != 0) d.size_[d.parent_[u]] += d.size_[u];

        d.heavy_.assign(n + 1, 0);
        for (int u = 1; u <= n; ++u) {
            if (ch[u].empty()) continue;
            int want = heavy_id_of_group.at(idv[u]);
            int pick = 0;
            for (int c : ch[u]) {
                if (idv[c] != want) continue;
                if (pick == 0 || c < pick) pick = c;
            }
            TREEDIST_CHECK(pick != 0, "heavy child id missing among children");
            d.heavy_[u] = pick;
        }

        d.pos_.assign(n + 1, 0);
        d.path_id_.assign(n + 1, 0);
        d.path_.clear();
        for (int u = 1; u <= n; ++u) {
            bool is_head = (d.parent_[u] == 0) || (d.heavy_[d.parent_[u]] != u);
            if (!is_head) continue;
            std::vector<int> path;
            for (int v = u; v != 0; v = d.heavy_[v]) {
                d.pos_[v] = static_cast<int>(path.size());
                d.path_id_[v] = static_cast<int>(d.path_.size());
                path.push_back(v);
            }
            d.path_.push_back(std::move(path));
        }
    };

    std::pair<HeavyPathDecomposition, HeavyPathDecomposition> out;
    build_one(t1, ids.ids1, out.first);
    build_one(t2, ids.ids2, out.second);
    return out;
}

AncestorPairCursor::AncestorPairCursor(const HeavyPathDecomposition& d1,
                                       const HeavyPathDecomposition& d2, int u, int v)
    : d1_(d1), d2_(d2), u_(u), v_(v) {
    if (d1.level(u) != d2.level(v))
        throw PreconditionError("ancestor pairs require nodes on equal levels");
}

std::optional<std::pair<int, int>> AncestorPairCursor::next() {
    if (u_ == 0 || v_ == 0) return std::nullopt;
    int hu = d1_.head(u_), hv = d2_.head(v_);
    int lu = d1_.level(hu), lv = d2_.level(hv);
    std::pair<int, int> out;
    if (lu < lv) {
        out = {d1_.access(u_, lv).value(), hv};
        v_ = d2_.parent(hv);
    } else if (lu > lv) {
        out = {hu, d2_.access(v_, lu).value()};
        u_ = d1_.parent(hu);
    } else {
        out = {hu, hv};
        u_ = d1_.parent(hu);
        v_ = d2_.parent(hv);
    }
    return out;
}

}  // namespace treedist
