#include "treedist/perm_distance.hpp"

#include <algorithm>

#include "treedist/check.hpp"

namespace treedist {

namespace {

struct LevelGroups {
    // level -> id -> (nodes of t1, nodes of t2), ascending labels
    std::map<int, std::map<int, std::pair<std::vector<int>, std::vector<int>>>> groups;
};

LevelGroups group_by_level_and_id(const LabeledForest& t1, const LabeledForest& t2,
                                  const CanonicalIds& ids, const std::vector<int>& lvl1,
                                  const std::vector<int>& lvl2) {
    LevelGroups out;
    for (int u = 1; u <= t1.node_count(); ++u)
        out.groups[lvl1[u]][ids.ids1[u]].first.push_back(u);
    for (int v = 1; v <= t2.node_count(); ++v)
        out.groups[lvl2[v]][ids.ids2[v]].second.push_back(v);
    return out;
}

}  // namespace

ConservedTable conserved_table_baseline(const LabeledForest& t1, const LabeledForest& t2) {
    if (t1.node_count() != t2.node_count()) throw NotIsomorphicError();
    auto ids = canonical_ids(t1, t2);
    if (ids.ids1[t1.root()] != ids.ids2[t2.root()]) throw NotIsomorphicError();

    const int n = t1.node_count();
    auto lvl1 = levels(t1), lvl2 = levels(t2);
    auto ch1 = t1.children_lists(), ch2 = t2.children_lists();
    auto grouped = group_by_level_and_id(t1, t2, ids, lvl1, lvl2);

    ConservedTable table;
    table.n = n;

    // Deepest level first; children values are ready before their parents.
    for (auto lt = grouped.groups.rbegin(); lt != grouped.groups.rend(); ++lt) {
        for (const auto& [id, nodes] : lt->second) {
            const auto& [us, vs] = nodes;
            for (int u : us) {
                // Bucket u's children by id once per u.
                std::map<int, std::vector<int>> bucket;
                for (int c : ch1[u]) bucket[ids.ids1[c]].push_back(c);
                std::map<int, int> left_index;
                for (size_t i = 0; i < ch1[u].size(); ++i)
                    left_index[ch1[u][i]] = static_cast<int>(i) + 1;
                for (int v : vs) {
                    WeightedBipartiteGraph g;
                    g.left_count = static_cast<int>(ch1[u].size());
                    g.right_count = static_cast<int>(ch2[v].size());
                    for (size_t j = 0; j < ch2[v].size(); ++j) {
                        int c2 = ch2[v][j];
                        auto it = bucket.find(ids.ids2[c2]);
                        if (it == bucket.end()) continue;
                        for (int c1 : it->second) {
                            long long w = table.at(c1, c2);
                            if (w > 0)
                                g.edges.push_back({left_index[c1], static_cast<int>(j) + 1, w});
                        }
                    }
                    long long w = g.edges.empty() ? 0 : max_weight_matching_oracle(g).weight;
                    table.value[table.key(u, v)] = w + (u == v ? 1 : 0);
                }
            }
        }
    }
    table.root_value = table.at(t1.root(), t2.root());
    return table;
}

long long max_conserved_baseline(const LabeledForest& t1, const LabeledForest& t2) {
    return conserved_table_baseline(t1, t2).root_value;
}

ConservedSolver::ConservedSolver(const LabeledForest& t1, const LabeledForest& t2)
    : t1_(t1), t2_(t2) {
    if (t1.node_count() != t2.node_count()) throw NotIsomorphicError();
    ids_ = canonical_ids(t1, t2);
    if (ids_.ids1[t1.root()] != ids_.ids2[t2.root()]) throw NotIsomorphicError();
    auto hpds = decompose_consistent(t1, t2, ids_);
    hpd1_ = std::move(hpds.first);
    hpd2_ = std::move(hpds.second);
    ch1_ = t1.children_lists();
    ch2_ = t2.children_lists();
    for (int u = 1; u <= t1.node_count(); ++u)
        if (hpd1_.level(u) == hpd2_.level(u) && ids_.ids1[u] == ids_.ids2[u])
            diagonal_.push_back(u);
}

void ConservedSolver::classify() {
    TREEDIST_CHECK(phase_ == 0, "classify called out of order");
    // First pass: a cross edge (z, w) exists only where z or w heads its heavy
    // path; the graph of their parents is then worth materializing.
    for (int u : diagonal_) {
        AncestorPairCursor cursor(hpd1_, hpd2_, u, u);
        while (auto pair = cursor.next()) {
            auto [z, w] = *pair;
            if (ids_.ids1[z] != ids_.ids2[w]) continue;
            int pz = t1_.parent(z), pw = t2_.parent(w);
            if (pz == 0 || pw == 0) continue;
            if (ids_.ids1[pz] != ids_.ids2[pw]) continue;
            auto [it, inserted] = slots_.try_emplace({pz, pw});
            if (inserted) {
                it->second.from_cross_pass = true;
                ++stats_.cross_graphs;
            }
        }
    }
    // Second pass: every shared-label pair with isomorphic subtrees.
    for (int u : diagonal_) {
        auto [it, inserted] = slots_.try_emplace({u, u});
        if (inserted) ++stats_.diagonal_graphs;
    }
    phase_ = 1;
}

void ConservedSolver::populate() {
    TREEDIST_CHECK(phase_ == 1, "populate called out of order");
    for (int u : diagonal_) {
        AncestorPairCursor cursor(hpd1_, hpd2_, u, u);
        while (auto pair = cursor.next()) {
            auto [z, w] = *pair;
            if (ids_.ids1[z] != ids_.ids2[w]) continue;
            int pz = t1_.parent(z), pw = t2_.parent(w);
            if (pz == 0 || pw == 0) continue;
            if (ids_.ids1[pz] != ids_.ids2[pw]) continue;
            auto it = slots_.find({pz, pw});
            TREEDIST_CHECK(it != slots_.end(), "cross edge without a materialized graph");
            it->second.cross_edges.emplace_back(z, w);
        }
    }
    phase_ = 2;
}

void ConservedSolver::process(const FastOptions& opts) {
    TREEDIST_CHECK(phase_ == 2, "process called out of order");
    witness_ = opts.record_witness;

    std::map<int, std::vector<std::pair<int, int>>> by_level;  // map order keeps keys ascending
    for (const auto& [key, slot] : slots_) {
        TREEDIST_CHECK(hpd1_.level(key.first) == hpd2_.level(key.second),
                       "graph key on unequal levels");
        by_level[hpd1_.level(key.first)].push_back(key);
    }

    for (auto lt = by_level.rbegin(); lt != by_level.rend(); ++lt) {
        for (auto key : lt->second) {
            auto [u, v] = key;
            Slot& slot = slots_.at(key);
            auto& edges = slot.cross_edges;
            std::sort(edges.begin(), edges.end());
            edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
            stats_.cross_edges += static_cast<long long>(edges.size());

            int hu = hpd1_.heavy_child(u), hv = hpd2_.heavy_child(v);
            TREEDIST_CHECK((hu == 0) == (hv == 0), "leaf paired with a non-leaf");
            const long long bonus = (u == v) ? 1 : 0;

            if (hu == 0) {
                TREEDIST_CHECK(edges.empty(), "leaf pair with cross edges");
                slot.value = bonus;
            } else {
                long long heavy_val = resolve(hu, hv);

                // Local vertex compaction over the edge endpoints.
                std::vector<int> ls, rs;
                std::vector<long long> ws(edges.size());
                for (size_t i = 0; i < edges.size(); ++i) {
                    ws[i] = resolve(edges[i].first, edges[i].second);
                    stats_.cross_weight += ws[i];
                    if (ws[i] == 0) continue;
                    ls.push_back(edges[i].first);
                    rs.push_back(edges[i].second);
                }
                std::sort(ls.begin(), ls.end());
                ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
                std::sort(rs.begin(), rs.end());
                rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
                auto dense = [](const std::vector<int>& ids, int x) {
                    return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), x) -
                                            ids.begin()) + 1;
                };

                WeightedBipartiteGraph full, trimmed;
                full.left_count = trimmed.left_count = static_cast<int>(ls.size());
                full.right_count = trimmed.right_count = static_cast<int>(rs.size());
                for (size_t i = 0; i < edges.size(); ++i) {
                    if (ws[i] == 0) continue;
                    WeightedEdge e{dense(ls, edges[i].first), dense(rs, edges[i].second), ws[i]};
                    full.edges.push_back(e);
                    if (edges[i].first != hu && edges[i].second != hv) trimmed.edges.push_back(e);
                }

                long long keep_val, drop_val;
                std::vector<std::pair<int, int>> keep_edges, drop_edges;
                if (opts.record_witness) {
                    auto m1 = max_weight_matching(full, &stats_.matching);
                    auto m2 = max_weight_matching(trimmed, &stats_.matching);
                    keep_val = m1.weight;
                    drop_val = m2.weight;
                    for (auto [a, b] : m1.edges) keep_edges.emplace_back(ls[a - 1], rs[b - 1]);
                    for (auto [a, b] : m2.edges) drop_edges.emplace_back(ls[a - 1], rs[b - 1]);
                } else {
                    keep_val = max_weight_value(full, &stats_.matching);
                    drop_val = max_weight_value(trimmed, &stats_.matching);
                }

                long long best = std::max(keep_val, drop_val + heavy_val);
                if (opts.check_split) {
                    WeightedBipartiteGraph whole = full;
                    if (heavy_val > 0) {
                        // The heavy pair may not occur among the cross edges.
                        int dl, dr;
                        auto pos = std::lower_bound(ls.begin(), ls.end(), hu);
                        if (pos == ls.end() || *pos != hu) {
                            whole.left_count += 1;
                            dl = whole.left_count;
                        } else {
                            dl = dense(ls, hu);
                        }
                        pos = std::lower_bound(rs.begin(), rs.end(), hv);
                        if (pos == rs.end() || *pos != hv) {
                            whole.right_count += 1;
                            dr = whole.right_count;
                        } else {
                            dr = dense(rs, hv);
                        }
                        whole.edges.push_back({dl, dr, heavy_val});
                    }
                    long long direct = whole.edges.empty()
                                           ? 0
                                           : max_weight_matching_oracle(whole).weight;
                    TREEDIST_CHECK(direct == best,
                                   "two-part value disagrees with the direct matcher");
                    ++stats_.split_checks;
                }

                slot.value = best + bonus;
                if (opts.record_witness) {
                    if (keep_val >= drop_val + heavy_val) {
                        slot.chosen = std::move(keep_edges);
                        slot.chose_heavy = false;
                    } else {
                        slot.chosen = std::move(drop_edges);
                        slot.chose_heavy = true;
                    }
                }
            }

            auto list_key = std::make_pair(hpd1_.head(u), hpd2_.head(v));
            auto& list = level_lists_[list_key];
            TREEDIST_CHECK(list.empty() || list.back().first > lt->first,
                           "level list out of order");
            list.emplace_back(lt->first, slot.value);
        }
    }
    phase_ = 3;
}

void ConservedSolver::run(const FastOptions& opts) {
    classify();
    populate();
    process(opts);
}

long long ConservedSolver::resolve(int u, int v) const {
    auto it = slots_.find({u, v});
    if (it != slots_.end()) {
        TREEDIST_CHECK(it->second.value >= 0, "graph value requested before it was computed");
        return it->second.value;
    }
    // Chain through the heavy paths: the nearest materialized pair at or below
    // this level on the same path pair carries the value; none means zero.
    auto lk = level_lists_.find({hpd1_.head(u), hpd2_.head(v)});
    if (lk == level_lists_.end()) return 0;
    const auto& list = lk->second;
    int lvl = hpd1_.level(u);
    auto it2 = std::partition_point(list.begin(), list.end(),
                                    [&](const auto& e) { return e.first >= lvl; });
    if (it2 == list.begin()) return 0;
    return std::prev(it2)->second;
}

long long ConservedSolver::lookup(int u, int v) const {
    TREEDIST_CHECK(phase_ == 3, "lookup before process");
    if (hpd1_.level(u) != hpd2_.level(v))
        throw PreconditionError("lookup requires nodes on equal levels");
    if (ids_.ids1[u] != ids_.ids2[v])
        throw PreconditionError("lookup requires isomorphic subtrees");
    return resolve(u, v);
}

long long ConservedSolver::root_value() const {
    TREEDIST_CHECK(phase_ == 3, "root value before process");
    return resolve(t1_.root(), t2_.root());
}

std::vector<std::pair<int, int>> ConservedSolver::graph_keys() const {
    std::vector<std::pair<int, int>> keys;
    keys.reserve(slots_.size());
    for (const auto& [key, slot] : slots_) keys.push_back(key);
    return keys;
}

ConservedSolver::GraphView ConservedSolver::graph_view(int u, int v) const {
    auto it = slots_.find({u, v});
    TREEDIST_CHECK(it != slots_.end(), "graph_view of an unmaterialized pair");
    GraphView view;
    view.key = {u, v};
    view.from_cross_pass = it->second.from_cross_pass;
    view.cross_edges = it->second.cross_edges;
    int hu = hpd1_.heavy_child(u), hv = hpd2_.heavy_child(v);
    if (hu != 0) view.heavy_pair = {hu, hv};
    view.value = it->second.value;
    return view;
}

Permutation ConservedSolver::recover() const {
    TREEDIST_CHECK(phase_ == 3 && witness_, "recover requires a witness run");
    const int n = t1_.node_count();
    std::vector<int> image(n + 1, 0);
    std::vector<std::pair<int, int>> stack{{t1_.root(), t2_.root()}};
    while (!stack.empty()) {
        auto [u, v] = stack.back();
        stack.pop_back();
        TREEDIST_CHECK(image[u] == 0, "node visited twice during recovery");
        image[u] = v;

        std::vector<char> used1(ch1_[u].size(), 0), used2(ch2_[v].size(), 0);
        auto mark = [&](const std::vector<int>& ch, std::vector<char>& used, int x) {
            auto pos = std::lower_bound(ch.begin(), ch.end(), x);
            TREEDIST_CHECK(pos != ch.end() && *pos == x, "matched node is not a child");
            used[pos - ch.begin()] = 1;
        };

        int hu = hpd1_.heavy_child(u), hv = hpd2_.heavy_child(v);
        auto it = slots_.find({u, v});
        if (it != slots_.end()) {
            for (auto [x, y] : it->second.chosen) {
                stack.push_back({x, y});
                mark(ch1_[u], used1, x);
                mark(ch2_[v], used2, y);
            }
            if (it->second.chose_heavy) {
                stack.push_back({hu, hv});
                mark(ch1_[u], used1, hu);
                mark(ch2_[v], used2, hv);
            }
        } else if (hu != 0) {
            stack.push_back({hu, hv});
            mark(ch1_[u], used1, hu);
            mark(ch2_[v], used2, hv);
        }

        // Remaining children pair up inside their isomorphism classes.
        std::map<int, std::pair<std::vector<int>, std::vector<int>>> rest;
        for (size_t i = 0; i < ch1_[u].size(); ++i)
            if (!used1[i]) rest[ids_.ids1[ch1_[u][i]]].first.push_back(ch1_[u][i]);
        for (size_t j = 0; j < ch2_[v].size(); ++j)
            if (!used2[j]) rest[ids_.ids2[ch2_[v][j]]].second.push_back(ch2_[v][j]);
        for (auto& [id, lists] : rest) {
            TREEDIST_CHECK(lists.first.size() == lists.second.size(),
                           "leftover children classes differ");
            for (size_t k = 0; k < lists.first.size(); ++k)
                stack.push_back({lists.first[k], lists.second[k]});
        }
    }
    std::vector<int> img(n);
    for (int u = 1; u <= n; ++u) {
        TREEDIST_CHECK(image[u] != 0, "recovery left a node unmapped");
        img[u - 1] = image[u];
    }
    return Permutation::from_image(std::move(img));
}

long long max_conserved_fast(const LabeledForest& t1, const LabeledForest& t2,
                             FastStats* stats) {
    ConservedSolver solver(t1, t2);
    solver.run();
    if (stats) *stats = solver.stats();
    return solver.root_value();
}

long long permutation_distance(const LabeledForest& t1, const LabeledForest& t2) {
    return t1.node_count() - max_conserved_fast(t1, t2);
}

Permutation recover_permutation(const LabeledForest& t1, const LabeledForest& t2) {
    ConservedSolver solver(t1, t2);
    FastOptions opts;
    opts.record_witness = true;
    solver.run(opts);
    return solver.recover();
}

}  // namespace treedist
