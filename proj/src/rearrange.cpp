#include "treedist/rearrange.hpp"

#include <algorithm>
#include <map>

#include "treedist/check.hpp"

namespace treedist {

namespace {

void require_same_size(const LabeledForest& f1, const LabeledForest& f2) {
    if (f1.node_count() != f2.node_count())
        throw ValidationError("forests have different sizes");
}

std::vector<int> parent_copy(const LabeledForest& f) {
    std::vector<int> p(f.node_count() + 1, 0);
    for (int u = 1; u <= f.node_count(); ++u) p[u] = f.parent(u);
    return p;
}

LabeledForest to_forest(const std::vector<int>& parents) {
    std::vector<int> raw(parents.begin() + 1, parents.end());
    return LabeledForest::from_parents(std::move(raw));
}

}  // namespace

std::set<std::pair<int, int>> family_partition(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    std::set<std::pair<int, int>> out;
    for (int i = 1; i <= f1.node_count(); ++i) {
        int a = f1.parent(i), b = f2.parent(i);
        if (a != 0 && b != 0 && a != b) out.emplace(a, b);
    }
    return out;
}

std::set<std::pair<int, int>> migrations_graph(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    auto groups = f1.children_lists();
    std::set<std::pair<int, int>> out;
    for (int p = 1; p <= f1.node_count(); ++p) {
        const auto& g = groups[p];
        for (size_t i = 0; i < g.size(); ++i) {
            if (f2.parent(g[i]) == 0) continue;
            for (size_t j = i + 1; j < g.size(); ++j) {
                if (f2.parent(g[j]) == 0) continue;
                if (f2.parent(g[i]) != f2.parent(g[j]))
                    out.emplace(std::min(g[i], g[j]), std::max(g[i], g[j]));
            }
        }
    }
    return out;
}

std::pair<int, int> multiset_mode(const std::vector<int>& values) {
    TREEDIST_CHECK(!values.empty(), "mode of an empty multiset");
    std::map<int, int> count;
    for (int v : values) ++count[v];
    int mode = 0, freq = 0;
    for (auto [v, c] : count)
        if (c > freq) {
            mode = v;
            freq = c;
        }
    return {mode, freq};
}

namespace {

// Shared pairing scheme: mode block first, everything else sorted after it,
// then pair across the tight bound.
template <typename T, typename ValueOf>
std::pair<std::vector<std::pair<T, T>>, std::vector<T>> pair_up(std::vector<T> items,
                                                                ValueOf value_of) {
    std::vector<std::pair<T, T>> pairs;
    if (items.empty()) return {pairs, items};

    std::vector<int> values;
    values.reserve(items.size());
    for (const auto& x : items) values.push_back(value_of(x));
    auto [mode, freq] = multiset_mode(values);

    std::stable_sort(items.begin(), items.end(), [&](const T& x, const T& y) {
        bool mx = value_of(x) == mode, my = value_of(y) == mode;
        if (mx != my) return mx;
        return value_of(x) < value_of(y);
    });

    const int size = static_cast<int>(items.size());
    const int f = std::min(size - freq, size / 2);
    std::vector<T> leftover;
    if (size - freq <= size / 2) {
        for (int i = 0; i < f; ++i) pairs.emplace_back(items[i], items[size - 1 - i]);
        for (int i = f; i < size - f; ++i) leftover.push_back(items[i]);
    } else {
        for (int i = 0; i < f; ++i) pairs.emplace_back(items[i], items[f + i]);
        for (int i = 2 * f; i < size; ++i) leftover.push_back(items[i]);
    }
    for (const auto& [x, y] : pairs)
        TREEDIST_CHECK(value_of(x) != value_of(y), "pairing produced an equal pair");
    return {std::move(pairs), std::move(leftover)};
}

}  // namespace

PairPartition pair_partition(std::vector<int> multiset) {
    auto [pairs, leftover] = pair_up(std::move(multiset), [](int x) { return x; });
    return {std::move(pairs), std::move(leftover)};
}

MigrationsMatching migrations_max_matching(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    auto groups = f1.children_lists();
    MigrationsMatching out;
    for (int p = 1; p <= f1.node_count(); ++p) {
        std::vector<int> members;
        for (int v : groups[p])
            if (f2.parent(v) != 0) members.push_back(v);
        if (members.size() < 2) continue;
        auto [pairs, leftover] =
            pair_up(std::move(members), [&](int v) { return f2.parent(v); });
        for (auto [x, y] : pairs) out.edges.emplace_back(std::min(x, y), std::max(x, y));
    }
    return out;
}

Step1Result step1(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    auto parent = parent_copy(f1);
    Step1Result out;
    auto make_root = [&](int x) {
        if (parent[x] == 0) return;
        out.cuts.push_back({x, parent[x]});
        parent[x] = 0;
    };
    for (int i = 1; i <= f1.node_count(); ++i) {
        int a = parent[i], b = f2.parent(i);
        if (a != 0 && b != 0 && a != b) {
            make_root(a);
            make_root(b);
        }
    }
    out.forest = to_forest(parent);
    return out;
}

Step2Result step2(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    const int n = f1.node_count();
    auto parent = parent_copy(f1);
    auto children = f1.children_lists();
    Step2Result out;
    out.rep.assign(n + 1, 0);
    for (int u = 1; u <= n; ++u) {
        std::vector<int> b_values;
        for (int v : children[u])
            if (f2.parent(v) != 0) b_values.push_back(f2.parent(v));
        if (b_values.empty()) {
            out.rep[u] = u;  // no constraint arises
            continue;
        }
        int mode = multiset_mode(b_values).first;
        out.rep[u] = mode;
        for (int v : children[u]) {
            int b = f2.parent(v);
            if (b != 0 && b != mode) {
                out.cuts.push_back({v, u});
                parent[v] = 0;
            }
        }
    }
    out.forest = to_forest(parent);
    return out;
}

Step2Result step3(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    const int n = f1.node_count();
    auto parent = parent_copy(f1);
    auto children2 = f2.children_lists();
    Step2Result out;
    out.rep.assign(n + 1, 0);
    for (int u = 1; u <= n; ++u) {
        std::vector<int> a_values;
        for (int v : children2[u])
            if (parent[v] != 0) a_values.push_back(parent[v]);
        if (a_values.empty()) {
            out.rep[u] = u;
            continue;
        }
        int mode = multiset_mode(a_values).first;
        out.rep[u] = mode;
        for (int v : children2[u]) {
            int a = parent[v];
            if (a != 0 && a != mode) {
                out.cuts.push_back({v, a});
                parent[v] = 0;
            }
        }
    }
    out.forest = to_forest(parent);
    return out;
}

Step4Result step4(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    const int n = f1.node_count();

    // Requirements pi(a[u]) = b[u]. The earlier steps guarantee the relation
    // is a partial injection on roots of f1; violations mean an upstream bug.
    std::map<int, int> req;
    std::map<int, int> req_inv;
    for (int u = 1; u <= n; ++u) {
        int a = f1.parent(u), b = f2.parent(u);
        if (a == 0 || b == 0 || a == b) continue;
        TREEDIST_CHECK(f1.parent(a) == 0 && f1.parent(b) == 0,
                       "requirement endpoints are not roots");
        auto [it, inserted] = req.emplace(a, b);
        if (!inserted && it->second != b)
            throw PreconditionError("conflicting requirements out of node " + std::to_string(a));
        auto [it2, inserted2] = req_inv.emplace(b, a);
        if (!inserted2 && it2->second != a)
            throw PreconditionError("conflicting requirements into node " + std::to_string(b));
    }

    // Close maximal requirement paths into cycles, smallest source first.
    std::vector<int> image(n);
    for (int i = 1; i <= n; ++i) image[i - 1] = i;
    std::map<int, char> done;
    for (auto [x, y] : req) done[x] = 0;
    for (auto& [start, seen] : done) {
        if (seen || req_inv.count(start)) continue;  // only path sources here
        int x = start;
        while (true) {
            auto it = req.find(x);
            if (it == req.end()) {
                image[x - 1] = start;  // back edge closing the path
                break;
            }
            done[x] = 1;
            image[x - 1] = it->second;
            x = it->second;
        }
    }
    for (auto& [start, seen] : done) {  // remaining components are cycles
        if (seen) continue;
        int x = start;
        while (!done[x]) {
            done[x] = 1;
            image[x - 1] = req.at(x);
            x = req.at(x);
        }
    }

    Step4Result out;
    out.perm = Permutation::from_image(std::move(image));
    out.forest = apply_permutation(f1, out.perm);
    TREEDIST_CHECK(similar(out.forest, f2), "step 4 result is not similar to the target");
    return out;
}

long long StepTrace::alg(int step) const {
    switch (step) {
        case 1: return static_cast<long long>(cuts1.size());
        case 2: return static_cast<long long>(cuts2.size());
        case 3: return static_cast<long long>(cuts3.size());
        case 4: return step4_perm.moved_count();
        default: throw std::out_of_range("step must be 1..4");
    }
}

ApproxResult approximate_rearrangement(const LabeledForest& f1, const LabeledForest& f2) {
    require_same_size(f1, f2);
    ApproxResult out;

    auto s1 = step1(f1, f2);
    auto s2 = step2(s1.forest, f2);
    auto s3 = step3(s2.forest, f2);
    auto s4 = step4(s3.forest, f2);

    out.trace.after_step1 = s1.forest;
    out.trace.after_step2 = s2.forest;
    out.trace.after_step3 = s3.forest;
    out.trace.after_step4 = s4.forest;
    out.trace.cuts1 = s1.cuts;
    out.trace.cuts2 = s2.cuts;
    out.trace.cuts3 = s3.cuts;
    out.trace.step4_perm = s4.perm;
    out.trace.rep = s2.rep;
    out.trace.rep_prime = s3.rep;

    for (const auto& c : s1.cuts) out.script.ops.push_back(c);
    for (const auto& c : s2.cuts) out.script.ops.push_back(c);
    for (const auto& c : s3.cuts) out.script.ops.push_back(c);
    if (!s4.perm.is_identity()) out.script.ops.push_back(PermuteOp{s4.perm.moved_pairs()});

    LabeledForest replayed = apply_script(f1, out.script);
    TREEDIST_CHECK(replayed == s4.forest, "script replay diverged from the step pipeline");
    TREEDIST_CHECK(similar(replayed, f2), "emitted script does not verify");
    TREEDIST_CHECK(script_size(out.script) == out.trace.total_ops(),
                   "script size differs from the step operation count");
    return out;
}

TreeApproxResult approximate_tree_distance(const LabeledForest& t1, const LabeledForest& t2) {
    if (!t1.is_tree() || !t2.is_tree())
        throw ValidationError("tree distance expects single trees");
    if (t1.node_count() != t2.node_count())
        throw ValidationError("trees have different sizes");
    if (t1.root() != t2.root())
        throw PreconditionError("trees must share their root label");

    TreeApproxResult out;
    out.anchored1 = anchor(t1);
    out.anchored2 = anchor(t2);
    auto approx = approximate_rearrangement(out.anchored1, out.anchored2);
    out.size = script_size(approx.script);
    out.cut_script = approx.script;
    out.trace = approx.trace;

    const Permutation& pi = approx.trace.step4_perm;
    int root = t1.root();
    if (pi.apply(root) == root) {
        // Equivalent form with the permutation first; each cut then re-links
        // its (renamed) node under the goal parent. Shallowest goal level
        // first: every ancestor of the new parent is then already on a goal
        // edge, so the new parent cannot sit below the moved node.
        auto lvl2 = levels(out.anchored2);
        std::vector<CutOp> cuts;
        cuts.insert(cuts.end(), approx.trace.cuts1.begin(), approx.trace.cuts1.end());
        cuts.insert(cuts.end(), approx.trace.cuts2.begin(), approx.trace.cuts2.end());
        cuts.insert(cuts.end(), approx.trace.cuts3.begin(), approx.trace.cuts3.end());

        std::vector<LinkAndCutOp> links;
        for (const auto& c : cuts) {
            int v = pi.apply(c.child);
            int u = pi.apply(c.parent);
            int w = out.anchored2.parent(v);
            TREEDIST_CHECK(w != 0, "cut target is a root of the goal tree");
            links.push_back({v, u, w});
        }
        std::stable_sort(links.begin(), links.end(), [&](const auto& x, const auto& y) {
            if (lvl2[x.child] != lvl2[y.child]) return lvl2[x.child] < lvl2[y.child];
            return x.child < y.child;
        });

        EditScript script;
        if (!pi.is_identity()) script.ops.push_back(PermuteOp{pi.moved_pairs()});
        for (const auto& l : links) script.ops.push_back(l);
        TREEDIST_CHECK(script_size(script) == out.size, "converted script changed size");
        LabeledForest result = apply_script(out.anchored1, script);
        TREEDIST_CHECK(result == out.anchored2, "link script does not reach the goal tree");
        out.link_script = std::move(script);
    }
    return out;
}

std::string format_trace(const StepTrace& trace) {
    std::string out;
    auto cuts_block = [&](const char* name, const std::vector<CutOp>& cuts) {
        out += std::string(name) + " cuts: " + std::to_string(cuts.size()) + "\n";
        for (const auto& c : cuts)
            out += "  cut " + std::to_string(c.child) + " " + std::to_string(c.parent) + "\n";
    };
    cuts_block("step1", trace.cuts1);
    cuts_block("step2", trace.cuts2);
    cuts_block("step3", trace.cuts3);
    out += "step4 permutation size: " + std::to_string(trace.step4_perm.moved_count()) + "\n";
    auto moved = trace.step4_perm.moved_pairs();
    if (!moved.empty()) {
        out += "  perm";
        for (auto [x, y] : moved) out += " " + std::to_string(x) + ":" + std::to_string(y);
        out += "\n";
    }
    out += "total ops: " + std::to_string(trace.total_ops()) + "\n";
    return out;
}

}  // namespace treedist
