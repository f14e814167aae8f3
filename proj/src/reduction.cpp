#include "treedist/reduction.hpp"

#include <algorithm>
#include <deque>

#include "treedist/check.hpp"

namespace treedist {

DegreeReduceResult degree_reduce(const BipartiteGraph& g) {
    validate(g);
    // Adjacency as index lists into a growable edge table.
    std::vector<std::pair<int, int>> edges = g.edges;
    int nl = g.left_count, nr = g.right_count;
    std::vector<std::vector<int>> ladj(nl + 1), radj(nr + 1);
    for (size_t i = 0; i < edges.size(); ++i) {
        ladj[edges[i].first].push_back(static_cast<int>(i));
        radj[edges[i].second].push_back(static_cast<int>(i));
    }

    int splits = 0;
    std::deque<std::pair<bool, int>> queue;  // (is_left, vertex)
    for (int l = 1; l <= nl; ++l)
        if (ladj[l].size() >= 4) queue.emplace_back(true, l);
    for (int r = 1; r <= nr; ++r)
        if (radj[r].size() >= 4) queue.emplace_back(false, r);

    while (!queue.empty()) {
        auto [is_left, u] = queue.front();
        queue.pop_front();
        auto& own = is_left ? ladj : radj;
        auto& other = is_left ? radj : ladj;
        int& own_count = is_left ? nl : nr;
        int& other_count = is_left ? nr : nl;
        if (own[u].size() < 4) continue;

        // u keeps the first k-2 edges; a twin takes the last two; a fresh node
        // on the opposite side joins u and the twin.
        ++own_count;
        int twin = own_count;
        own.emplace_back();
        ++other_count;
        int bridge = other_count;
        other.emplace_back();

        std::vector<int> moved(own[u].end() - 2, own[u].end());
        own[u].resize(own[u].size() - 2);
        for (int e : moved) {
            if (is_left)
                edges[e].first = twin;
            else
                edges[e].second = twin;
            own[twin].push_back(e);
        }
        for (int endpoint : {u, twin}) {
            int e = static_cast<int>(edges.size());
            if (is_left)
                edges.emplace_back(endpoint, bridge);
            else
                edges.emplace_back(bridge, endpoint);
            own[endpoint].push_back(e);
            other[bridge].push_back(e);
        }
        ++splits;
        if (own[u].size() >= 4) queue.emplace_back(is_left, u);
        // twin has degree 3, bridge degree 2
    }

    DegreeReduceResult out;
    out.graph.left_count = nl;
    out.graph.right_count = nr;
    out.graph.edges = std::move(edges);
    out.splits = splits;
    validate(out.graph);
    return out;
}

ReductionOutput matching_to_trees(const BipartiteGraph& g) {
    validate(g);
    std::vector<int> ldeg(g.left_count + 1, 0), rdeg(g.right_count + 1, 0);
    for (auto [l, r] : g.edges) {
        ++ldeg[l];
        ++rdeg[r];
    }
    for (int l = 1; l <= g.left_count; ++l)
        if (ldeg[l] > 3) throw PreconditionError("graph has a vertex of degree > 3");
    for (int r = 1; r <= g.right_count; ++r)
        if (rdeg[r] > 3) throw PreconditionError("graph has a vertex of degree > 3");

    const int m = static_cast<int>(g.edges.size());
    ReductionOutput out;
    out.edge_count = m;

    // Slots 1..m per side; isolated vertices carry no edges and are dropped.
    std::vector<int> lslot(g.left_count + 1, 0), rslot(g.right_count + 1, 0);
    int next_l = 0, next_r = 0;
    for (auto [l, r] : g.edges) {
        if (lslot[l] == 0) lslot[l] = ++next_l;
        if (rslot[r] == 0) rslot[r] = ++next_r;
    }
    TREEDIST_CHECK(next_l <= m && next_r <= m, "non-isolated vertices exceed the edge count");

    const int nodes = 7 * m + 2;
    std::vector<int> p1(nodes, 0), p2(nodes, 0);
    auto set_parent = [&](std::vector<int>& p, int label, int parent) {
        p[label - 1] = parent;
    };

    const int root1 = out.root1_label(), root2 = out.root2_label();
    // Side nodes under their root.
    for (int i = 1; i <= m; ++i) set_parent(p1, out.side1_label(i), root1);
    for (int j = 1; j <= m; ++j) set_parent(p2, out.side2_label(j), root2);
    // One shared leaf label per edge.
    std::vector<int> l_children(m + 1, 0), r_children(m + 1, 0);
    for (int e = 0; e < m; ++e) {
        auto [l, r] = g.edges[e];
        set_parent(p1, out.edge_label(e + 1), out.side1_label(lslot[l]));
        set_parent(p2, out.edge_label(e + 1), out.side2_label(rslot[r]));
        ++l_children[lslot[l]];
        ++r_children[rslot[r]];
    }
    // Pads bring every side node to exactly three leaf children.
    int next_pad1 = 3 * m + 1, next_pad2 = 5 * m + 1;
    for (int i = 1; i <= m; ++i)
        while (l_children[i] < 3) {
            set_parent(p1, next_pad1++, out.side1_label(i));
            ++l_children[i];
        }
    for (int j = 1; j <= m; ++j)
        while (r_children[j] < 3) {
            set_parent(p2, next_pad2++, out.side2_label(j));
            ++r_children[j];
        }
    TREEDIST_CHECK(next_pad1 == 5 * m + 1 && next_pad2 == 7 * m + 1, "pad label accounting is off");
    // Extras: the other side's node labels, the other tree's pad labels, and
    // the other root's label all become leaves under the root. 3m+1 per tree.
    for (int j = 1; j <= m; ++j) set_parent(p1, out.side2_label(j), root1);
    for (int lab = 5 * m + 1; lab <= 7 * m; ++lab) set_parent(p1, lab, root1);
    set_parent(p1, root2, root1);
    for (int i = 1; i <= m; ++i) set_parent(p2, out.side1_label(i), root2);
    for (int lab = 3 * m + 1; lab <= 5 * m; ++lab) set_parent(p2, lab, root2);
    set_parent(p2, root1, root2);

    out.t1 = LabeledForest::from_parents(std::move(p1));
    out.t2 = LabeledForest::from_parents(std::move(p2));
    return out;
}

}  // namespace treedist
