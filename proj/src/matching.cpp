#include "treedist/matching.hpp"

#include "treedist/check.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <queue>
#include <sstream>

namespace treedist {

namespace {

void check_endpoints(int left, int right, int nl, int nr) {
    if (left < 1 || left > nl || right < 1 || right > nr)
        throw ValidationError("edge (" + std::to_string(left) + "," + std::to_string(right) +
                              ") references an undeclared vertex");
}

void check_no_parallel(std::vector<std::pair<int, int>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
        throw ValidationError("graph has parallel edges");
}

}  // namespace

void validate(const BipartiteGraph& g) {
    for (auto [l, r] : g.edges) check_endpoints(l, r, g.left_count, g.right_count);
    check_no_parallel(g.edges);
}

void validate(const WeightedBipartiteGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        check_endpoints(e.left, e.right, g.left_count, g.right_count);
        if (e.weight < 1) throw ValidationError("edge weights must be positive");
        pairs.emplace_back(e.left, e.right);
    }
    check_no_parallel(std::move(pairs));
}

namespace {

constexpr int kInf = INT_MAX / 2;

// Hopcroft-Karp on adjacency lists (1-based). match arrays use 0 for exposed.
struct HopcroftKarp {
    int nl, nr;
    std::vector<std::vector<int>> adj;
    std::vector<int> match_l, match_r, dist;

    explicit HopcroftKarp(const BipartiteGraph& g)
        : nl(g.left_count), nr(g.right_count), adj(nl + 1), match_l(nl + 1, 0),
          match_r(nr + 1, 0), dist(nl + 1) {
        for (auto [l, r] : g.edges) adj[l].push_back(r);
        for (auto& a : adj) std::sort(a.begin(), a.end());
    }

    bool bfs() {
        std::queue<int> q;
        for (int l = 1; l <= nl; ++l) {
            if (match_l[l] == 0) {
                dist[l] = 0;
                q.push(l);
            } else {
                dist[l] = kInf;
            }
        }
        bool found = false;
        while (!q.empty()) {
            int l = q.front();
            q.pop();
            for (int r : adj[l]) {
                int l2 = match_r[r];
                if (l2 == 0) {
                    found = true;
                } else if (dist[l2] == kInf) {
                    dist[l2] = dist[l] + 1;
                    q.push(l2);
                }
            }
        }
        return found;
    }

    bool augment(int l) {
        for (int r : adj[l]) {
            int l2 = match_r[r];
            if (l2 == 0 || (dist[l2] == dist[l] + 1 && augment(l2))) {
                match_l[l] = r;
                match_r[r] = l;
                return true;
            }
        }
        dist[l] = kInf;
        return false;
    }

    void run() {
        while (bfs()) {
            for (int l = 1; l <= nl; ++l)
                if (match_l[l] == 0) augment(l);
        }
    }

    Matching matching() const {
        Matching m;
        for (int l = 1; l <= nl; ++l)
            if (match_l[l] != 0) m.edges.emplace_back(l, match_l[l]);
        return m;
    }
};

}  // namespace

Matching max_matching(const BipartiteGraph& g) {
    validate(g);
    HopcroftKarp hk(g);
    hk.run();
    return hk.matching();
}

MatchingWithCover max_matching_with_cover(const BipartiteGraph& g) {
    validate(g);
    HopcroftKarp hk(g);
    hk.run();

    // Koenig: alternate from exposed left vertices; cover = (L \ Z) u (R & Z).
    std::vector<char> zl(hk.nl + 1, 0), zr(hk.nr + 1, 0);
    std::queue<int> q;
    for (int l = 1; l <= hk.nl; ++l)
        if (hk.match_l[l] == 0) {
            zl[l] = 1;
            q.push(l);
        }
    while (!q.empty()) {
        int l = q.front();
        q.pop();
        for (int r : hk.adj[l]) {
            if (zr[r] || hk.match_l[l] == r) continue;
            zr[r] = 1;
            int l2 = hk.match_r[r];
            if (l2 != 0 && !zl[l2]) {
                zl[l2] = 1;
                q.push(l2);
            }
        }
    }

    MatchingWithCover out;
    out.matching = hk.matching();
    out.left_in_cover.assign(hk.nl + 1, 0);
    out.right_in_cover.assign(hk.nr + 1, 0);
    int cover_size = 0;
    for (int l = 1; l <= hk.nl; ++l)
        if (!zl[l] && hk.match_l[l] != 0) {
            out.left_in_cover[l] = 1;
            ++cover_size;
        }
    for (int r = 1; r <= hk.nr; ++r)
        if (zr[r]) {
            out.right_in_cover[r] = 1;
            ++cover_size;
        }
    TREEDIST_CHECK(cover_size == out.matching.size(), "cover size differs from matching size");
    return out;
}

namespace {

// Shared peel loop: repeatedly match the heaviest edge class and charge its
// minimum vertex cover against the edge weights. Accumulates per-vertex
// potentials, which end up as an optimal fractional-free dual.
struct PeelResult {
    long long value = 0;
    std::vector<long long> y_left, y_right;
};

PeelResult peel_levels(const WeightedBipartiteGraph& g, DecompositionAccounting* acct) {
    PeelResult out;
    out.y_left.assign(g.left_count + 1, 0);
    out.y_right.assign(g.right_count + 1, 0);

    // Buckets by current weight with lazy entries; an edge's weight only
    // decreases, so stale entries are skipped by comparing against cur.
    std::map<long long, std::vector<int>> bucket;
    std::vector<long long> cur(g.edges.size());
    std::vector<std::vector<int>> by_left(g.left_count + 1), by_right(g.right_count + 1);
    for (size_t i = 0; i < g.edges.size(); ++i) {
        cur[i] = g.edges[i].weight;
        bucket[cur[i]].push_back(static_cast<int>(i));
        by_left[g.edges[i].left].push_back(static_cast<int>(i));
        by_right[g.edges[i].right].push_back(static_cast<int>(i));
    }
    const long long total_weight = g.total_weight();
    long long instance_edges = 0;

    while (!bucket.empty()) {
        auto top = std::prev(bucket.end());
        const long long w_top = top->first;
        std::vector<int> level;
        for (int i : top->second)
            if (cur[i] == w_top) level.push_back(i);
        bucket.erase(top);
        if (level.empty()) continue;

        // Compact the level's endpoints into a dense unweighted instance.
        std::vector<int> lefts, rights;
        for (int i : level) {
            lefts.push_back(g.edges[i].left);
            rights.push_back(g.edges[i].right);
        }
        std::sort(lefts.begin(), lefts.end());
        lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());
        std::sort(rights.begin(), rights.end());
        rights.erase(std::unique(rights.begin(), rights.end()), rights.end());
        auto dense = [](const std::vector<int>& ids, int v) {
            return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin()) + 1;
        };
        BipartiteGraph h;
        h.left_count = static_cast<int>(lefts.size());
        h.right_count = static_cast<int>(rights.size());
        for (int i : level)
            h.edges.emplace_back(dense(lefts, g.edges[i].left), dense(rights, g.edges[i].right));

        MatchingWithCover mc = max_matching_with_cover(h);
        out.value += mc.matching.size();
        if (acct) {
            acct->instances += 1;
            acct->instance_edges += static_cast<long long>(level.size());
        }
        instance_edges += static_cast<long long>(level.size());

        // Charge the cover against every edge still alive at a covered vertex,
        // not just the peeled level.
        auto charge_vertex = [&](int orig, const std::vector<int>& incident) {
            for (int i : incident) {
                if (cur[i] <= 0) continue;
                cur[i] -= 1;
                if (cur[i] > 0) bucket[cur[i]].push_back(i);
            }
            (void)orig;
        };
        for (size_t k = 1; k < mc.left_in_cover.size(); ++k)
            if (mc.left_in_cover[k]) {
                out.y_left[lefts[k - 1]] += 1;
                charge_vertex(lefts[k - 1], by_left[lefts[k - 1]]);
            }
        for (size_t k = 1; k < mc.right_in_cover.size(); ++k)
            if (mc.right_in_cover[k]) {
                out.y_right[rights[k - 1]] += 1;
                charge_vertex(rights[k - 1], by_right[rights[k - 1]]);
            }
        for (int i : level)
            TREEDIST_CHECK(cur[i] < w_top, "peeled edge not covered");
    }
    TREEDIST_CHECK(instance_edges <= total_weight,
                   "decomposition generated more instance edges than the total weight");
    return out;
}

}  // namespace

long long max_weight_value(const WeightedBipartiteGraph& g, DecompositionAccounting* acct) {
    validate(g);
    return peel_levels(g, acct).value;
}

namespace {

// Build a maximum-weight matching from an optimal dual: a matching of tight
// edges covering every vertex with positive potential achieves the dual value.
WeightedMatching extract_from_dual(const WeightedBipartiteGraph& g, const PeelResult& dual) {
    std::vector<std::vector<int>> adj(g.left_count + 1);   // tight edges, right ids
    std::vector<std::vector<int>> radj(g.right_count + 1); // tight edges, left ids
    BipartiteGraph tight;
    tight.left_count = g.left_count;
    tight.right_count = g.right_count;
    for (const auto& e : g.edges) {
        long long slack = dual.y_left[e.left] + dual.y_right[e.right] - e.weight;
        TREEDIST_CHECK(slack >= 0, "dual potentials are infeasible");
        if (slack == 0) {
            tight.edges.emplace_back(e.left, e.right);
            adj[e.left].push_back(e.right);
            radj[e.right].push_back(e.left);
        }
    }
    HopcroftKarp hk(tight);
    hk.run();

    // Re-route exposure onto zero-potential vertices: alternate from an exposed
    // positive vertex until an augmenting path or a swappable zero-potential
    // endpoint shows up.
    auto repair_left = [&](int x) {
        std::vector<char> seen_r(g.right_count + 1, 0);
        std::vector<int> prev_r(g.right_count + 1, 0);  // left used to reach r
        std::queue<int> q;
        q.push(x);
        std::vector<char> seen_l(g.left_count + 1, 0);
        seen_l[x] = 1;
        int augment_end = 0, swap_end = 0;
        while (!q.empty() && augment_end == 0) {
            int l = q.front();
            q.pop();
            for (int r : adj[l]) {
                if (seen_r[r]) continue;
                seen_r[r] = 1;
                prev_r[r] = l;
                int l2 = hk.match_r[r];
                if (l2 == 0) {
                    augment_end = r;
                    break;
                }
                if (!seen_l[l2]) {
                    seen_l[l2] = 1;
                    q.push(l2);
                    if (swap_end == 0 && dual.y_left[l2] == 0) swap_end = l2;
                }
            }
        }
        if (augment_end != 0) {
            int r = augment_end;
            while (r != 0) {
                int l = prev_r[r];
                int next = hk.match_l[l];
                hk.match_l[l] = r;
                hk.match_r[r] = l;
                r = (l == x) ? 0 : next;
            }
            return;
        }
        TREEDIST_CHECK(swap_end != 0, "no augmenting path or swappable endpoint");
        int r = hk.match_l[swap_end];
        hk.match_l[swap_end] = 0;
        while (r != 0) {
            int l = prev_r[r];
            int next = hk.match_l[l];
            hk.match_l[l] = r;
            hk.match_r[r] = l;
            r = (l == x) ? 0 : next;
        }
    };
    auto repair_right = [&](int x) {
        std::vector<char> seen_l(g.left_count + 1, 0);
        std::vector<int> prev_l(g.left_count + 1, 0);  // right used to reach l
        std::queue<int> q;
        q.push(x);
        std::vector<char> seen_r(g.right_count + 1, 0);
        seen_r[x] = 1;
        int augment_end = 0, swap_end = 0;
        while (!q.empty() && augment_end == 0) {
            int r = q.front();
            q.pop();
            for (int l : radj[r]) {
                if (seen_l[l]) continue;
                seen_l[l] = 1;
                prev_l[l] = r;
                int r2 = hk.match_l[l];
                if (r2 == 0) {
                    augment_end = l;
                    break;
                }
                if (!seen_r[r2]) {
                    seen_r[r2] = 1;
                    q.push(r2);
                    if (swap_end == 0 && dual.y_right[r2] == 0) swap_end = r2;
                }
            }
        }
        if (augment_end != 0) {
            int l = augment_end;
            while (l != 0) {
                int r = prev_l[l];
                int next = hk.match_r[r];
                hk.match_r[r] = l;
                hk.match_l[l] = r;
                l = (r == x) ? 0 : next;
            }
            return;
        }
        TREEDIST_CHECK(swap_end != 0, "no augmenting path or swappable endpoint");
        int l = hk.match_r[swap_end];
        hk.match_r[swap_end] = 0;
        while (l != 0) {
            int r = prev_l[l];
            int next = hk.match_r[r];
            hk.match_r[r] = l;
            hk.match_l[l] = r;
            l = (r == x) ? 0 : next;
        }
    };

    for (int l = 1; l <= g.left_count; ++l)
        if (dual.y_left[l] > 0 && hk.match_l[l] == 0) repair_left(l);
    for (int r = 1; r <= g.right_count; ++r)
        if (dual.y_right[r] > 0 && hk.match_r[r] == 0) repair_right(r);

    std::map<std::pair<int, int>, long long> weight_of;
    for (const auto& e : g.edges) weight_of[{e.left, e.right}] = e.weight;
    WeightedMatching out;
    for (int l = 1; l <= g.left_count; ++l) {
        if (hk.match_l[l] == 0) continue;
        out.edges.emplace_back(l, hk.match_l[l]);
        out.weight += weight_of.at({l, hk.match_l[l]});
    }
    long long dual_value = 0;
    for (long long y : dual.y_left) dual_value += y;
    for (long long y : dual.y_right) dual_value += y;
    TREEDIST_CHECK(out.weight == dual_value, "extracted matching misses the dual value");
    return out;
}

}  // namespace

WeightedMatching max_weight_matching(const WeightedBipartiteGraph& g,
                                     DecompositionAccounting* acct) {
    validate(g);
    PeelResult dual = peel_levels(g, acct);
    WeightedMatching out = extract_from_dual(g, dual);
    TREEDIST_CHECK(out.weight == dual.value, "witness weight differs from decomposition value");
    return out;
}

WeightedMatching max_weight_matching_oracle(const WeightedBipartiteGraph& g) {
    validate(g);
    const int nl = g.left_count, nr = g.right_count;
    std::vector<std::vector<std::pair<int, long long>>> adj(nl + 1);
    for (const auto& e : g.edges) adj[e.left].emplace_back(e.right, e.weight);
    for (auto& a : adj) std::sort(a.begin(), a.end());

    std::vector<long long> yl(nl + 1, 0), yr(nr + 1, 0);
    for (int l = 1; l <= nl; ++l)
        for (auto [r, w] : adj[l]) yl[l] = std::max(yl[l], w);

    std::vector<int> match_l(nl + 1, 0), match_r(nr + 1, 0);
    const long long inf = LLONG_MAX / 4;

    while (true) {
        long long max_y = 0;
        bool any_exposed = false;
        for (int l = 1; l <= nl; ++l)
            if (match_l[l] == 0) {
                any_exposed = true;
                max_y = std::max(max_y, yl[l]);
            }
        if (!any_exposed) break;

        // Dijkstra over reduced costs; left seeds are offset so the best gain
        // over all exposed sources is max_y - d(target).
        std::vector<long long> dl(nl + 1, inf), dr(nr + 1, inf);
        std::vector<int> prev_r(nr + 1, 0);  // left vertex used to reach r
        using Item = std::pair<long long, int>;  // (dist, +l or -r)
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int l = 1; l <= nl; ++l)
            if (match_l[l] == 0) {
                dl[l] = max_y - yl[l];
                pq.emplace(dl[l], l);
            }
        while (!pq.empty()) {
            auto [d, key] = pq.top();
            pq.pop();
            if (key > 0) {
                int l = key;
                if (d != dl[l]) continue;
                for (auto [r, w] : adj[l]) {
                    if (match_l[l] == r) continue;
                    long long rc = yl[l] + yr[r] - w;
                    TREEDIST_CHECK(rc >= 0, "negative reduced cost");
                    if (d + rc < dr[r]) {
                        dr[r] = d + rc;
                        prev_r[r] = l;
                        pq.emplace(dr[r], -r);
                    }
                }
            } else {
                int r = -key;
                if (d != dr[r]) continue;
                int l = match_r[r];
                if (l != 0 && d < dl[l]) {
                    dl[l] = d;
                    pq.emplace(dl[l], l);
                }
            }
        }

        int target = 0;
        for (int r = 1; r <= nr; ++r)
            if (match_r[r] == 0 && dr[r] < inf && (target == 0 || dr[r] < dr[target])) target = r;
        if (target == 0) break;
        long long big_d = dr[target];
        if (max_y - big_d <= 0) break;

        for (int l = 1; l <= nl; ++l) yl[l] -= big_d - std::min(dl[l], big_d);
        for (int r = 1; r <= nr; ++r) yr[r] += big_d - std::min(dr[r], big_d);

        int r = target;
        while (r != 0) {
            int l = prev_r[r];
            int next = match_l[l];
            match_l[l] = r;
            match_r[r] = l;
            r = next;
        }
    }

    std::map<std::pair<int, int>, long long> weight_of;
    for (const auto& e : g.edges) weight_of[{e.left, e.right}] = e.weight;
    WeightedMatching out;
    for (int l = 1; l <= nl; ++l) {
        if (match_l[l] == 0) continue;
        out.edges.emplace_back(l, match_l[l]);
        out.weight += weight_of.at({l, match_l[l]});
    }
    return out;
}

WeightedBipartiteGraph parse_graph(std::string_view text) {
    WeightedBipartiteGraph g;
    std::istringstream lines{std::string(text)};
    std::string line;
    int expected = -1;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream words(line);
        if (expected < 0) {
            if (!(words >> g.left_count >> g.right_count >> expected) || expected < 0)
                throw ParseError("graph header must be 'nL nR m'");
            std::string extra;
            if (words >> extra) throw ParseError("graph header must be 'nL nR m'");
            continue;
        }
        WeightedEdge e;
        e.weight = 1;
        if (!(words >> e.left >> e.right))
            throw ParseError("graph line " + std::to_string(lineno) + ": expected 'i j [w]'");
        words >> e.weight;
        std::string extra;
        if (words >> extra)
            throw ParseError("graph line " + std::to_string(lineno) + ": expected 'i j [w]'");
        g.edges.push_back(e);
    }
    if (expected < 0) throw ParseError("empty graph file");
    if (static_cast<int>(g.edges.size()) != expected)
        throw ParseError("graph declares " + std::to_string(expected) + " edges but lists " +
                         std::to_string(g.edges.size()));
    validate(g);
    return g;
}

std::string format_graph(const WeightedBipartiteGraph& g) {
    std::string out = std::to_string(g.left_count) + " " + std::to_string(g.right_count) + " " +
                      std::to_string(g.edges.size()) + "\n";
    for (const auto& e : g.edges)
        out += std::to_string(e.left) + " " + std::to_string(e.right) + " " +
               std::to_string(e.weight) + "\n";
    return out;
}

}  // namespace treedist
