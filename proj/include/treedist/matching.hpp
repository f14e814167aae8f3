#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treedist/forest.hpp"

namespace treedist {

/// Bipartite graph on vertices 1..left_count and 1..right_count.
struct BipartiteGraph {
    int left_count = 0;
    int right_count = 0;
    std::vector<std::pair<int, int>> edges;  // no parallel edges
};

struct WeightedEdge {
    int left = 0;
    int right = 0;
    long long weight = 0;
};

struct WeightedBipartiteGraph {
    int left_count = 0;
    int right_count = 0;
    std::vector<WeightedEdge> edges;  // weights >= 1

    long long total_weight() const {
        long long n = 0;
        for (const auto& e : edges) n += e.weight;
        return n;
    }
};

struct Matching {
    std::vector<std::pair<int, int>> edges;
    int size() const { return static_cast<int>(edges.size()); }
};

struct WeightedMatching {
    long long weight = 0;
    std::vector<std::pair<int, int>> edges;
};

void validate(const BipartiteGraph& g);
void validate(const WeightedBipartiteGraph& g);

/// Hopcroft-Karp. Deterministic: vertices and adjacency are visited in
/// ascending order.
Matching max_matching(const BipartiteGraph& g);

/// Matching plus a Koenig minimum vertex cover (|cover| = |matching|).
struct MatchingWithCover {
    Matching matching;
    std::vector<char> left_in_cover;   // size left_count+1
    std::vector<char> right_in_cover;  // size right_count+1
};
MatchingWithCover max_matching_with_cover(const BipartiteGraph& g);

/// Edge totals of the unweighted instances generated while decomposing one
/// weighted problem. instance_edges never exceeds the graph's total weight.
struct DecompositionAccounting {
    long long instances = 0;
    long long instance_edges = 0;
};

/// Exact maximum weight via decomposition into unweighted matchings: peel the
/// currently-heaviest edge class, add its matching size, subtract its minimum
/// vertex cover from the edge weights, repeat.
long long max_weight_value(const WeightedBipartiteGraph& g,
                           DecompositionAccounting* acct = nullptr);

/// Same decomposition, plus a witness matching recovered from the optimal
/// vertex potentials accumulated across the peeled levels.
WeightedMatching max_weight_matching(const WeightedBipartiteGraph& g,
                                     DecompositionAccounting* acct = nullptr);

/// Reference implementation: successive max-gain augmenting paths with vertex
/// potentials (Dijkstra on reduced costs).
WeightedMatching max_weight_matching_oracle(const WeightedBipartiteGraph& g);

// Graph file format: "nL nR m" then m lines "i j [w]" (weight defaults to 1).
WeightedBipartiteGraph parse_graph(std::string_view text);
std::string format_graph(const WeightedBipartiteGraph& g);

}  // namespace treedist
