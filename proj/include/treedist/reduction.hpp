#pragma once

#include <vector>

#include "treedist/forest.hpp"
#include "treedist/matching.hpp"

namespace treedist {

/// Splits every vertex of degree four or more until the maximum degree is 3.
/// Each split raises the maximum matching by exactly one.
struct DegreeReduceResult {
    BipartiteGraph graph;
    int splits = 0;
};
DegreeReduceResult degree_reduce(const BipartiteGraph& g);

/// The two fully-labelled trees built from a max-degree-3 bipartite graph.
/// Isolated vertices are dropped, both sides are padded to m = edge count.
/// Node count is 7m+2 per tree; the permutation distance between the trees is
/// (7m+2) - mm(G).
struct ReductionOutput {
    LabeledForest t1, t2;
    int edge_count = 0;  // m

    // Label ledger: [1..m] side-one vertices, [m+1..2m] side-two vertices,
    // [2m+1..3m] one shared label per edge, [3m+1..5m] pads of t1,
    // [5m+1..7m] pads of t2, 7m+1 root of t1, 7m+2 root of t2.
    int side1_label(int i) const { return i; }
    int side2_label(int j) const { return edge_count + j; }
    int edge_label(int e) const { return 2 * edge_count + e; }
    int root1_label() const { return 7 * edge_count + 1; }
    int root2_label() const { return 7 * edge_count + 2; }
};
ReductionOutput matching_to_trees(const BipartiteGraph& g);

}  // namespace treedist
