#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "treedist/forest.hpp"

namespace treedist {

/// Ordered parent pairs (p1, p2) of nodes whose parents are defined in both
/// forests and differ.
std::set<std::pair<int, int>> family_partition(const LabeledForest& f1, const LabeledForest& f2);

/// Edges {i, j} (i < j) between siblings of f1 whose f2 parents are defined
/// and differ; both parents defined on both sides.
std::set<std::pair<int, int>> migrations_graph(const LabeledForest& f1, const LabeledForest& f2);

/// Maximum matching of the migrations graph with witness edges. Per sibling
/// group the graph is complete multipartite, so the pairing rule is exact.
struct MigrationsMatching {
    std::vector<std::pair<int, int>> edges;
    int size() const { return static_cast<int>(edges.size()); }
};
MigrationsMatching migrations_max_matching(const LabeledForest& f1, const LabeledForest& f2);

/// Splits a multiset into f = min{|S| - freq(mode), floor(|S|/2)} pairs of
/// unequal elements plus the leftovers.
struct PairPartition {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> leftover;
};
PairPartition pair_partition(std::vector<int> multiset);

/// Mode with ties broken toward the smallest value; second is its multiplicity.
std::pair<int, int> multiset_mode(const std::vector<int>& values);

struct StepTrace {
    LabeledForest after_step1, after_step2, after_step3, after_step4;
    std::vector<CutOp> cuts1, cuts2, cuts3;
    Permutation step4_perm;
    std::vector<int> rep;        // size n+1; representative per node after step 2
    std::vector<int> rep_prime;  // after step 3

    long long alg(int step) const;
    long long total_ops() const { return alg(1) + alg(2) + alg(3) + alg(4); }
};

struct Step1Result {
    LabeledForest forest;
    std::vector<CutOp> cuts;
};
struct Step2Result {
    LabeledForest forest;
    std::vector<CutOp> cuts;
    std::vector<int> rep;  // size n+1
};
struct Step4Result {
    LabeledForest forest;
    Permutation perm;
};

/// Makes every disagreeing parent on either side a root.
Step1Result step1(const LabeledForest& f1, const LabeledForest& f2);
/// Keeps, under each node, only children sharing the most common f2 parent.
Step2Result step2(const LabeledForest& f1, const LabeledForest& f2);
/// Mirror of step 2 driven by f2's children and f1's parents.
Step2Result step3(const LabeledForest& f1, const LabeledForest& f2);
/// Closes the parent requirements into cycles and applies the permutation.
Step4Result step4(const LabeledForest& f1, const LabeledForest& f2);

struct ApproxResult {
    EditScript script;  // cuts of steps 1-3 then one permutation
    StepTrace trace;
};

/// Four-step constant-factor approximation; the result script applied to f1 is
/// verified to be similar to f2.
ApproxResult approximate_rearrangement(const LabeledForest& f1, const LabeledForest& f2);

struct TreeApproxResult {
    long long size = 0;
    LabeledForest anchored1, anchored2;
    EditScript cut_script;  // on the anchored trees
    /// Present when the final permutation fixes the root: a same-size script of
    /// link-and-cut ops transforming anchored1 exactly into anchored2.
    std::optional<EditScript> link_script;
    StepTrace trace;
};

/// Anchors both trees (which must share their root label) and approximates the
/// link-and-cut rearrangement distance.
TreeApproxResult approximate_tree_distance(const LabeledForest& t1, const LabeledForest& t2);

std::string format_trace(const StepTrace& trace);

}  // namespace treedist
