#pragma once

#include <vector>

#include "treedist/forest.hpp"

namespace treedist {

/// Canonical subtree numbering shared across two trees: ids_A[u] == ids_B[v]
/// iff the subtree of u in A is isomorphic to the subtree of v in B.
struct CanonicalIds {
    std::vector<int> ids1;  // size n+1, slot 0 unused
    std::vector<int> ids2;
    int distinct_count = 0;
};

CanonicalIds canonical_ids(const LabeledForest& t1, const LabeledForest& t2);

bool isomorphic(const LabeledForest& t1, const LabeledForest& t2);

}  // namespace treedist
