#pragma once

#include "treedist/forest.hpp"

namespace treedist {

// Size caps keep the exhaustive searches to fractions of a second.
inline constexpr int kOraclePermutationCap = 9;
inline constexpr int kOracleRearrangementCap = 7;
inline constexpr int kOracleTreeDistanceCap = 7;

/// Exact permutation distance by enumerating every isomorphism recursively
/// (all bijections between isomorphic children classes). Independent of the
/// matching-based computation.
long long oracle_perm_distance(const LabeledForest& t1, const LabeledForest& t2);

/// Exact cut-and-permute distance: minimum over all n! permutations of moved
/// labels plus parent conflicts.
long long oracle_rearrangement(const LabeledForest& f1, const LabeledForest& f2);

/// Exact link-and-cut distance for trees with the same root label: minimum
/// over root-fixing permutations plus a BFS over link-and-cut moves.
long long oracle_tree_distance(const LabeledForest& t1, const LabeledForest& t2);

}  // namespace treedist
