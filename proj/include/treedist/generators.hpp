#pragma once

#include <cstdint>

#include "treedist/forest.hpp"

namespace treedist {

/// Uniform random attachment (each node picks an earlier parent) followed by a
/// uniform relabeling. Deterministic under seed.
LabeledForest random_tree(int n, std::uint64_t seed);

/// Forest with the requested number of roots, same scheme.
LabeledForest random_forest(int n, int roots, std::uint64_t seed);

/// Applies a random permutation of k sampled labels; k = 0 returns t unchanged.
LabeledForest random_relabel(const LabeledForest& t, int k, std::uint64_t seed);

}  // namespace treedist
