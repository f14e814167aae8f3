#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "treedist/forest.hpp"
#include "treedist/isomorphism.hpp"

namespace treedist {

/// Heavy path decomposition of a single tree. Paths run head-to-leaf with
/// consecutive levels; every non-leaf has exactly one heavy child.
class HeavyPathDecomposition {
public:
    int node_count() const { return n_; }
    int parent(int u) const { return parent_[u]; }
    int level(int u) const { return level_[u]; }
    int subtree_size(int u) const { return size_[u]; }
    int heavy_child(int u) const { return heavy_[u]; }  // 0 for leaves
    int head(int u) const { return path_[path_id_[u]][0]; }
    int position(int u) const { return pos_[u]; }
    const std::vector<int>& path_of(int u) const { return path_[path_id_[u]]; }
    int path_count() const { return static_cast<int>(path_.size()); }

    /// Node on u's heavy path at level lvl, if the path reaches that deep.
    /// Throws PreconditionError when lvl is above the head of the path.
    std::optional<int> access(int u, int lvl) const;

private:
    friend std::pair<HeavyPathDecomposition, HeavyPathDecomposition> decompose_consistent(
        const LabeledForest&, const LabeledForest&, const CanonicalIds&);

    int n_ = 0;
    std::vector<int> parent_, level_, size_, heavy_, pos_, path_id_;
    std::vector<std::vector<int>> path_;
};

/// Decomposes both trees so that nodes with isomorphic subtrees pick heavy
/// children with isomorphic subtrees, within and across the trees. Ties go to
/// the smallest child id among maximum-size candidates, and among a node's own
/// children with that id to the smallest label.
std::pair<HeavyPathDecomposition, HeavyPathDecomposition> decompose_consistent(
    const LabeledForest& t1, const LabeledForest& t2, const CanonicalIds& ids);

/// Streams the ancestor pairs (z, w) of (u, v) with equal levels where z heads
/// its heavy path or w heads its heavy path. Emits O(log n) pairs, deepest
/// first, ending with the root pair.
class AncestorPairCursor {
public:
    AncestorPairCursor(const HeavyPathDecomposition& d1, const HeavyPathDecomposition& d2,
                       int u, int v);

    std::optional<std::pair<int, int>> next();

private:
    const HeavyPathDecomposition& d1_;
    const HeavyPathDecomposition& d2_;
    int u_, v_;  // 0 once a walker passes its root
};

}  // namespace treedist
