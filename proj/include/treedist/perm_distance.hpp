#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "treedist/forest.hpp"
#include "treedist/heavy_path.hpp"
#include "treedist/isomorphism.hpp"
#include "treedist/matching.hpp"

namespace treedist {

/// Conserved-subtree counts for every same-level isomorphic pair, computed
/// bottom-up with the reference weighted matcher. Quadratic; doubles as the
/// oracle for the fast path at medium scale.
struct ConservedTable {
    int n = 0;
    std::unordered_map<long long, long long> value;  // key(u,v) -> count
    long long root_value = 0;

    long long key(int u, int v) const { return static_cast<long long>(u) * (n + 1) + v; }
    bool has(int u, int v) const { return value.count(key(u, v)) > 0; }
    long long at(int u, int v) const { return value.at(key(u, v)); }
};

ConservedTable conserved_table_baseline(const LabeledForest& t1, const LabeledForest& t2);
long long max_conserved_baseline(const LabeledForest& t1, const LabeledForest& t2);

struct FastStats {
    long long cross_graphs = 0;    // graphs identified through a cross edge
    long long diagonal_graphs = 0; // same-label graphs added by the second pass
    long long cross_edges = 0;     // deduplicated cross edges over all graphs
    long long cross_weight = 0;    // their resolved weights summed
    long long split_checks = 0;
    DecompositionAccounting matching;
};

struct FastOptions {
    bool record_witness = false;  // keep chosen matchings for permutation recovery
    bool check_split = false;     // cross-check the two-part value against a direct matcher
};

/// The subquadratic conserved-count computation. Only graphs reachable through
/// a cross edge or sitting on the shared-label diagonal are materialized; the
/// rest resolve through per-heavy-path-pair level lists.
class ConservedSolver {
public:
    ConservedSolver(const LabeledForest& t1, const LabeledForest& t2);  // throws NotIsomorphicError

    void classify();
    void populate();
    void process(const FastOptions& opts = {});
    void run(const FastOptions& opts = {});  // all three phases

    long long root_value() const;
    /// Conserved count for any pair with equal levels and isomorphic subtrees.
    long long lookup(int u, int v) const;

    struct GraphView {
        std::pair<int, int> key;
        bool from_cross_pass = false;
        std::vector<std::pair<int, int>> cross_edges;  // deduplicated after process()
        std::pair<int, int> heavy_pair{0, 0};          // {0,0} for leaf pairs
        long long value = -1;
    };
    std::vector<std::pair<int, int>> graph_keys() const;
    GraphView graph_view(int u, int v) const;

    const FastStats& stats() const { return stats_; }
    const HeavyPathDecomposition& decomposition1() const { return hpd1_; }
    const HeavyPathDecomposition& decomposition2() const { return hpd2_; }
    const CanonicalIds& ids() const { return ids_; }

    /// Bijection realizing the conserved count; requires record_witness.
    Permutation recover() const;

private:
    struct Slot {
        bool from_cross_pass = false;
        std::vector<std::pair<int, int>> cross_edges;
        long long value = -1;
        std::vector<std::pair<int, int>> chosen;  // witness matching, resolved pairs
        bool chose_heavy = false;
    };

    long long resolve(int u, int v) const;

    const LabeledForest& t1_;
    const LabeledForest& t2_;
    CanonicalIds ids_;
    HeavyPathDecomposition hpd1_, hpd2_;
    std::vector<std::vector<int>> ch1_, ch2_;
    std::vector<int> diagonal_;  // labels with equal levels and isomorphic subtrees
    std::map<std::pair<int, int>, Slot> slots_;
    std::map<std::pair<int, int>, std::vector<std::pair<int, long long>>> level_lists_;
    FastStats stats_;
    int phase_ = 0;
    bool witness_ = false;
};

long long max_conserved_fast(const LabeledForest& t1, const LabeledForest& t2,
                             FastStats* stats = nullptr);

/// n minus the conserved count. Throws NotIsomorphicError when undefined.
long long permutation_distance(const LabeledForest& t1, const LabeledForest& t2);

/// A permutation of minimum size transforming t1 into t2.
Permutation recover_permutation(const LabeledForest& t1, const LabeledForest& t2);

}  // namespace treedist
