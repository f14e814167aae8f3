#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace treedist {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotIsomorphicError : public std::runtime_error {
public:
    NotIsomorphicError() : std::runtime_error("trees are not isomorphic") {}
};

/// Rooted forest on labels 1..n stored as a parent vector; parent 0 marks a root.
/// Immutable after construction.
class LabeledForest {
public:
    LabeledForest() = default;

    /// parents[i-1] is the parent of label i (0 for roots). Validates range,
    /// parent[i] != i and acyclicity.
    static LabeledForest from_parents(std::vector<int> parents);

    int node_count() const { return n_; }
    int parent(int u) const { return parent_[u]; }
    bool is_root(int u) const { return parent_[u] == 0; }
    bool is_tree() const;
    std::vector<int> roots() const;
    int root() const;  // sole root; throws ValidationError unless is_tree()

    /// children_lists()[u] are the children of u in ascending order; slot 0 unused.
    std::vector<std::vector<int>> children_lists() const;

    bool operator==(const LabeledForest&) const = default;

private:
    int n_ = 0;
    std::vector<int> parent_;  // size n_+1, slot 0 unused
};

/// level[u] = distance from u to its root, roots at level 0; slot 0 unused.
std::vector<int> levels(const LabeledForest& f);

/// Bijection on [n] stored as an image vector.
class Permutation {
public:
    static Permutation identity(int n);
    static Permutation from_image(std::vector<int> image);  // image[i-1] = pi(i)
    /// Moved labels only; unlisted labels are fixed. The listed pairs must form
    /// a bijection on the listed domain.
    static Permutation from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

    int domain() const { return n_; }
    int apply(int x) const { return image_[x]; }
    Permutation inverse() const;
    int moved_count() const;
    bool is_identity() const { return moved_count() == 0; }
    std::vector<std::pair<int, int>> moved_pairs() const;

    bool operator==(const Permutation&) const = default;

private:
    int n_ = 0;
    std::vector<int> image_;  // size n_+1, slot 0 unused
};

struct CutOp {
    int child = 0;
    int parent = 0;
    bool operator==(const CutOp&) const = default;
};

struct LinkAndCutOp {
    int child = 0;
    int old_parent = 0;
    int new_parent = 0;
    bool operator==(const LinkAndCutOp&) const = default;
};

struct PermuteOp {
    std::vector<std::pair<int, int>> mapping;  // moved labels only, sorted by source
    bool operator==(const PermuteOp&) const = default;
};

using EditOp = std::variant<CutOp, LinkAndCutOp, PermuteOp>;

struct EditScript {
    std::vector<EditOp> ops;
};

/// Cut and link-and-cut count 1 each; a permutation counts its moved labels.
long long script_size(const EditScript& s);

LabeledForest apply_op(const LabeledForest& f, const EditOp& op);
LabeledForest apply_permutation(const LabeledForest& f, const Permutation& pi);
LabeledForest apply_script(const LabeledForest& f, const EditScript& s);

/// Per-node condition: equal parents, or u is a root in either forest.
bool similar(const LabeledForest& f1, const LabeledForest& f2);

/// Tree on n nodes -> tree on 2n nodes with fresh leaves n+1..2n under the root.
LabeledForest anchor(const LabeledForest& tree);

// File formats. Forest: "n\np1 p2 ... pn\n", '#' lines are comments.
// Script: one op per line: "cut v u", "link v u w", "perm x1:y1 x2:y2 ...".
LabeledForest parse_forest(std::string_view text);
std::string format_forest(const LabeledForest& f);
EditScript parse_script(std::string_view text);
std::string format_script(const EditScript& s);

}  // namespace treedist
