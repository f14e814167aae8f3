#include "treedist/forest.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_set>

namespace treedist {

LabeledForest LabeledForest::from_parents(std::vector<int> parents) {
    const int n = static_cast<int>(parents.size());
    LabeledForest f;
    f.n_ = n;
    f.parent_.assign(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        int p = parents[i - 1];
        if (p < 0 || p > n)
            throw ValidationError("node " + std::to_string(i) + ": parent " +
                                  std::to_string(p) + " out of range");
        if (p == i)
            throw ValidationError("node " + std::to_string(i) + " is its own parent");
        f.parent_[i] = p;
    }
    // Acyclicity: every parent chain must reach a root.
    std::vector<char> state(n + 1, 0);  // 0 new, 1 on current chain, 2 settled
    std::vector<int> chain;
    for (int i = 1; i <= n; ++i) {
        if (state[i] == 2) continue;
        chain.clear();
        int u = i;
        while (u != 0 && state[u] == 0) {
            state[u] = 1;
            chain.push_back(u);
            u = f.parent_[u];
        }
        if (u != 0 && state[u] == 1)
            throw ValidationError("parent cycle through node " + std::to_string(u));
        for (int v : chain) state[v] = 2;
    }
    return f;
}

bool LabeledForest::is_tree() const {
    return n_ >= 1 && static_cast<int>(roots().size()) == 1;
}

std::vector<int> LabeledForest::roots() const {
    std::vector<int> r;
    for (int u = 1; u <= n_; ++u)
        if (parent_[u] == 0) r.push_back(u);
    return r;
}

int LabeledForest::root() const {
    auto r = roots();
    if (r.size() != 1)
        throw ValidationError("forest has " + std::to_string(r.size()) +
                              " roots, expected a single tree");
    return r[0];
}

std::vector<std::vector<int>> LabeledForest::children_lists() const {
    std::vector<std::vector<int>> ch(n_ + 1);
    for (int u = 1; u <= n_; ++u)
        if (parent_[u] != 0) ch[parent_[u]].push_back(u);
    return ch;
}

std::vector<int> levels(const LabeledForest& f) {
    const int n = f.node_count();
    std::vector<int> lvl(n + 1, -1);
    std::vector<int> chain;
    for (int i = 1; i <= n; ++i) {
        if (lvl[i] >= 0) continue;
        chain.clear();
        int u = i;
        while (u != 0 && lvl[u] < 0) {
            chain.push_back(u);
            u = f.parent(u);
        }
        int base = (u == 0) ? 0 : lvl[u] + 1;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            lvl[*it] = base++;
        }
    }
    return lvl;
}

Permutation Permutation::identity(int n) {
    Permutation p;
    p.n_ = n;
    p.image_.resize(n + 1);
    for (int i = 0; i <= n; ++i) p.image_[i] = i;
    return p;
}

Permutation Permutation::from_image(std::vector<int> image) {
    const int n = static_cast<int>(image.size());
    std::vector<char> seen(n + 1, 0);
    for (int x : image) {
        if (x < 1 || x > n) throw ValidationError("permutation image out of range");
        if (seen[x]) throw ValidationError("permutation image repeats " + std::to_string(x));
        seen[x] = 1;
    }
    Permutation p;
    p.n_ = n;
    p.image_.resize(n + 1);
    p.image_[0] = 0;
    for (int i = 1; i <= n; ++i) p.image_[i] = image[i - 1];
    return p;
}

Permutation Permutation::from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
    Permutation p = identity(n);
    std::unordered_set<int> sources, targets;
    for (auto [x, y] : pairs) {
        if (x < 1 || x > n || y < 1 || y > n)
            throw ValidationError("permutation pair out of range");
        if (!sources.insert(x).second)
            throw ValidationError("permutation lists source " + std::to_string(x) + " twice");
        if (!targets.insert(y).second)
            throw ValidationError("permutation lists target " + std::to_string(y) + " twice");
        p.image_[x] = y;
    }
    if (sources != targets)
        throw ValidationError("permutation pairs are not a bijection on the listed labels");
    return p;
}

Permutation Permutation::inverse() const {
    Permutation p;
    p.n_ = n_;
    p.image_.assign(n_ + 1, 0);
    for (int i = 1; i <= n_; ++i) p.image_[image_[i]] = i;
    return p;
}

int Permutation::moved_count() const {
    int c = 0;
    for (int i = 1; i <= n_; ++i)
        if (image_[i] != i) ++c;
    return c;
}

std::vector<std::pair<int, int>> Permutation::moved_pairs() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= n_; ++i)
        if (image_[i] != i) out.emplace_back(i, image_[i]);
    return out;
}

long long script_size(const EditScript& s) {
    long long total = 0;
    for (const auto& op : s.ops) {
        if (std::holds_alternative<CutOp>(op) || std::holds_alternative<LinkAndCutOp>(op)) {
            ++total;
        } else {
            for (auto [x, y] : std::get<PermuteOp>(op).mapping)
                if (x != y) ++total;
        }
    }
    return total;
}

namespace {

bool is_weak_descendant(const LabeledForest& f, int node, int of) {
    for (int u = node; u != 0; u = f.parent(u))
        if (u == of) return true;
    return false;
}

}  // namespace

LabeledForest apply_permutation(const LabeledForest& f, const Permutation& pi) {
    const int n = f.node_count();
    if (pi.domain() != n)
        throw PreconditionError("permutation domain " + std::to_string(pi.domain()) +
                                " does not match forest size " + std::to_string(n));
    std::vector<int> parents(n, 0);
    for (int u = 1; u <= n; ++u) {
        int p = f.parent(u);
        parents[pi.apply(u) - 1] = (p == 0) ? 0 : pi.apply(p);
    }
    return LabeledForest::from_parents(std::move(parents));
}

LabeledForest apply_op(const LabeledForest& f, const EditOp& op) {
    const int n = f.node_count();
    if (const auto* cut = std::get_if<CutOp>(&op)) {
        int v = cut->child, u = cut->parent;
        if (v < 1 || v > n || u < 1 || u > n)
            throw PreconditionError("cut references label out of range");
        if (f.parent(v) != u)
            throw PreconditionError("cut " + std::to_string(v) + " " + std::to_string(u) +
                                    ": node " + std::to_string(v) + " has parent " +
                                    std::to_string(f.parent(v)));
        std::vector<int> parents(n);
        for (int i = 1; i <= n; ++i) parents[i - 1] = f.parent(i);
        parents[v - 1] = 0;
        return LabeledForest::from_parents(std::move(parents));
    }
    if (const auto* lc = std::get_if<LinkAndCutOp>(&op)) {
        int v = lc->child, u = lc->old_parent, w = lc->new_parent;
        if (v < 1 || v > n || u < 1 || u > n || w < 1 || w > n)
            throw PreconditionError("link references label out of range");
        if (f.parent(v) != u)
            throw PreconditionError("link " + std::to_string(v) + " " + std::to_string(u) +
                                    " " + std::to_string(w) + ": node " + std::to_string(v) +
                                    " has parent " + std::to_string(f.parent(v)));
        if (is_weak_descendant(f, w, v))
            throw PreconditionError("link " + std::to_string(v) + " " + std::to_string(u) +
                                    " " + std::to_string(w) + ": new parent is a descendant");
        std::vector<int> parents(n);
        for (int i = 1; i <= n; ++i) parents[i - 1] = f.parent(i);
        parents[v - 1] = w;
        return LabeledForest::from_parents(std::move(parents));
    }
    const auto& perm = std::get<PermuteOp>(op);
    for (auto [x, y] : perm.mapping)
        if (x < 1 || x > n || y < 1 || y > n)
            throw PreconditionError("permutation references label out of range");
    return apply_permutation(f, Permutation::from_pairs(n, perm.mapping));
}

LabeledForest apply_script(const LabeledForest& f, const EditScript& s) {
    LabeledForest cur = f;
    for (size_t i = 0; i < s.ops.size(); ++i) {
        try {
            cur = apply_op(cur, s.ops[i]);
        } catch (const PreconditionError& e) {
            throw PreconditionError("op " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return cur;
}

bool similar(const LabeledForest& f1, const LabeledForest& f2) {
    if (f1.node_count() != f2.node_count())
        throw ValidationError("forests have different sizes");
    for (int u = 1; u <= f1.node_count(); ++u) {
        int p1 = f1.parent(u), p2 = f2.parent(u);
        if (p1 != p2 && p1 != 0 && p2 != 0) return false;
    }
    return true;
}

LabeledForest anchor(const LabeledForest& tree) {
    if (!tree.is_tree()) throw ValidationError("anchor expects a single tree");
    const int n = tree.node_count();
    const int r = tree.root();
    std::vector<int> parents(2 * n);
    for (int i = 1; i <= n; ++i) parents[i - 1] = tree.parent(i);
    for (int i = n + 1; i <= 2 * n; ++i) parents[i - 1] = r;
    return LabeledForest::from_parents(std::move(parents));
}

namespace {

// Strips '#' comment lines, returns whitespace-separated tokens.
std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream words(line);
        std::string w;
        while (words >> w) tokens.push_back(w);
    }
    return tokens;
}

int parse_int(const std::string& tok, const char* what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what + ": '" + tok + "'");
    return value;
}

}  // namespace

LabeledForest parse_forest(std::string_view text) {
    auto tokens = tokenize(text);
    if (tokens.empty()) throw ParseError("empty forest file");
    int n = parse_int(tokens[0], "node count");
    if (n < 1) throw ParseError("node count must be positive");
    if (static_cast<int>(tokens.size()) != n + 1)
        throw ParseError("expected " + std::to_string(n) + " parent entries, got " +
                         std::to_string(tokens.size() - 1));
    std::vector<int> parents(n);
    for (int i = 0; i < n; ++i) parents[i] = parse_int(tokens[i + 1], "parent");
    return LabeledForest::from_parents(std::move(parents));
}

std::string format_forest(const LabeledForest& f) {
    std::string out = std::to_string(f.node_count());
    out += '\n';
    for (int i = 1; i <= f.node_count(); ++i) {
        if (i > 1) out += ' ';
        out += std::to_string(f.parent(i));
    }
    out += '\n';
    return out;
}

EditScript parse_script(std::string_view text) {
    EditScript script;
    std::istringstream lines{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream words(line);
        std::string kind;
        words >> kind;
        auto fail = [&](const std::string& msg) {
            throw ParseError("script line " + std::to_string(lineno) + ": " + msg);
        };
        if (kind == "cut") {
            std::string a, b, extra;
            if (!(words >> a >> b) || (words >> extra))
                fail("expected 'cut v u'");
            script.ops.push_back(CutOp{parse_int(a, "label"), parse_int(b, "label")});
        } else if (kind == "link") {
            std::string a, b, c, extra;
            if (!(words >> a >> b >> c) || (words >> extra))
                fail("expected 'link v u w'");
            script.ops.push_back(LinkAndCutOp{parse_int(a, "label"), parse_int(b, "label"),
                                              parse_int(c, "label")});
        } else if (kind == "perm") {
            PermuteOp op;
            std::string pair;
            while (words >> pair) {
                size_t colon = pair.find(':');
                if (colon == std::string::npos) fail("expected 'x:y' pairs");
                op.mapping.emplace_back(parse_int(pair.substr(0, colon), "label"),
                                        parse_int(pair.substr(colon + 1), "label"));
            }
            // Validates bijection on the listed domain; domain size just needs
            // to cover the labels mentioned.
            int maxl = 1;
            for (auto [x, y] : op.mapping) maxl = std::max({maxl, x, y});
            try {
                Permutation::from_pairs(maxl, op.mapping);
            } catch (const ValidationError& e) {
                fail(e.what());
            }
            script.ops.push_back(std::move(op));
        } else {
            fail("unknown op '" + kind + "'");
        }
    }
    return script;
}

std::string format_script(const EditScript& s) {
    std::string out;
    for (const auto& op : s.ops) {
        if (const auto* cut = std::get_if<CutOp>(&op)) {
            out += "cut " + std::to_string(cut->child) + " " + std::to_string(cut->parent) + "\n";
        } else if (const auto* lc = std::get_if<LinkAndCutOp>(&op)) {
            out += "link " + std::to_string(lc->child) + " " + std::to_string(lc->old_parent) +
                   " " + std::to_string(lc->new_parent) + "\n";
        } else {
            const auto& perm = std::get<PermuteOp>(op);
            out += "perm";
            for (auto [x, y] : perm.mapping)
                out += " " + std::to_string(x) + ":" + std::to_string(y);
            out += "\n";
        }
    }
    return out;
}

}  // namespace treedist
