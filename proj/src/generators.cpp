#include "treedist/generators.hpp"

#include <numeric>
#include <random>

namespace treedist {

namespace {

// mt19937_64 plus uniform_int_distribution is stable across standard library
// implementations only in practice, not by contract; outputs are pinned by the
// test suite, which is enough for reproducibility on one toolchain.
int uniform_in(std::mt19937_64& rng, int lo, int hi) {
    return static_cast<int>(lo + rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    for (int i = n - 1; i > 0; --i) std::swap(p[i], p[uniform_in(rng, 0, i)]);
    return p;
}

}  // namespace

LabeledForest random_forest(int n, int roots, std::uint64_t seed) {
    if (n < 1) throw ValidationError("node count must be positive");
    if (roots < 1 || roots > n) throw ValidationError("root count out of range");
    std::mt19937_64 rng(seed);
    std::vector<int> parents(n, 0);
    for (int i = roots + 1; i <= n; ++i) parents[i - 1] = uniform_in(rng, 1, i - 1);
    auto relabel = random_permutation(n, rng);
    std::vector<int> shuffled(n, 0);
    for (int i = 1; i <= n; ++i) {
        int p = parents[i - 1];
        shuffled[relabel[i - 1] - 1] = (p == 0) ? 0 : relabel[p - 1];
    }
    return LabeledForest::from_parents(std::move(shuffled));
}

LabeledForest random_tree(int n, std::uint64_t seed) { return random_forest(n, 1, seed); }

LabeledForest random_relabel(const LabeledForest& t, int k, std::uint64_t seed) {
    const int n = t.node_count();
    if (k < 0 || k > n) throw ValidationError("relabel count out of range");
    if (k == 0) return t;
    std::mt19937_64 rng(seed);

    // Sample k distinct labels, then permute them among themselves.
    std::vector<int> labels(n);
    std::iota(labels.begin(), labels.end(), 1);
    for (int i = 0; i < k; ++i) std::swap(labels[i], labels[uniform_in(rng, i, n - 1)]);
    labels.resize(k);
    std::sort(labels.begin(), labels.end());
    std::vector<int> images = labels;
    for (int i = k - 1; i > 0; --i) std::swap(images[i], images[uniform_in(rng, 0, i)]);

    std::vector<int> image(n);
    std::iota(image.begin(), image.end(), 1);
    for (int i = 0; i < k; ++i) image[labels[i] - 1] = images[i];
    return apply_permutation(t, Permutation::from_image(std::move(image)));
}

}  // namespace treedist
