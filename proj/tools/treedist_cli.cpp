// Command line front end: distances, witness scripts, generators, the
// matching reduction, and brute-force oracle cross-checks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "treedist/check.hpp"
#include "treedist/forest.hpp"
#include "treedist/generators.hpp"
#include "treedist/isomorphism.hpp"
#include "treedist/matching.hpp"
#include "treedist/oracles.hpp"
#include "treedist/perm_distance.hpp"
#include "treedist/rearrange.hpp"
#include "treedist/reduction.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNotIsomorphic = 3;
constexpr int kExitVerification = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw treedist::ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw treedist::ParseError("cannot open '" + path + "' for writing");
    out << content;
}

treedist::LabeledForest load_forest(const std::string& path) {
    return treedist::parse_forest(read_file(path));
}

struct CommonFlags {
    bool json = false;
    bool script = false;
    bool trace = false;
    bool oracle = false;
    std::string out;
};

void emit_script(const CommonFlags& flags, const treedist::EditScript& script) {
    std::string text = treedist::format_script(script);
    if (!flags.out.empty())
        write_file(flags.out, text);
    else
        std::cout << text;
}

int run_perm(const std::string& a, const std::string& b, const CommonFlags& flags) {
    auto t1 = load_forest(a), t2 = load_forest(b);
    long long d = treedist::permutation_distance(t1, t2);

    treedist::EditScript script;
    bool verified = false;
    if (flags.script) {
        auto pi = treedist::recover_permutation(t1, t2);
        if (pi.moved_count() != d) throw treedist::InternalError("witness size mismatch");
        if (!pi.is_identity()) script.ops.push_back(treedist::PermuteOp{pi.moved_pairs()});
        verified = treedist::apply_script(t1, script) == t2;
        if (!verified) return kExitVerification;
    }

    long long oracle = -1;
    if (flags.oracle) {
        if (t1.node_count() > treedist::kOraclePermutationCap) {
            std::cerr << "error: --oracle is limited to "
                      << treedist::kOraclePermutationCap << " nodes\n";
            return kExitUsage;
        }
        oracle = treedist::oracle_perm_distance(t1, t2);
    }

    if (flags.json) {
        nlohmann::json j{{"distance", d}};
        if (flags.script) {
            j["script_size"] = treedist::script_size(script);
            j["verified"] = verified;
        }
        if (flags.oracle) j["oracle"] = oracle;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << d << "\n";
        if (flags.oracle) std::cout << "oracle " << oracle << "\n";
        if (flags.script) emit_script(flags, script);
    }
    if (flags.oracle && oracle != d) {
        std::cerr << "error: oracle disagrees\n";
        return kExitVerification;
    }
    return kExitOk;
}

int run_rearrange(const std::string& a, const std::string& b, const CommonFlags& flags) {
    auto f1 = load_forest(a), f2 = load_forest(b);
    auto approx = treedist::approximate_rearrangement(f1, f2);
    long long size = treedist::script_size(approx.script);
    bool verified = treedist::similar(treedist::apply_script(f1, approx.script), f2);
    if (!verified) return kExitVerification;

    long long oracle = -1;
    if (flags.oracle) {
        if (f1.node_count() > treedist::kOracleRearrangementCap) {
            std::cerr << "error: --oracle is limited to "
                      << treedist::kOracleRearrangementCap << " nodes\n";
            return kExitUsage;
        }
        oracle = treedist::oracle_rearrangement(f1, f2);
    }

    if (flags.json) {
        nlohmann::json j{{"distance", size}, {"script_size", size}, {"verified", verified}};
        if (flags.oracle) j["oracle"] = oracle;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << size << "\n";
        if (flags.oracle) std::cout << "oracle " << oracle << "\n";
        if (flags.trace) std::cout << treedist::format_trace(approx.trace);
        if (flags.script) emit_script(flags, approx.script);
    }
    if (flags.oracle && (oracle > size || (oracle == 0) != (size == 0))) {
        std::cerr << "error: approximation violates the oracle bounds\n";
        return kExitVerification;
    }
    return kExitOk;
}

int run_tree_rearrange(const std::string& a, const std::string& b, const CommonFlags& flags) {
    auto t1 = load_forest(a), t2 = load_forest(b);
    auto result = treedist::approximate_tree_distance(t1, t2);
    const treedist::EditScript& script =
        result.link_script ? *result.link_script : result.cut_script;

    if (flags.json) {
        nlohmann::json j{{"distance", result.size},
                         {"script_size", treedist::script_size(script)},
                         {"verified", true},
                         {"exact_witness", result.link_script.has_value()}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << result.size << "\n";
        if (flags.trace) std::cout << treedist::format_trace(result.trace);
        if (flags.script) emit_script(flags, script);
    }
    return kExitOk;
}

int run_oracle(const std::string& which, const std::string& a, const std::string& b,
               bool json) {
    auto f1 = load_forest(a), f2 = load_forest(b);
    long long value;
    if (which == "perm")
        value = treedist::oracle_perm_distance(f1, f2);
    else
        value = treedist::oracle_rearrangement(f1, f2);
    if (json)
        std::cout << nlohmann::json{{"distance", value}}.dump() << "\n";
    else
        std::cout << value << "\n";
    return kExitOk;
}

int run_verify(const std::string& a, const std::string& s, const std::string& b, bool json) {
    auto f1 = load_forest(a), f2 = load_forest(b);
    auto script = treedist::parse_script(read_file(s));
    bool ok = false;
    std::string reason;
    try {
        ok = treedist::similar(treedist::apply_script(f1, script), f2);
        if (!ok) reason = "result is not similar to the target";
    } catch (const treedist::PreconditionError& e) {
        reason = e.what();
    }
    if (json)
        std::cout << nlohmann::json{{"verified", ok}}.dump() << "\n";
    else
        std::cout << (ok ? "ok" : "failed: " + reason) << "\n";
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"distances between fully-labelled rooted trees and forests"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string in_a, in_b, in_script;

    auto add_common = [&](CLI::App* cmd, bool with_trace, bool with_oracle) {
        cmd->add_flag("--json", flags.json, "machine readable output");
        cmd->add_flag("--script", flags.script, "emit the witness edit script");
        cmd->add_option("--out", flags.out, "write the script to this file");
        if (with_trace) cmd->add_flag("--trace", flags.trace, "print the per-step report");
        if (with_oracle)
            cmd->add_flag("--oracle", flags.oracle, "cross-check against the brute-force oracle");
    };

    auto* perm = app.add_subcommand("perm", "exact permutation distance between two trees");
    perm->add_option("tree1", in_a)->required();
    perm->add_option("tree2", in_b)->required();
    add_common(perm, false, true);

    auto* rearrange =
        app.add_subcommand("rearrange", "approximate rearrangement distance between forests");
    rearrange->add_option("forest1", in_a)->required();
    rearrange->add_option("forest2", in_b)->required();
    add_common(rearrange, true, true);

    auto* tree_re = app.add_subcommand(
        "tree-rearrange", "anchor two same-root trees and approximate their distance");
    tree_re->add_option("tree1", in_a)->required();
    tree_re->add_option("tree2", in_b)->required();
    add_common(tree_re, true, false);

    int gen_n = 0, gen_roots = 1, gen_relabel = -1;
    std::uint64_t gen_seed = 0;
    std::string gen_prefix;
    auto* gen = app.add_subcommand("gen", "generate a random forest (optionally a relabeled twin)");
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--seed", gen_seed, "rng seed")->required();
    gen->add_option("--roots", gen_roots, "number of roots (default 1)");
    gen->add_option("--relabel", gen_relabel, "also emit a twin with k labels permuted");
    gen->add_option("--out-prefix", gen_prefix, "write <prefix>.tree (and <prefix>.relabeled.tree)");

    std::string reduce_in, reduce_prefix;
    bool reduce_json = false;
    auto* reduce = app.add_subcommand(
        "reduce", "turn a bipartite graph into two trees whose permutation distance encodes "
                  "its maximum matching");
    reduce->add_option("graph", reduce_in)->required();
    reduce->add_option("--out-prefix", reduce_prefix)->required();
    reduce->add_flag("--json", reduce_json, "machine readable output");

    std::string oracle_kind;
    bool oracle_json = false;
    auto* oracle = app.add_subcommand("oracle", "brute-force distances on tiny inputs");
    oracle->add_option("kind", oracle_kind)->check(CLI::IsMember({"perm", "rearrange"}))->required();
    oracle->add_option("input1", in_a)->required();
    oracle->add_option("input2", in_b)->required();
    oracle->add_flag("--json", oracle_json, "machine readable output");

    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "apply a script and check similarity");
    verify->add_option("forest1", in_a)->required();
    verify->add_option("script", in_script)->required();
    verify->add_option("forest2", in_b)->required();
    verify->add_flag("--json", verify_json, "machine readable output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (perm->parsed()) return run_perm(in_a, in_b, flags);
        if (rearrange->parsed()) return run_rearrange(in_a, in_b, flags);
        if (tree_re->parsed()) return run_tree_rearrange(in_a, in_b, flags);
        if (gen->parsed()) {
            auto f = treedist::random_forest(gen_n, gen_roots, gen_seed);
            if (gen_relabel >= 0 && gen_prefix.empty()) {
                std::cerr << "error: --relabel requires --out-prefix\n";
                return kExitUsage;
            }
            if (gen_prefix.empty()) {
                std::cout << treedist::format_forest(f);
            } else {
                write_file(gen_prefix + ".tree", treedist::format_forest(f));
                if (gen_relabel >= 0) {
                    auto twin = treedist::random_relabel(f, gen_relabel, gen_seed + 1);
                    write_file(gen_prefix + ".relabeled.tree", treedist::format_forest(twin));
                }
            }
            return kExitOk;
        }
        if (reduce->parsed()) {
            auto g = treedist::parse_graph(read_file(reduce_in));
            treedist::BipartiteGraph unweighted;
            unweighted.left_count = g.left_count;
            unweighted.right_count = g.right_count;
            for (const auto& e : g.edges) unweighted.edges.emplace_back(e.left, e.right);
            auto reduced = treedist::degree_reduce(unweighted);
            auto trees = treedist::matching_to_trees(reduced.graph);
            write_file(reduce_prefix + ".t1.tree", treedist::format_forest(trees.t1));
            write_file(reduce_prefix + ".t2.tree", treedist::format_forest(trees.t2));
            if (reduce_json) {
                nlohmann::json j{{"splits", reduced.splits},
                                 {"edges", trees.edge_count},
                                 {"nodes", trees.t1.node_count()}};
                std::cout << j.dump() << "\n";
            } else {
                std::cout << "splits " << reduced.splits << "\n"
                          << "edges " << trees.edge_count << "\n"
                          << "nodes " << trees.t1.node_count() << "\n";
            }
            return kExitOk;
        }
        if (oracle->parsed()) return run_oracle(oracle_kind, in_a, in_b, oracle_json);
        if (verify->parsed()) return run_verify(in_a, in_script, in_b, verify_json);
    } catch (const treedist::NotIsomorphicError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNotIsomorphic;
    } catch (const treedist::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const treedist::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const treedist::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
