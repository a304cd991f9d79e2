// Copyright 2026 slcsim authors
// License: Apache-2.0
//
// Command-line front end: instance generation, dimension queries, single
// runs, expert-based runners, the star demo, and seed sweeps.

#include <cmath>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "slc/adversary.hpp"
#include "slc/agnostic.hpp"
#include "slc/dimension.hpp"
#include "slc/graph.hpp"
#include "slc/hypothesis.hpp"
#include "slc/learners.hpp"
#include "slc/protocol.hpp"
#include "slc/serialize.hpp"

namespace {

using namespace slc;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitResource = 3;
constexpr int kExitProtocol = 4;

unsigned long long default_cap() {
    if (const char* env = std::getenv("SLC_CAP")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw input_error("SLC_CAP must be an unsigned integer");
        }
    }
    return kExpertCapDefault;
}

TieBreakPolicy make_policy(const std::string& name, const ManipulationGraph& g) {
    if (name == "stay") return TieBreakPolicy::canonical_stay();
    if (name == "lowest") return TieBreakPolicy::lowest_id();
    if (name == "adversarial") {
        // Hide the origin: prefer the response node with the most
        // in-neighbors, breaking ties toward the highest id.
        const ManipulationGraph* graph = &g;
        return TieBreakPolicy::callback([graph](NodeId, std::span<const NodeId> br) {
            NodeId best = br.front();
            std::size_t best_in = graph->in_neighbors(best).size();
            for (NodeId v : br) {
                std::size_t d = graph->in_neighbors(v).size();
                if (d >= best_in) {
                    best = v;
                    best_in = d;
                }
            }
            return best;
        });
    }
    throw input_error("unknown tiebreak policy: " + name);
}

std::unique_ptr<Learner> make_learner(const std::string& name, const HypothesisClass& hc,
                                      const ManipulationGraph& g, std::uint64_t seed) {
    const NodeId n = g.node_count();
    if (name == "ssoa") return ssoa_new(hc, g);
    if (name == "soa") return soa_new(hc);
    if (name == "flip") return flip_positive_to_negative(n);
    if (name == "const+") return constant_learner(n, Label::positive);
    if (name == "const-") return constant_learner(n, Label::negative);
    if (name == "negthenpos") return all_negative_then_all_positive(n);
    if (name == "randstar") {
        if (n < 2) throw input_error("randstar needs a star instance");
        return randomized_star_learner(n - 1, RandomSource(seed));
    }
    throw input_error("unknown learner: " + name);
}

void emit_transcript(const Transcript& tr, const std::string& out_prefix) {
    if (!out_prefix.empty()) {
        save_transcript(tr, out_prefix + ".csv", out_prefix + ".json");
    }
    std::cout << "rounds=" << tr.rows.size() << " mistakes=" << tr.mistakes;
    if (tr.opt_h) std::cout << " opt_h=" << *tr.opt_h;
    if (tr.opt_g) std::cout << " opt_g=" << *tr.opt_g;
    if (tr.regret) std::cout << " regret=" << *tr.regret;
    if (tr.experts) std::cout << " experts=" << tr.experts->count;
    if (!tr.epochs.empty()) std::cout << " epochs=" << tr.epochs.size();
    std::cout << "\n";
    for (const BoundCheck& b : tr.bounds) {
        std::cout << "bound: " << b.name << " : " << b.measured << " vs " << b.bound << " : "
                  << (b.pass ? "PASS" : "FAIL") << "\n";
    }
}

AgentSequence make_or_load_sequence(const std::string& seq_path, const HypothesisClass& hc,
                                    const ManipulationGraph& g, std::size_t T,
                                    std::uint64_t seed, const GraphClass* gc) {
    if (!seq_path.empty()) return load_sequence(seq_path, gc);
    RandomSource rng(seed);
    const std::size_t star_index = rng.next_index(hc.size());
    std::vector<NodeId> xs(T);
    for (auto& x : xs) x = static_cast<NodeId>(rng.next_index(g.node_count()));
    return realizable_sequence(star_index, hc, g, xs);
}

int cmd_gen(const std::string& kind, NodeId n, NodeId delta, double p, std::uint64_t seed,
            const std::string& base_path, NodeId extra, const std::string& out,
            const std::string& class_out) {
    ManipulationGraph g;
    std::optional<HypothesisClass> companion;
    if (kind == "star") {
        g = star(delta);
        companion = point_functions_class(delta);
    } else if (kind == "complete") {
        g = complete(n);
        if (n <= 12) companion = all_functions_class(n);
    } else if (kind == "isolated") {
        g = isolated(n);
        if (n <= 12) companion = all_functions_class(n);
    } else if (kind == "gnp") {
        g = random_gnp(n, p, seed);
        if (n <= 12) companion = all_functions_class(n);
    } else if (kind == "clique-plus") {
        if (base_path.empty()) throw input_error("clique-plus needs --base");
        g = clique_plus(load_graph(base_path), extra);
    } else {
        throw input_error("unknown kind: " + kind);
    }
    save_graph(g, out);
    std::cout << "graph: " << out << " n=" << g.node_count() << " edges=" << g.edge_count()
              << "\n";
    if (companion) {
        std::string cpath = class_out;
        if (cpath.empty()) {
            cpath = out;
            const auto dot = cpath.rfind(".json");
            if (dot != std::string::npos) cpath.erase(dot);
            cpath += ".class.json";
        }
        save_class(*companion, cpath);
        std::cout << "class: " << cpath << " members=" << companion->size() << "\n";
    }
    return kExitOk;
}

int cmd_dim(const std::string& graph_path, const std::string& class_path, bool witness,
            const std::string& out) {
    auto g = load_graph(graph_path);
    auto hc = load_class(class_path);
    if (hc.node_count() != g.node_count()) {
        throw input_error("graph and class disagree on n");
    }
    auto sd = sldim(hc, g);
    auto ld = ldim(hc);
    std::cout << "sldim=" << (sd ? std::to_string(*sd) : "undefined")
              << " ldim=" << (ld ? std::to_string(*ld) : "undefined")
              << " deg_out=" << max_out_degree(g) << " deg_in=" << max_in_degree(g) << "\n";
    if (witness && sd) {
        auto w = sldim_witness(VersionSpace::full_of(hc), g);
        std::string text = witness_to_json_text(w);
        if (out.empty()) {
            std::cout << text;
        } else {
            write_text_file(out, text);
            std::cout << "witness: " << out << " depth=" << w.depth() << "\n";
        }
    }
    return kExitOk;
}

int cmd_run(const RunConfig& cfg, bool adversary_mode, const std::string& out) {
    auto g = load_graph(cfg.graph_path);
    auto hc = load_class(cfg.class_path);
    auto learner = make_learner(cfg.learner, hc, g, cfg.seed);
    const int d = sldim(hc, g).value_or(-1);

    Transcript tr;
    if (adversary_mode) {
        SldimSolver solver(hc, g);
        auto outcome = lower_bound_adversary(solver, *learner);
        tr = std::move(outcome.transcript);
        tr.bounds.push_back({"mistakes == sldim (forced lower bound)",
                             static_cast<double>(tr.mistakes), static_cast<double>(d),
                             static_cast<long long>(tr.mistakes) == d});
    } else {
        auto seq = make_or_load_sequence(cfg.sequence_path, hc, g, cfg.T, cfg.seed, nullptr);
        tr = run_game(*learner, seq, g, make_policy(cfg.tiebreak, g));
        auto [opt_h, idx] = compute_opt_h(seq, hc, g);
        tr.set_opt_h(opt_h, idx);
        if (cfg.learner == "ssoa" && opt_h == 0) {
            tr.bounds.push_back({"mistakes <= sldim (realizable SSOA)",
                                 static_cast<double>(tr.mistakes), static_cast<double>(d),
                                 static_cast<long long>(tr.mistakes) <= d});
        }
    }
    emit_transcript(tr, out);
    return kExitOk;
}

int cmd_agnostic(const RunConfig& cfg, const std::string& out, ExecMode exec) {
    auto g = load_graph(cfg.graph_path);
    auto hc = load_class(cfg.class_path);
    auto seq = make_or_load_sequence(cfg.sequence_path, hc, g, cfg.T, cfg.seed, nullptr);
    RunOptions opt;
    opt.policy = make_policy(cfg.tiebreak, g);
    opt.exec = exec;
    auto tr = agnostic_runner(hc, g, seq, cfg.gamma, cfg.cap, opt);
    emit_transcript(tr, out);
    return kExitOk;
}

int cmd_graphclass(const RunConfig& cfg, std::optional<std::size_t> true_member,
                   const std::string& out, ExecMode exec) {
    auto gc = load_graph_class(cfg.graph_class_path);
    auto hc = load_class(cfg.class_path);
    auto seq = load_sequence(cfg.sequence_path, &gc);
    RunOptions opt;
    opt.policy = make_policy(cfg.tiebreak, gc.union_of());
    opt.exec = exec;
    opt.true_member = true_member;
    Transcript tr;
    if (cfg.budget_N) {
        tr = graph_class_agnostic_runner(hc, gc, seq, *cfg.budget_N, cfg.gamma, cfg.cap, opt);
    } else {
        tr = graph_class_realizable_runner(hc, gc, seq, cfg.gamma, cfg.cap, opt);
    }
    emit_transcript(tr, out);
    return kExitOk;
}

int cmd_doubling(const RunConfig& cfg, const std::string& out, ExecMode exec) {
    auto gc = load_graph_class(cfg.graph_class_path);
    auto hc = load_class(cfg.class_path);
    auto seq = load_sequence(cfg.sequence_path, &gc);
    RunOptions opt;
    opt.policy = make_policy(cfg.tiebreak, gc.union_of());
    opt.exec = exec;
    auto tr = doubling_runner(hc, gc, seq, cfg.gamma, cfg.cap, opt);
    emit_transcript(tr, out);
    return kExitOk;
}

int cmd_demo_star(NodeId delta, int trials, std::uint64_t seed, const std::string& out) {
    if (delta < 2) throw input_error("demo-star needs delta >= 2");
    auto hc = point_functions_class(delta);
    auto g = star_doubled(delta);
    SldimSolver solver(hc, g);
    const int d = solver.dimension(solver.full_mask());

    auto ssoa = ssoa_new(hc, g);
    auto outcome = lower_bound_adversary(solver, *ssoa);
    const std::size_t det = outcome.transcript.mistakes;
    const bool det_pass = det >= static_cast<std::size_t>(delta) - 1;
    std::cout << "deterministic: sldim=" << d << " adversary forced mistakes=" << det
              << " target >= " << (delta - 1) << " : " << (det_pass ? "PASS" : "FAIL") << "\n";

    // Randomized learner against the eliminating adversary: reveal the
    // non-target leaves one by one as false positives, then the target.
    double sum = 0.0, sumsq = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        auto learner = randomized_star_learner(delta, RandomSource(seed * 7919 + trial));
        RandomSource pick(seed * 104729 + trial + 1);
        const NodeId target = static_cast<NodeId>(1 + pick.next_index(delta));
        std::size_t mistakes = 0;
        for (NodeId leaf = 1; leaf <= delta; ++leaf) {
            if (leaf == target) continue;
            const Labeling& h = learner->commit();
            const bool mistake = h[leaf] == Label::positive;
            if (mistake) ++mistakes;
            learner->observe({leaf, Label::negative}, mistake);
        }
        const Labeling& h = learner->commit();
        const bool final_mistake = h[target] != Label::positive;
        if (final_mistake) ++mistakes;
        learner->observe({target, Label::positive}, final_mistake);
        sum += static_cast<double>(mistakes);
        sumsq += static_cast<double>(mistakes) * static_cast<double>(mistakes);
    }
    const double mean = sum / trials;
    const double var = std::max(0.0, sumsq / trials - mean * mean);
    const double std_dev = std::sqrt(var);
    double h_delta = 0.0;
    for (NodeId k = 1; k <= delta; ++k) h_delta += 1.0 / static_cast<double>(k);
    const double margin = 3.0 * std_dev / std::sqrt(static_cast<double>(trials));
    const bool rand_pass = mean <= h_delta + margin;
    std::cout << "randomized: trials=" << trials << " mean=" << mean << " std=" << std_dev
              << " target <= H_" << delta << "=" << h_delta << " + 3*sem=" << margin << " : "
              << (rand_pass ? "PASS" : "FAIL") << "\n";

    if (!out.empty()) {
        std::string json = std::string("{\n") +
                           "  \"delta\": " + std::to_string(delta) + ",\n" +
                           "  \"sldim\": " + std::to_string(d) + ",\n" +
                           "  \"deterministic_mistakes\": " + std::to_string(det) + ",\n" +
                           "  \"deterministic_target\": " + std::to_string(delta - 1) + ",\n" +
                           "  \"deterministic_pass\": " + (det_pass ? "true" : "false") + ",\n" +
                           "  \"trials\": " + std::to_string(trials) + ",\n" +
                           "  \"randomized_mean\": " + std::to_string(mean) + ",\n" +
                           "  \"randomized_std\": " + std::to_string(std_dev) + ",\n" +
                           "  \"h_delta\": " + std::to_string(h_delta) + ",\n" +
                           "  \"margin\": " + std::to_string(margin) + ",\n" +
                           "  \"randomized_pass\": " + (rand_pass ? "true" : "false") + "\n}\n";
        write_text_file(out, json);
    }
    return (det_pass && rand_pass) ? kExitOk : 1;
}

int cmd_sweep(const std::string& kind, NodeId n, double p, std::size_t T, int runs,
              std::uint64_t seed0, const std::string& learner_name, const std::string& tiebreak,
              const std::string& out) {
    if (n > 10) throw input_error("sweep caps n at 10 (class size)");
    struct Row {
        std::uint64_t seed = 0;
        int sldim_value = -1;
        std::size_t mistakes = 0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(runs));
    std::exception_ptr failure;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < runs; ++i) {
        try {
            const std::uint64_t seed = seed0 + static_cast<std::uint64_t>(i);
            ManipulationGraph g;
            if (kind == "gnp") {
                g = random_gnp(n, p, seed);
            } else if (kind == "complete") {
                g = complete(n);
            } else if (kind == "isolated") {
                g = isolated(n);
            } else if (kind == "star") {
                g = star(n - 1);
            } else {
                throw input_error("unknown sweep kind: " + kind);
            }
            auto hc = all_functions_class(n);
            RandomSource rng(seed);
            const std::size_t star_index = rng.next_index(hc.size());
            std::vector<NodeId> xs(T);
            for (auto& x : xs) x = static_cast<NodeId>(rng.next_index(g.node_count()));
            auto seq = realizable_sequence(star_index, hc, g, xs);
            auto learner = make_learner(learner_name, hc, g, seed);
            auto tr = run_game(*learner, seq, g, make_policy(tiebreak, g));
            rows[static_cast<std::size_t>(i)] = {seed, sldim(hc, g).value_or(-1), tr.mistakes};
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::string csv = "seed,sldim,mistakes\n";
    std::size_t worst = 0;
    for (const Row& r : rows) {
        csv += std::to_string(r.seed) + "," + std::to_string(r.sldim_value) + "," +
               std::to_string(r.mistakes) + "\n";
        worst = std::max(worst, r.mistakes);
    }
    if (!out.empty()) {
        write_text_file(out, csv);
    } else {
        std::cout << csv;
    }
    std::cout << "runs=" << runs << " worst_mistakes=" << worst << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strategic online classification simulator"};
    app.require_subcommand(1);

    RunConfig cfg;
    cfg.cap = 0;  // resolved after parsing so SLC_CAP applies
    std::string out;
    std::string exec_flag = "parallel";
    bool witness = false;
    bool adversary_mode = false;

    auto* gen = app.add_subcommand("gen", "generate instance files");
    std::string gen_kind;
    NodeId gen_n = 4, gen_delta = 2, gen_extra = 2;
    double gen_p = 0.5;
    std::string gen_base, class_out;
    gen->add_option("kind", gen_kind, "star|complete|isolated|gnp|clique-plus")->required();
    gen->add_option("--n", gen_n, "node count");
    gen->add_option("--delta", gen_delta, "star leaf count");
    gen->add_option("--p", gen_p, "edge probability");
    gen->add_option("--seed", cfg.seed, "generator seed");
    gen->add_option("--base", gen_base, "base graph for clique-plus");
    gen->add_option("--N", gen_extra, "fresh clique size for clique-plus");
    gen->add_option("--out", out, "graph output path")->required();
    gen->add_option("--class-out", class_out, "companion class output path");

    auto* dim = app.add_subcommand("dim", "dimension report");
    dim->add_option("--graph", cfg.graph_path)->required();
    dim->add_option("--class", cfg.class_path)->required();
    dim->add_flag("--witness", witness, "emit the shattered-tree witness");
    dim->add_option("--out", out, "witness output path");

    auto* run = app.add_subcommand("run", "single game run");
    run->add_option("--graph", cfg.graph_path)->required();
    run->add_option("--class", cfg.class_path)->required();
    run->add_option("--seq", cfg.sequence_path);
    run->add_flag("--adversary", adversary_mode, "play the lower-bound adversary");
    run->add_option("--learner", cfg.learner);
    run->add_option("--tiebreak", cfg.tiebreak);
    run->add_option("--T", cfg.T);
    run->add_option("--seed", cfg.seed);
    run->add_option("--out", out, "transcript output prefix");

    auto* agn = app.add_subcommand("agnostic", "expert reduction under a known graph");
    agn->add_option("--graph", cfg.graph_path)->required();
    agn->add_option("--class", cfg.class_path)->required();
    agn->add_option("--seq", cfg.sequence_path);
    agn->add_option("--T", cfg.T);
    agn->add_option("--seed", cfg.seed);
    agn->add_option("--gamma", cfg.gamma);
    agn->add_option("--cap", cfg.cap);
    agn->add_option("--tiebreak", cfg.tiebreak);
    agn->add_option("--exec", exec_flag, "serial|parallel");
    agn->add_option("--out", out);

    auto* gcl = app.add_subcommand("graphclass", "unknown-graph runners");
    std::optional<std::size_t> true_member;
    gcl->add_option("--graphclass", cfg.graph_class_path)->required();
    gcl->add_option("--class", cfg.class_path)->required();
    gcl->add_option("--seq", cfg.sequence_path)->required();
    gcl->add_option("--budget-N", cfg.budget_N, "corruption budget (agnostic variant)");
    gcl->add_option("--true-graph", true_member, "index of the true member graph");
    gcl->add_option("--gamma", cfg.gamma);
    gcl->add_option("--cap", cfg.cap);
    gcl->add_option("--tiebreak", cfg.tiebreak);
    gcl->add_option("--exec", exec_flag);
    gcl->add_option("--out", out);

    auto* dbl = app.add_subcommand("doubling", "parameter-free budget doubling");
    dbl->add_option("--graphclass", cfg.graph_class_path)->required();
    dbl->add_option("--class", cfg.class_path)->required();
    dbl->add_option("--seq", cfg.sequence_path)->required();
    dbl->add_option("--gamma", cfg.gamma);
    dbl->add_option("--cap", cfg.cap);
    dbl->add_option("--tiebreak", cfg.tiebreak);
    dbl->add_option("--exec", exec_flag);
    dbl->add_option("--out", out);

    auto* demo = app.add_subcommand("demo-star", "deterministic vs randomized star instance");
    NodeId demo_delta = 16;
    int demo_trials = 2000;
    demo->add_option("--delta", demo_delta);
    demo->add_option("--trials", demo_trials);
    demo->add_option("--seed", cfg.seed);
    demo->add_option("--out", out, "summary JSON path");

    auto* sweep = app.add_subcommand("sweep", "parallel seed sweep");
    std::string sweep_kind = "gnp";
    int sweep_runs = 10;
    sweep->add_option("--kind", sweep_kind, "gnp|complete|isolated|star");
    sweep->add_option("--n", gen_n);
    sweep->add_option("--p", gen_p);
    sweep->add_option("--T", cfg.T);
    sweep->add_option("--runs", sweep_runs);
    sweep->add_option("--seed", cfg.seed);
    sweep->add_option("--learner", cfg.learner);
    sweep->add_option("--tiebreak", cfg.tiebreak);
    sweep->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitParse;
    }

    try {
        if (cfg.cap == 0) cfg.cap = default_cap();
        const ExecMode exec = exec_flag == "serial" ? ExecMode::serial : ExecMode::parallel;
        if (gen->parsed()) {
            return cmd_gen(gen_kind, gen_n, gen_delta, gen_p, cfg.seed, gen_base, gen_extra,
                           out, class_out);
        }
        if (dim->parsed()) return cmd_dim(cfg.graph_path, cfg.class_path, witness, out);
        if (run->parsed()) return cmd_run(cfg, adversary_mode, out);
        if (agn->parsed()) return cmd_agnostic(cfg, out, exec);
        if (gcl->parsed()) return cmd_graphclass(cfg, true_member, out, exec);
        if (dbl->parsed()) return cmd_doubling(cfg, out, exec);
        if (demo->parsed()) return cmd_demo_star(demo_delta, demo_trials, cfg.seed, out);
        if (sweep->parsed()) {
            return cmd_sweep(sweep_kind, gen_n, gen_p, cfg.T, sweep_runs, cfg.seed, cfg.learner,
                             cfg.tiebreak, out);
        }
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return kExitResource;
    } catch (const protocol_error& e) {
        std::cerr << "protocol error: " << e.what() << "\n";
        return kExitProtocol;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}
