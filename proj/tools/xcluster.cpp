// Command-line surface: instance generation, tree building, evaluation,
// benchmark campaigns, and exhaustive oracle checks.
//
// All randomized subcommands require an explicit seed; nothing is seeded
// from the clock, so every emitted number can be reproduced.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xcluster/bench.hpp"
#include "xcluster/builders.hpp"
#include "xcluster/core.hpp"
#include "xcluster/fast_structures.hpp"
#include "xcluster/instances.hpp"
#include "xcluster/io.hpp"
#include "xcluster/oracle.hpp"

namespace {

using namespace xcluster;

int default_workers() {
    if (const char* env = std::getenv("XCLUSTER_WORKERS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void print_instance_summary(const Instance& inst) {
    std::printf("n=%d k=%d d=%d", inst.n(), inst.k(), inst.dim);
    if (inst.generator == "lower-bound") {
        // every point sits at distance exactly 1 from its center
        std::printf(" opt=%d", inst.n());
    } else if (inst.generator == "adversarial") {
        const int m = static_cast<int>(inst.params.at("m"));
        const int d = m * (m - 1);
        std::printf(" opt_p1=%d", 2 * d * m + (m - 1) * m / 2);
    }
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"xcluster: explainable k-clustering via random threshold cuts"};
    app.require_subcommand(1);

    // ---- gen ---------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate an instance file");
    gen->require_subcommand(1);
    std::string gen_out = "instance.json";

    auto* gen_lb = gen->add_subcommand("lower-bound", "prime-field hard instance");
    int lb_m = 3;
    gen_lb->add_option("--m", lb_m, "prime parameter (k = m, d = m(m-1))")->required();
    gen_lb->add_option("--out", gen_out, "output instance path");

    auto* gen_adv = gen->add_subcommand("adversarial", "min-cut fooling instance");
    int adv_m = 3;
    gen_adv->add_option("--m", adv_m, "prime parameter")->required();
    gen_adv->add_option("--out", gen_out, "output instance path");

    auto* gen_gauss = gen->add_subcommand("gaussian", "Gaussian mixture benchmark instance");
    int g_k = 5, g_d = 3, g_n = 50;
    double g_sigma = 0.1;
    std::uint64_t g_seed = 0;
    gen_gauss->add_option("--k", g_k, "number of clusters");
    gen_gauss->add_option("--d", g_d, "dimension");
    gen_gauss->add_option("--n", g_n, "points per cluster");
    gen_gauss->add_option("--sigma", g_sigma, "noise scale");
    gen_gauss->add_option("--seed", g_seed, "rng seed")->required();
    gen_gauss->add_option("--out", gen_out, "output instance path");

    // ---- build -------------------------------------------------------
    auto* build = app.add_subcommand("build", "build a threshold tree for an instance");
    std::string b_algo = "uniform", b_instance, b_points_csv, b_centers_csv,
                b_out = "tree.json";
    double b_p = 1.0;
    int b_ell = 4;
    std::uint64_t b_seed = 0;
    bool b_seed_set = false, b_header = false;
    build->add_option("--algo", b_algo,
                      "uniform|modified|lp|imm|fast-uniform|fast-modified|fast-lp");
    build->add_option("--p", b_p, "objective exponent (p >= 1)");
    build->add_option("--ell", b_ell, "discard exponent (>= 4)");
    build->add_option("--seed", b_seed, "rng seed (required for randomized algorithms)")
        ->each([&](const std::string&) { b_seed_set = true; });
    build->add_option("--instance", b_instance, "instance JSON path");
    build->add_option("--points-csv", b_points_csv, "points CSV (one point per row)");
    build->add_option("--centers-csv", b_centers_csv, "centers CSV (pairs with --points-csv)");
    build->add_option("--out", b_out, "output tree path");
    build->add_flag("--header", b_header, "print the CSV header line before the row");

    // ---- eval --------------------------------------------------------
    auto* eval = app.add_subcommand("eval", "evaluate a tree file against an instance");
    std::string e_instance, e_tree;
    double e_p = 1.0;
    eval->add_option("--instance", e_instance)->required();
    eval->add_option("--tree", e_tree)->required();
    eval->add_option("--p", e_p, "objective exponent");

    // ---- bench -------------------------------------------------------
    auto* bench = app.add_subcommand(
        "bench",
        std::string("run a benchmark campaign; the report CSV has a mandatory header and "
                    "the fixed columns\n") +
            REPORT_CSV_HEADER +
            "\nfollowed by '# aggregate:' rows with mean/median/p95 optimal-mode ratios");
    std::vector<std::string> c_instances, c_algos;
    double c_p = 1.0;
    int c_ell = 4, c_seeds = 1, c_workers = default_workers();
    std::uint64_t c_seed_base = 0;
    std::string c_out = "report.csv", c_plot;
    bench->add_option("--instance", c_instances, "instance JSON path (repeatable)")->required();
    bench->add_option("--algo", c_algos, "algorithm (repeatable)")->required();
    bench->add_option("--p", c_p, "objective exponent");
    bench->add_option("--ell", c_ell, "discard exponent");
    bench->add_option("--seeds", c_seeds, "seeds per (instance, algorithm)");
    bench->add_option("--seed-base", c_seed_base, "base seed for the substreams")->required();
    bench->add_option("--workers", c_workers, "worker pool size (XCLUSTER_WORKERS overrides)");
    bench->add_option("--out", c_out, "report CSV path");
    bench->add_option("--plot", c_plot, "optional plot-ready long-format CSV path");

    // ---- oracle ------------------------------------------------------
    auto* oracle = app.add_subcommand("oracle", "exhaustive optimum on a tiny instance");
    std::string o_instance, o_tree_out;
    double o_p = 1.0;
    oracle->add_option("--instance", o_instance)->required();
    oracle->add_option("--p", o_p, "objective exponent");
    oracle->add_option("--out", o_tree_out, "optional path for the witness tree");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen_lb->parsed() || gen_adv->parsed() || gen_gauss->parsed()) {
            Instance inst;
            if (gen_lb->parsed()) {
                inst = gen_lower_bound(lb_m);
            } else if (gen_adv->parsed()) {
                inst = gen_adversarial(adv_m);
            } else {
                RngStream rng(g_seed);
                inst = gen_gaussian_mixture(g_k, g_d, g_n, g_sigma, rng);
            }
            save_instance(gen_out, inst);
            print_instance_summary(inst);
            return 0;
        }

        if (build->parsed()) {
            const Algorithm algo = algorithm_from_name(b_algo);
            if (algorithm_is_randomized(algo) && !b_seed_set)
                throw std::invalid_argument("--seed is required for randomized algorithms");
            if (b_instance.empty() == b_points_csv.empty())
                throw std::invalid_argument("need exactly one of --instance or --points-csv");
            if (!b_points_csv.empty() && b_centers_csv.empty())
                throw std::invalid_argument("--points-csv requires --centers-csv");
            const Instance inst = b_instance.empty()
                                      ? instance_from_csv(b_points_csv, b_centers_csv)
                                      : load_instance(b_instance);
            if (algo == Algorithm::imm && inst.points.empty())
                throw std::invalid_argument("imm needs an instance with data points");
            RunSpec spec{&inst, b_instance.empty() ? b_points_csv : b_instance, algo, b_p,
                         b_ell, b_seed};
            ThresholdTree tree;
            const ReportRow row = execute_run(spec, &tree);
            if (row.status != "ok") throw std::runtime_error(row.status);
            save_tree(b_out, tree);
            if (b_header) std::printf("%s\n", REPORT_CSV_HEADER);
            std::printf("%s\n", report_row_csv(row).c_str());
            return 0;
        }

        if (eval->parsed()) {
            const Instance inst = load_instance(e_instance);
            const ThresholdTree tree = load_tree(e_tree, inst.dim);
            const CenterSet centers = inst.center_set();
            tree.validate(centers);
            const CostReport report = cost_of_tree(inst.points, tree, centers, e_p);
            const double baseline = cost_to_centers(inst.points, centers, e_p);
            std::printf("p=%g\n", e_p);
            std::printf("cost_reference_mode=%.17g\n", report.cost_reference_centers);
            std::printf("cost_optimal_mode=%.17g\n", report.cost_optimal_leaf_centers);
            std::printf("cost_reference_clustering=%.17g\n", baseline);
            if (baseline > 0.0) {
                std::printf("ratio_reference_mode=%.17g\n",
                            report.cost_reference_centers / baseline);
                std::printf("ratio_optimal_mode=%.17g\n",
                            report.cost_optimal_leaf_centers / baseline);
            }
            std::printf("empty_leaves=%zu\n", report.empty_leaves.size());
            return 0;
        }

        if (bench->parsed()) {
            if (const char* env = std::getenv("XCLUSTER_WORKERS")) {
                const int w = std::atoi(env);
                if (w >= 1) c_workers = w;
            }
            std::vector<Instance> instances;
            instances.reserve(c_instances.size());
            for (const std::string& path : c_instances) instances.push_back(load_instance(path));
            std::vector<RunSpec> specs;
            const RngStream master(c_seed_base);
            std::uint64_t run_index = 0;
            for (std::size_t ii = 0; ii < instances.size(); ++ii)
                for (const std::string& algo_name : c_algos) {
                    const Algorithm algo = algorithm_from_name(algo_name);
                    for (int s = 0; s < c_seeds; ++s) {
                        RunSpec spec;
                        spec.instance = &instances[ii];
                        spec.instance_id = c_instances[ii];
                        spec.algorithm = algo;
                        spec.p = c_p;
                        spec.ell = c_ell;
                        spec.seed = master.substream(run_index++).seed();
                        specs.push_back(spec);
                        if (!algorithm_is_randomized(algo)) break;  // deterministic: one run
                    }
                }
            const std::vector<ReportRow> rows = run_campaign(specs, c_workers);
            const std::vector<AggregateRow> aggs = aggregate_rows(rows);
            write_report_csv(c_out, rows, aggs);
            if (!c_plot.empty()) write_plot_csv(c_plot, aggs, rows);
            int failures = 0;
            for (const ReportRow& r : rows)
                if (r.status != "ok") {
                    ++failures;
                    std::fprintf(stderr, "run failed: %s %s seed=%llu: %s\n",
                                 r.instance_id.c_str(), r.algorithm.c_str(),
                                 static_cast<unsigned long long>(r.seed), r.status.c_str());
                }
            std::printf("runs=%zu failures=%d report=%s\n", rows.size(), failures, c_out.c_str());
            return failures == 0 ? 0 : 1;
        }

        if (oracle->parsed()) {
            const Instance inst = load_instance(o_instance);
            const CenterSet centers = inst.center_set();
            const OracleResult res = brute_force_opt_tree(inst.points, centers, o_p);
            std::printf("optimal_cost_reference_mode=%.17g\n", res.best_reference_cost);
            std::printf("optimal_cost_optimal_mode=%.17g\n", res.best_optimal_cost);
            std::printf("states_explored=%llu\n",
                        static_cast<unsigned long long>(res.nodes_explored));
            if (!o_tree_out.empty()) save_tree(o_tree_out, res.witness);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
