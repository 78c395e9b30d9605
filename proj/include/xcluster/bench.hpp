#pragma once

// Benchmark campaigns: one row per (instance, algorithm, p, seed) run,
// farmed to a bounded worker pool. Every run draws from its own RNG
// substream, and rows are reported in campaign order no matter how the
// pool schedules them. Failures are recorded per row and the campaign
// continues.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "xcluster/builders.hpp"
#include "xcluster/core.hpp"
#include "xcluster/fast_structures.hpp"
#include "xcluster/instances.hpp"

namespace xcluster {

enum class Algorithm { uniform, modified, lp, imm, fast_uniform, fast_modified, fast_lp };

inline const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::uniform: return "uniform";
        case Algorithm::modified: return "modified";
        case Algorithm::lp: return "lp";
        case Algorithm::imm: return "imm";
        case Algorithm::fast_uniform: return "fast-uniform";
        case Algorithm::fast_modified: return "fast-modified";
        case Algorithm::fast_lp: return "fast-lp";
    }
    return "?";
}

inline Algorithm algorithm_from_name(const std::string& name) {
    for (Algorithm a : {Algorithm::uniform, Algorithm::modified, Algorithm::lp, Algorithm::imm,
                        Algorithm::fast_uniform, Algorithm::fast_modified, Algorithm::fast_lp})
        if (name == algorithm_name(a)) return a;
    throw std::invalid_argument("unknown algorithm: " + name);
}

inline bool algorithm_is_randomized(Algorithm a) { return a != Algorithm::imm; }

inline BuildResult run_algorithm(Algorithm algo, const CenterSet& centers,
                                 const std::vector<Point>& points, double p, int ell,
                                 std::uint64_t seed) {
    RngStream rng(seed);
    switch (algo) {
        case Algorithm::uniform: return build_uniform(centers, rng);
        case Algorithm::modified: return build_modified(centers, rng, ell);
        case Algorithm::lp: return build_lp(centers, p, rng, ell);
        case Algorithm::fast_uniform: return build_fast(centers, p, rng, FastVariant::uniform, ell);
        case Algorithm::fast_modified:
            return build_fast(centers, p, rng, FastVariant::modified, ell);
        case Algorithm::fast_lp: return build_fast(centers, p, rng, FastVariant::lp, ell);
        case Algorithm::imm: {
            BuildResult r;
            r.tree = build_imm_min_cut(points, centers, p);
            r.trace.splits_total = centers.k() - 1;
            return r;
        }
    }
    throw std::logic_error("unreachable");
}

struct ReportRow {
    std::string instance_id;
    std::string algorithm;
    double p = 1.0;
    std::uint64_t seed = 0;
    int k = 0, d = 0, n = 0;
    double cost_reference_mode = 0.0;
    double cost_optimal_mode = 0.0;
    double ratio_reference_mode = 0.0;
    double ratio_optimal_mode = 0.0;
    double ratio_to_oracle = std::numeric_limits<double>::quiet_NaN();  // when available
    int accepted_cuts = 0;
    std::uint64_t discarded_cuts = 0;
    std::uint64_t total_draws = 0;
    double wall_seconds = 0.0;
    std::string status = "ok";
};

inline constexpr const char* REPORT_CSV_HEADER =
    "instance,algorithm,p,seed,k,d,n,cost_reference_mode,cost_optimal_mode,"
    "ratio_reference_mode,ratio_optimal_mode,ratio_to_oracle,accepted_cuts,"
    "discarded_cuts,total_draws,wall_seconds,status";

inline std::string report_row_csv(const ReportRow& r) {
    char buf[512];
    char oracle[48];
    if (std::isnan(r.ratio_to_oracle))
        oracle[0] = '\0';
    else
        std::snprintf(oracle, sizeof oracle, "%.17g", r.ratio_to_oracle);
    std::snprintf(buf, sizeof buf,
                  "%s,%s,%.17g,%llu,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%s,%d,%llu,%llu,%.6f,%s",
                  r.instance_id.c_str(), r.algorithm.c_str(), r.p,
                  static_cast<unsigned long long>(r.seed), r.k, r.d, r.n, r.cost_reference_mode,
                  r.cost_optimal_mode, r.ratio_reference_mode, r.ratio_optimal_mode, oracle,
                  r.accepted_cuts, static_cast<unsigned long long>(r.discarded_cuts),
                  static_cast<unsigned long long>(r.total_draws), r.wall_seconds,
                  r.status.c_str());
    return buf;
}

struct RunSpec {
    const Instance* instance = nullptr;
    std::string instance_id;
    Algorithm algorithm = Algorithm::uniform;
    double p = 1.0;
    int ell = 4;
    std::uint64_t seed = 0;
};

inline ReportRow execute_run(const RunSpec& spec, ThresholdTree* tree_out = nullptr) {
    ReportRow row;
    row.instance_id = spec.instance_id;
    row.algorithm = algorithm_name(spec.algorithm);
    row.p = spec.p;
    row.seed = spec.seed;
    const Instance& inst = *spec.instance;
    row.d = inst.dim;
    row.n = inst.n();
    row.k = inst.k();
    try {
        const CenterSet centers = inst.center_set();
        const auto t0 = std::chrono::steady_clock::now();
        const BuildResult built =
            run_algorithm(spec.algorithm, centers, inst.points, spec.p, spec.ell, spec.seed);
        const auto t1 = std::chrono::steady_clock::now();
        row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
        row.accepted_cuts = built.trace.splits_total;
        row.discarded_cuts = built.trace.discarded;
        row.total_draws = built.trace.total_draws;

        const CostReport report =
            cost_of_tree(inst.points, built.tree, centers, spec.p, LeafCenterMode::reference);
        row.cost_reference_mode = report.cost_reference_centers;
        row.cost_optimal_mode = report.cost_optimal_leaf_centers;
        const double baseline = cost_to_centers(inst.points, centers, spec.p);
        if (baseline > 0.0) {
            row.ratio_reference_mode = row.cost_reference_mode / baseline;
            row.ratio_optimal_mode = row.cost_optimal_mode / baseline;
        } else {
            row.ratio_reference_mode = row.cost_reference_mode == 0.0 ? 1.0 : INFINITY;
            row.ratio_optimal_mode = row.cost_optimal_mode == 0.0 ? 1.0 : INFINITY;
        }
        if (tree_out) *tree_out = built.tree;
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

/// Runs every spec on a pool of `workers` threads; results come back in
/// campaign order.
inline std::vector<ReportRow> run_campaign(const std::vector<RunSpec>& specs, int workers) {
    std::vector<ReportRow> rows(specs.size());
    if (workers < 1) workers = 1;
    workers = std::min<int>(workers, static_cast<int>(specs.size() ? specs.size() : 1));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= specs.size()) return;
            rows[i] = execute_run(specs[i]);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    return rows;
}

struct AggregateRow {
    std::string instance_id;
    std::string algorithm;
    double p = 1.0;
    int runs = 0;
    int failures = 0;
    double mean_ratio = 0.0;    // optimal-mode ratio
    double median_ratio = 0.0;
    double p95_ratio = 0.0;
    double mean_cost = 0.0;     // optimal-mode cost
    double mean_wall_seconds = 0.0;
};

inline std::vector<AggregateRow> aggregate_rows(const std::vector<ReportRow>& rows) {
    std::vector<AggregateRow> out;
    std::vector<std::vector<double>> ratios;
    const auto index_of = [&](const ReportRow& r) {
        for (std::size_t i = 0; i < out.size(); ++i)
            if (out[i].instance_id == r.instance_id && out[i].algorithm == r.algorithm &&
                out[i].p == r.p)
                return i;
        out.push_back({r.instance_id, r.algorithm, r.p, 0, 0, 0, 0, 0, 0, 0});
        ratios.emplace_back();
        return out.size() - 1;
    };
    for (const ReportRow& r : rows) {
        const std::size_t i = index_of(r);
        ++out[i].runs;
        if (r.status != "ok") {
            ++out[i].failures;
            continue;
        }
        out[i].mean_ratio += r.ratio_optimal_mode;
        out[i].mean_cost += r.cost_optimal_mode;
        out[i].mean_wall_seconds += r.wall_seconds;
        ratios[i].push_back(r.ratio_optimal_mode);
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int ok = out[i].runs - out[i].failures;
        if (ok > 0) {
            out[i].mean_ratio /= ok;
            out[i].mean_cost /= ok;
            out[i].mean_wall_seconds /= ok;
            std::sort(ratios[i].begin(), ratios[i].end());
            out[i].median_ratio = ratios[i][ratios[i].size() / 2];
            out[i].p95_ratio = ratios[i][static_cast<std::size_t>(0.95 * (ratios[i].size() - 1))];
        }
    }
    return out;
}

inline void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows,
                             const std::vector<AggregateRow>& aggregates) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << REPORT_CSV_HEADER << '\n';
    for (const ReportRow& r : rows) out << report_row_csv(r) << '\n';
    out << "# aggregate: instance,algorithm,p,runs,failures,mean_ratio,median_ratio,p95_ratio,"
           "mean_cost,mean_wall_seconds\n";
    char buf[384];
    for (const AggregateRow& a : aggregates) {
        std::snprintf(buf, sizeof buf, "# %s,%s,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g,%.6f",
                      a.instance_id.c_str(), a.algorithm.c_str(), a.p, a.runs, a.failures,
                      a.mean_ratio, a.median_ratio, a.p95_ratio, a.mean_cost,
                      a.mean_wall_seconds);
        out << buf << '\n';
    }
}

/// Long-format rows for ratio-vs-k plots.
inline void write_plot_csv(const std::string& path, const std::vector<AggregateRow>& aggregates,
                           const std::vector<ReportRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "instance,algorithm,p,k,stat,value\n";
    auto k_of = [&](const AggregateRow& a) {
        for (const ReportRow& r : rows)
            if (r.instance_id == a.instance_id) return r.k;
        return 0;
    };
    char buf[256];
    for (const AggregateRow& a : aggregates) {
        const int k = k_of(a);
        for (const auto& [stat, value] :
             {std::pair<const char*, double>{"mean_ratio", a.mean_ratio},
              {"median_ratio", a.median_ratio},
              {"p95_ratio", a.p95_ratio}}) {
            std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%d,%s,%.17g", a.instance_id.c_str(),
                          a.algorithm.c_str(), a.p, k, stat, value);
            out << buf << '\n';
        }
    }
}

}  // namespace xcluster
