#include "test_util.hpp"

#include "xcluster/bench.hpp"
#include "xcluster/instances.hpp"

using namespace xcluster;
using Catch::Approx;

namespace {

Instance small_instance() {
    RngStream rng(3003);
    return gen_gaussian_mixture(6, 3, 30, 0.1, rng);
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
    for (const Algorithm a : {Algorithm::uniform, Algorithm::modified, Algorithm::lp,
                              Algorithm::imm, Algorithm::fast_uniform, Algorithm::fast_modified,
                              Algorithm::fast_lp})
        CHECK(algorithm_from_name(algorithm_name(a)) == a);
    CHECK_THROWS_AS(algorithm_from_name("quantum"), std::invalid_argument);
}

TEST_CASE("campaign rows are identical for any worker count") {
    const Instance inst = small_instance();
    std::vector<RunSpec> specs;
    RngStream master(12);
    for (int s = 0; s < 40; ++s) {
        RunSpec spec;
        spec.instance = &inst;
        spec.instance_id = "mem";
        spec.algorithm = s % 2 ? Algorithm::modified : Algorithm::fast_uniform;
        spec.p = 1.0;
        spec.seed = master.substream(s).seed();
        specs.push_back(spec);
    }
    const std::vector<ReportRow> one = run_campaign(specs, 1);
    const std::vector<ReportRow> four = run_campaign(specs, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].seed == four[i].seed);
        REQUIRE(one[i].cost_reference_mode == four[i].cost_reference_mode);
        REQUIRE(one[i].cost_optimal_mode == four[i].cost_optimal_mode);
        REQUIRE(one[i].accepted_cuts == four[i].accepted_cuts);
        REQUIRE(one[i].status == four[i].status);
    }
}

TEST_CASE("uniform and fast-uniform campaign means agree within 2%") {
    const Instance inst = small_instance();
    std::vector<RunSpec> specs;
    RngStream master(13);
    for (int s = 0; s < 1000; ++s)
        for (const Algorithm a : {Algorithm::uniform, Algorithm::fast_uniform}) {
            RunSpec spec;
            spec.instance = &inst;
            spec.instance_id = algorithm_name(a);
            spec.algorithm = a;
            spec.p = 1.0;
            spec.seed = master.substream(2 * s + (a == Algorithm::fast_uniform)).seed();
            specs.push_back(spec);
        }
    const std::vector<ReportRow> rows = run_campaign(specs, 4);
    double mean_ref = 0.0, mean_fast = 0.0;
    for (const ReportRow& r : rows) {
        REQUIRE(r.status == "ok");
        REQUIRE(r.accepted_cuts == inst.k() - 1);
        (r.algorithm == "uniform" ? mean_ref : mean_fast) += r.cost_optimal_mode;
    }
    mean_ref /= 1000.0;
    mean_fast /= 1000.0;
    INFO("means " << mean_ref << " vs " << mean_fast);
    CHECK(std::fabs(mean_ref - mean_fast) <= 0.02 * mean_ref);
}

TEST_CASE("aggregates compute mean, median, p95 per group") {
    std::vector<ReportRow> rows;
    for (int i = 0; i < 20; ++i) {
        ReportRow r;
        r.instance_id = "x";
        r.algorithm = "uniform";
        r.p = 1.0;
        r.ratio_optimal_mode = 1.0 + i;  // 1..20
        r.cost_optimal_mode = 2.0 * (1.0 + i);
        rows.push_back(r);
    }
    ReportRow bad = rows[0];
    bad.status = "error: synthetic";
    rows.push_back(bad);
    const std::vector<AggregateRow> aggs = aggregate_rows(rows);
    REQUIRE(aggs.size() == 1);
    CHECK(aggs[0].runs == 21);
    CHECK(aggs[0].failures == 1);
    CHECK(aggs[0].mean_ratio == Approx(10.5));
    CHECK(aggs[0].median_ratio == 11.0);
    CHECK(aggs[0].p95_ratio == 19.0);
}

TEST_CASE("failed runs are recorded and do not stop the campaign") {
    const Instance inst = small_instance();
    Instance no_centers = inst;
    no_centers.centers.clear();
    std::vector<RunSpec> specs(2);
    specs[0] = {&no_centers, "broken", Algorithm::uniform, 1.0, 4, 5};
    specs[1] = {&inst, "fine", Algorithm::uniform, 1.0, 4, 5};
    const std::vector<ReportRow> rows = run_campaign(specs, 2);
    CHECK(rows[0].status.find("error") == 0);
    CHECK(rows[1].status == "ok");
}

TEST_CASE("report rows serialize all columns") {
    ReportRow r;
    r.instance_id = "inst";
    r.algorithm = "lp";
    r.p = 2.0;
    r.seed = 77;
    r.k = 3;
    r.d = 2;
    r.n = 10;
    r.accepted_cuts = 2;
    const std::string line = report_row_csv(r);
    CHECK(line.find("inst,lp,2,77,3,2,10,") == 0);
    CHECK(std::count(line.begin(), line.end(), ',') ==
          std::count(REPORT_CSV_HEADER, REPORT_CSV_HEADER + strlen(REPORT_CSV_HEADER), ','));
}
