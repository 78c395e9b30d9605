#include "test_util.hpp"

#include "xcluster/builders.hpp"
#include "xcluster/oracle.hpp"
#include "xcluster/samplers.hpp"

using namespace xcluster;
using xctest::make_centers;
using Catch::Approx;

TEST_CASE("brute force oracle on hand instances") {
    SECTION("k = 1 is just the single-leaf cost") {
        const CenterSet one = make_centers({{1.0}});
        const OracleResult res = brute_force_opt_tree({{0.0}, {2.0}}, one, 1.0);
        CHECK(res.best_reference_cost == 2.0);
        CHECK(res.best_optimal_cost == 2.0);  // median anywhere in [0, 2]
        res.witness.validate(one);
    }
    SECTION("two separated pairs want the middle cut") {
        const CenterSet centers = make_centers({{0.5}, {9.5}});
        const std::vector<Point> pts{{0.0}, {1.0}, {9.0}, {10.0}};
        const OracleResult res = brute_force_opt_tree(pts, centers, 1.0);
        CHECK(res.best_optimal_cost == 2.0);
        CHECK(res.best_reference_cost == 2.0);
        res.witness.validate(centers);
        CHECK(res.witness.nodes[res.witness.root].theta == 5.0);
        const CostReport check = cost_of_tree(pts, res.witness, centers, 1.0);
        CHECK(check.cost_optimal_leaf_centers == res.best_optimal_cost);
    }
    SECTION("explainability can only cost more than the reference clustering") {
        RngStream rng(2026);
        for (int trial = 0; trial < 10; ++trial) {
            const CenterSet centers = xctest::random_centers(3, 2, rng);
            std::vector<Point> pts;
            for (int i = 0; i < 10; ++i) pts.push_back(xctest::random_point(2, rng));
            const OracleResult res = brute_force_opt_tree(pts, centers, 2.0);
            REQUIRE(res.best_reference_cost >= cost_to_centers(pts, centers, 2.0) - 1e-12);
            res.witness.validate(centers);
            const CostReport check = cost_of_tree(pts, res.witness, centers, 2.0);
            REQUIRE(check.cost_optimal_leaf_centers ==
                    Approx(res.best_optimal_cost).epsilon(1e-12));
        }
    }
    SECTION("size guard") {
        const CenterSet five = make_centers({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}});
        CHECK_THROWS_AS(brute_force_opt_tree({{0.0}}, five, 1.0), std::invalid_argument);
        const CenterSet ok = make_centers({{0.0}, {1.0}});
        const std::vector<Point> too_many(15, Point{0.5});
        CHECK_THROWS_AS(brute_force_opt_tree(too_many, ok, 1.0), std::invalid_argument);
    }
}

TEST_CASE("builders never beat the oracle") {
    RngStream meta(31);
    for (int trial = 0; trial < 4; ++trial) {
        const CenterSet centers = xctest::random_centers(3, 2, meta);
        std::vector<Point> pts;
        for (int i = 0; i < 12; ++i) pts.push_back(xctest::random_point(2, meta, -0.3, 1.3));
        for (const double p : {1.0, 2.0}) {
            const OracleResult oracle = brute_force_opt_tree(pts, centers, p);
            for (int seed = 0; seed < 50; ++seed) {
                RngStream rng(seed);
                const BuildResult built = build_lp(centers, p, rng);
                const CostReport cost = cost_of_tree(pts, built.tree, centers, p);
                REQUIRE(cost.cost_optimal_leaf_centers >= oracle.best_optimal_cost - 1e-9);
                REQUIRE(cost.cost_reference_centers >= oracle.best_reference_cost - 1e-9);
            }
        }
    }
}

TEST_CASE("delta_p closed form") {
    CHECK(delta_p_pow(3, 1.0) == 8.0);
    CHECK(delta_p_pow(3, 2.0) == 12.0);
    CHECK(delta_p_pow(3, 3.0) == 20.0);
    CHECK(delta_p(3, 1.0) == 8.0);
    CHECK(delta_p(3, 2.0) == Approx(std::sqrt(12.0)));
    CHECK_THROWS_AS(delta_p(1, 2.0), std::invalid_argument);
}

TEST_CASE("expected one-cut cost quadrature") {
    SECTION("uniform law reproduces the closed form D") {
        for (const double D : {2.0, 10.0, 100.0}) {
            const double got = expected_one_cut_cost({-1.0, D}, {0.0}, 2.0, OneCutLaw::uniform);
            REQUIRE(got == Approx(D).epsilon(1e-6));
        }
    }
    SECTION("D_2 law gives the small closed form") {
        for (const double D : {2.0, 10.0, 100.0}) {
            const double expect =
                2.0 * D * D / ((D + 1.0) * (D + 1.0)) + 1.0 - 2.0 / ((D + 1.0) * (D + 1.0));
            const double got = expected_one_cut_cost({-1.0, D}, {0.0}, 2.0, OneCutLaw::dp);
            REQUIRE(got == Approx(expect).epsilon(1e-6));
        }
    }
    SECTION("symmetric instance with the point at a center") {
        const double got = expected_one_cut_cost({-1.0, 1.0}, {0.0}, 1.0, OneCutLaw::uniform);
        CHECK(got == Approx(1.0).epsilon(1e-8));
    }
    SECTION("guards") {
        CHECK_THROWS_AS(expected_one_cut_cost({0.0}, {0.0}, 2.0, OneCutLaw::uniform),
                        std::invalid_argument);
        CHECK_THROWS_AS(expected_one_cut_cost({0.0, 1.0}, {0.0}, 0.5, OneCutLaw::uniform),
                        std::invalid_argument);
    }
}

TEST_CASE("statistical suite calibration") {
    SECTION("true-law samples pass at least 99 of 100 repetitions") {
        int passes = 0;
        for (int rep = 0; rep < 100; ++rep) {
            RngStream rng(10000 + rep);
            std::vector<double> samples(10000);
            for (double& s : samples) s = rng.next_double();
            if (statistical_suite(samples, [](double t) { return std::clamp(t, 0.0, 1.0); })
                    .pass)
                ++passes;
        }
        INFO("passes=" << passes);
        CHECK(passes >= 99);
    }
    SECTION("uniform samples are rejected against the p = 2 cut density") {
        RngStream rng(1234);
        std::vector<double> samples(10000);
        for (double& s : samples) s = rng.next_double();
        const TestVerdict v =
            statistical_suite(samples, [](double t) { return theta_cdf(0.0, 1.0, 2.0, t); });
        CHECK_FALSE(v.pass);
    }
    SECTION("inverse-CDF samples pass against their analytic CDF") {
        RngStream rng(4321);
        std::vector<double> samples(20000);
        for (double& s : samples) s = theta_inverse_cdf(0.0, 1.0, 2.0, rng.next_double());
        const TestVerdict v =
            statistical_suite(samples, [](double t) { return theta_cdf(0.0, 1.0, 2.0, t); });
        CHECK(v.pass);
    }
    SECTION("undersampled input is refused") {
        CHECK_THROWS_AS(statistical_suite({0.1, 0.2}, [](double t) { return t; }),
                        std::invalid_argument);
    }
    SECTION("two-sample KS distinguishes shifted laws") {
        RngStream rng(777);
        std::vector<double> a(20000), b(20000);
        for (double& s : a) s = rng.next_double();
        for (double& s : b) s = rng.next_double() + 0.05;
        CHECK_FALSE(ks_two_sample(a, b).pass);
    }
    SECTION("chi-square flags a skewed die") {
        const std::vector<double> fair(6, 1.0 / 6.0);
        std::vector<std::uint64_t> counts{1000, 1000, 1000, 1000, 1000, 1000};
        CHECK(chi_square_gof(counts, fair, 6000).pass);
        counts[0] = 1300;
        counts[5] = 700;
        CHECK_FALSE(chi_square_gof(counts, fair, 6000).pass);
    }
}

TEST_CASE("two-sample KS handles heavily tied samples") {
    // identical atomic distributions must give statistic 0
    std::vector<double> a, b;
    for (int i = 0; i < 4998; ++i) {
        a.push_back(i % 3);  // atoms 0, 1, 2
        b.push_back((i + 1) % 3);
    }
    CHECK(ks_two_sample_statistic(a, b) == 0.0);
    CHECK(ks_two_sample(a, b, 0.01).pass);

    // moving a third of the mass from atom 0 to atom 2 is detected
    std::vector<double> c;
    for (int i = 0; i < 4998; ++i) c.push_back(i % 3 == 0 ? 2.0 : i % 3);
    CHECK(ks_two_sample_statistic(a, c) == Catch::Approx(1.0 / 3.0).margin(1e-3));
    CHECK_FALSE(ks_two_sample(a, c, 0.01).pass);
}
