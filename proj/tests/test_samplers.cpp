#include "test_util.hpp"

#include "xcluster/geometry.hpp"
#include "xcluster/oracle.hpp"
#include "xcluster/samplers.hpp"

using namespace xcluster;
using xctest::make_centers;
using Catch::Approx;

TEST_CASE("theta_inverse_cdf closed form") {
    CHECK(theta_inverse_cdf(0.0, 4.0, 1.0, 0.25) == 1.0);
    for (const double p : {1.0, 2.0, 3.0, 4.5})
        CHECK(theta_inverse_cdf(-3.0, 5.0, p, 0.5) == Approx(1.0).margin(1e-12));
    CHECK(theta_inverse_cdf(0.0, 1.0, 2.0, 0.125) == 0.25);  // solves 2 theta^2 = 0.125
    CHECK_THROWS_AS(theta_inverse_cdf(1.0, 1.0, 2.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(theta_inverse_cdf(0.0, 1.0, 2.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(theta_inverse_cdf(0.0, 1.0, 0.5, 0.5), std::invalid_argument);
}

TEST_CASE("theta_inverse_cdf is monotone and stays in [a, b]") {
    for (const double p : {1.0, 1.5, 2.0, 3.0}) {
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double u = static_cast<double>(i) / 1000.0;
            const double t = theta_inverse_cdf(-1.0, 2.0, p, u);
            REQUIRE(t >= -1.0);
            REQUIRE(t <= 2.0);
            REQUIRE(t >= prev);
            prev = t;
        }
        // round trip against the analytic CDF
        for (const double u : {0.01, 0.2, 0.5, 0.9, 0.99})
            REQUIRE(theta_cdf(-1.0, 2.0, p, theta_inverse_cdf(-1.0, 2.0, p, u)) ==
                    Approx(u).margin(1e-12));
    }
}

TEST_CASE("theta sampler passes KS against the analytic CDF") {
    for (const double p : {1.0, 2.0, 3.0}) {
        RngStream rng(555 + static_cast<std::uint64_t>(p));
        std::vector<double> samples(100000);
        for (double& s : samples) s = theta_inverse_cdf(0.0, 1.0, p, rng.next_double());
        const TestVerdict v =
            statistical_suite(samples, [&](double t) { return theta_cdf(0.0, 1.0, p, t); });
        INFO("p=" << p << " stat=" << v.statistic);
        CHECK(v.pass);
        CHECK(v.statistic < 0.006);
    }
}

TEST_CASE("sample_uniform_cut separates a k=2 instance every time") {
    const CenterSet centers = make_centers({{0.0}, {1.0}});
    const BoundingBox box = bounding_box(centers);
    RngStream rng(7);
    for (int i = 0; i < 2000; ++i) {
        const ThresholdCut cut = sample_uniform_cut(box, rng);
        REQUIRE(cut.dim == 0);
        REQUIRE((0.0 <= cut.theta && cut.theta < 1.0));
    }
}

TEST_CASE("sample_uniform_cut picks dimensions proportionally to side length") {
    const CenterSet centers = make_centers({{0.0, 0.0}, {1.0, 2.0}});
    const BoundingBox box = bounding_box(centers);
    RngStream rng(11);
    const int n = 100000;
    std::uint64_t dim1 = 0;
    for (int i = 0; i < n; ++i)
        if (sample_uniform_cut(box, rng).dim == 1) ++dim1;
    const TestVerdict v = binomial_band(dim1, n, 2.0 / 3.0);
    INFO("freq=" << static_cast<double>(dim1) / n);
    CHECK(v.pass);
}

TEST_CASE("uniform separation frequency matches l1 distance over L") {
    RngStream instance_rng(2024);
    const CenterSet centers = xctest::random_centers(4, 2, instance_rng);
    const BoundingBox box = bounding_box(centers);
    const int n = 100000;
    std::vector<std::vector<std::uint64_t>> sep(4, std::vector<std::uint64_t>(4, 0));
    RngStream rng(3);
    for (int i = 0; i < n; ++i) {
        const ThresholdCut cut = sample_uniform_cut(box, rng);
        for (int g = 0; g < 4; ++g)
            for (int h = g + 1; h < 4; ++h) {
                const double a = centers[g][cut.dim], b = centers[h][cut.dim];
                if (std::min(a, b) <= cut.theta && cut.theta < std::max(a, b)) ++sep[g][h];
            }
    }
    for (int g = 0; g < 4; ++g)
        for (int h = g + 1; h < 4; ++h) {
            const double expect =
                lp_pow_distance(centers[g], centers[h], 1.0) / box.total_length;
            const TestVerdict v = binomial_band(sep[g][h], n, expect);
            INFO("pair " << g << "," << h << " freq "
                         << static_cast<double>(sep[g][h]) / n << " expect " << expect);
            REQUIRE(v.pass);
        }
}

TEST_CASE("sample_uniform_cut refuses an empty box") {
    BoundingBox box;
    box.intervals = {{1.0, 1.0}};
    box.total_length = 0.0;
    RngStream rng(1);
    CHECK_THROWS_AS(sample_uniform_cut(box, rng), std::invalid_argument);
}

TEST_CASE("D_1 reduces to the uniform law over the bounding box") {
    const CenterSet centers = make_centers({{0.0, 0.0}, {0.4, 1.3}, {1.0, 2.0}});
    const DimensionIntervalSet set = all_intervals(centers, 1.0);
    const BoundingBox box = bounding_box(centers);
    const int bins_per_dim = 25;
    std::vector<double> analytic(2 * bins_per_dim);
    for (int dim = 0; dim < 2; ++dim)
        for (int b = 0; b < bins_per_dim; ++b)
            analytic[dim * bins_per_dim + b] = box.side(dim) / bins_per_dim / box.total_length;

    const int n = 200000;
    std::vector<std::uint64_t> hist(2 * bins_per_dim, 0);
    RngStream rng(17);
    for (int i = 0; i < n; ++i) {
        const ThresholdCut cut = sample_dp_cut(set, rng);
        const auto& [lo, hi] = box.intervals[cut.dim];
        int b = static_cast<int>((cut.theta - lo) / (hi - lo) * bins_per_dim);
        b = std::clamp(b, 0, bins_per_dim - 1);
        ++hist[cut.dim * bins_per_dim + b];
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < hist.size(); ++i)
        tv += std::fabs(static_cast<double>(hist[i]) / n - analytic[i]);
    tv *= 0.5;
    INFO("tv=" << tv);
    CHECK(tv < 0.01);
}

TEST_CASE("D_2 mass below zero on the {-1, 100} instance") {
    const CenterSet centers = make_centers({{-1.0}, {100.0}});
    const DimensionIntervalSet set = all_intervals(centers, 2.0);
    REQUIRE(set.entries.size() == 1);
    const double expect = 2.0 / (101.0 * 101.0);  // analytic CDF at zero
    CHECK(theta_cdf(-1.0, 100.0, 2.0, 0.0) == Approx(expect).epsilon(1e-12));

    RngStream rng(23);
    const int n = 1000000;
    std::uint64_t below = 0;
    for (int i = 0; i < n; ++i)
        if (sample_dp_cut(set, rng).theta < 0.0) ++below;
    const TestVerdict v = binomial_band(below, n, expect);
    INFO("freq=" << static_cast<double>(below) / n << " expect=" << expect);
    CHECK(v.pass);
}

TEST_CASE("two centers are always separated by a D_p cut") {
    const CenterSet centers = make_centers({{0.0, 5.0}, {2.0, 5.0}});
    const DimensionIntervalSet set = all_intervals(centers, 2.0);
    RngStream rng(29);
    for (int i = 0; i < 2000; ++i) {
        const ThresholdCut cut = sample_dp_cut(set, rng);
        REQUIRE(cut.dim == 0);
        REQUIRE((0.0 <= cut.theta && cut.theta < 2.0));
    }
}

TEST_CASE("min_separated_pair scans co-leaf pairs only") {
    const CenterSet centers = make_centers({{0.0}, {0.1}, {5.0}});
    SECTION("cut outside every leaf") {
        const auto v = min_separated_pair({0, 10.0}, {{0, 1, 2}}, centers, PairMetric::l1);
        CHECK_FALSE(v.has_value());
    }
    SECTION("k=2 split") {
        const CenterSet two = make_centers({{0.0}, {1.0}});
        const auto v = min_separated_pair({0, 0.5}, {{0, 1}}, two, PairMetric::l1);
        REQUIRE(v.has_value());
        CHECK(*v == 1.0);
    }
    SECTION("closest separated pair wins") {
        const auto v = min_separated_pair({0, 0.05}, {{0, 1, 2}}, centers, PairMetric::l1);
        REQUIRE(v.has_value());
        CHECK(*v == 0.1);
    }
    SECTION("pairs in different leaves are ignored") {
        const auto v = min_separated_pair({0, 0.05}, {{0}, {1, 2}}, centers, PairMetric::l1);
        CHECK_FALSE(v.has_value());
    }
    SECTION("pseudo-distance metric") {
        const auto v =
            min_separated_pair({0, 0.05}, {{0, 1, 2}}, centers, PairMetric::pseudo_p, 2.0);
        REQUIRE(v.has_value());
        CHECK(*v == Approx(0.01).epsilon(1e-12));  // d_2(0, 0.1) = 0.1^2
    }
}

TEST_CASE("cut sampling is reproducible from the seed") {
    const CenterSet centers = make_centers({{0.0, 0.0}, {0.4, 1.3}, {1.0, 2.0}});
    const DimensionIntervalSet set = all_intervals(centers, 2.0);
    RngStream a(31), b(31);
    for (int i = 0; i < 200; ++i) {
        const ThresholdCut ca = sample_dp_cut(set, a);
        const ThresholdCut cb = sample_dp_cut(set, b);
        REQUIRE(ca.dim == cb.dim);
        REQUIRE(ca.theta == cb.theta);
    }
}
