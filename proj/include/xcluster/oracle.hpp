#pragma once

// Independent ground truth: exhaustive optimal threshold trees on tiny
// instances, closed-form pairwise-distance and one-cut-cost evaluators,
// and the statistical test utilities shared by the randomized checks.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "xcluster/builders.hpp"
#include "xcluster/core.hpp"
#include "xcluster/samplers.hpp"

namespace xcluster {

struct OracleResult {
    double best_reference_cost = 0.0;  // min over trees, leaf's owned center charging
    double best_optimal_cost = 0.0;    // min over trees, per-leaf optimal centers
    ThresholdTree witness;             // achieves best_optimal_cost in optimal mode
    std::uint64_t nodes_explored = 0;  // distinct (point set, center set) states
};

namespace detail {

struct OracleEntry {
    double ref = 0.0;
    double opt = 0.0;
    // optimal-mode witness data
    bool leaf = true;
    ThresholdCut cut;
    std::uint32_t left_key = 0;
    std::uint32_t right_key = 0;
};

}  // namespace detail

/// Exhaustive search over all threshold trees, with cuts restricted to
/// midpoints between consecutive distinct coordinates (costs are piecewise
/// constant between them, so nothing is lost). Guarded to k <= 4, d <= 3,
/// n <= 14; memoized on (point set, center set) bitmasks.
inline OracleResult brute_force_opt_tree(const std::vector<Point>& points,
                                         const CenterSet& centers, double p) {
    const int n = static_cast<int>(points.size());
    const int k = centers.k();
    const int d = centers.dim;
    if (k > 4 || d > 3 || n > 14)
        throw std::invalid_argument(
            "brute_force_opt_tree: instance exceeds guard (k <= 4, d <= 3, n <= 14)");
    if (p < 1.0) throw std::invalid_argument("brute_force_opt_tree: p must be >= 1");

    std::unordered_map<std::uint32_t, detail::OracleEntry> memo;
    const auto key_of = [n](std::uint32_t pts, std::uint32_t ctrs) {
        return pts | (ctrs << n);
    };

    std::function<const detail::OracleEntry&(std::uint32_t, std::uint32_t)> solve =
        [&](std::uint32_t pts, std::uint32_t ctrs) -> const detail::OracleEntry& {
        const std::uint32_t key = key_of(pts, ctrs);
        if (const auto it = memo.find(key); it != memo.end()) return it->second;

        detail::OracleEntry entry;
        if (std::popcount(ctrs) == 1) {
            const int c = std::countr_zero(ctrs);
            std::vector<double> ref_terms;
            std::vector<int> members;
            for (int i = 0; i < n; ++i)
                if (pts >> i & 1) {
                    ref_terms.push_back(lp_pow_distance(points[i], centers[c], p));
                    members.push_back(i);
                }
            entry.ref = detail::pairwise_sum(ref_terms);
            if (members.empty()) {
                entry.opt = 0.0;
            } else {
                Point opt_center(d);
                std::vector<double> coord(members.size());
                for (int dim = 0; dim < d; ++dim) {
                    for (std::size_t m = 0; m < members.size(); ++m)
                        coord[m] = points[members[m]][dim];
                    opt_center[dim] = detail::optimal_coordinate(coord, p);
                }
                std::vector<double> opt_terms;
                for (int i : members) opt_terms.push_back(lp_pow_distance(points[i], opt_center, p));
                entry.opt = detail::pairwise_sum(opt_terms);
            }
            return memo.emplace(key, entry).first->second;
        }

        entry.leaf = false;
        entry.ref = std::numeric_limits<double>::infinity();
        entry.opt = std::numeric_limits<double>::infinity();
        std::vector<double> values;
        for (int dim = 0; dim < d; ++dim) {
            values.clear();
            for (int i = 0; i < n; ++i)
                if (pts >> i & 1) values.push_back(points[i][dim]);
            for (int c = 0; c < k; ++c)
                if (ctrs >> c & 1) values.push_back(centers[c][dim]);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                const double theta = 0.5 * (values[v] + values[v + 1]);
                std::uint32_t lp_mask = 0, rp_mask = 0, lc_mask = 0, rc_mask = 0;
                for (int i = 0; i < n; ++i)
                    if (pts >> i & 1) (points[i][dim] <= theta ? lp_mask : rp_mask) |= 1u << i;
                for (int c = 0; c < k; ++c)
                    if (ctrs >> c & 1) (centers[c][dim] <= theta ? lc_mask : rc_mask) |= 1u << c;
                if (lc_mask == 0 || rc_mask == 0) continue;
                const detail::OracleEntry& left = solve(lp_mask, lc_mask);
                const detail::OracleEntry& right = solve(rp_mask, rc_mask);
                if (left.ref + right.ref < entry.ref) entry.ref = left.ref + right.ref;
                if (left.opt + right.opt < entry.opt) {
                    entry.opt = left.opt + right.opt;
                    entry.cut = {dim, theta};
                    entry.left_key = key_of(lp_mask, lc_mask);
                    entry.right_key = key_of(rp_mask, rc_mask);
                }
            }
        }
        return memo.emplace(key, entry).first->second;
    };

    const std::uint32_t all_pts = n == 0 ? 0 : (n == 32 ? ~0u : (1u << n) - 1);
    const std::uint32_t all_ctrs = (1u << k) - 1;
    solve(all_pts, all_ctrs);

    OracleResult result;
    const detail::OracleEntry& root = memo.at(key_of(all_pts, all_ctrs));
    result.best_reference_cost = root.ref;
    result.best_optimal_cost = root.opt;
    result.nodes_explored = memo.size();

    // rebuild the optimal-mode witness
    detail::TreeAssembler assembler(d);
    std::function<void(std::uint32_t, int)> rebuild = [&](std::uint32_t key, int node) {
        const detail::OracleEntry& e = memo.at(key);
        if (e.leaf) {
            assembler.set_leaf_center(node, std::countr_zero(key >> n));
            return;
        }
        const auto [l, r] = assembler.split(node, e.cut);
        rebuild(e.left_key, l);
        rebuild(e.right_key, r);
    };
    rebuild(key_of(all_pts, all_ctrs), assembler.root());
    result.witness = assembler.finish();
    return result;
}

/// Exact pairwise distance delta of the lower-bound family:
/// delta^p = 2 sum_{i=1}^{m-1} (m-i) i^p.
inline double delta_p_pow(int m, double p) {
    if (m < 2) throw std::invalid_argument("delta_p: m must be >= 2");
    if (p < 1.0) throw std::invalid_argument("delta_p: p must be >= 1");
    double s = 0.0;
    for (int i = 1; i < m; ++i) s += (m - i) * detail::pow_abs(static_cast<double>(i), p);
    return 2.0 * s;
}

inline double delta_p(int m, double p) { return std::pow(delta_p_pow(m, p), 1.0 / p); }

namespace detail {

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace detail

enum class OneCutLaw { uniform, dp };

/// Expected reference-mode cost of a single random cut between two 1-D
/// centers, by adaptive quadrature split at the integrand's breakpoints.
inline double expected_one_cut_cost(const std::vector<double>& centers_1d,
                                    const std::vector<double>& points_1d, double p,
                                    OneCutLaw law) {
    if (centers_1d.size() != 2)
        throw std::invalid_argument("expected_one_cut_cost: need exactly two centers");
    if (p < 1.0) throw std::invalid_argument("expected_one_cut_cost: p must be >= 1");
    const double a = std::min(centers_1d[0], centers_1d[1]);
    const double b = std::max(centers_1d[0], centers_1d[1]);
    if (!(a < b)) throw std::invalid_argument("expected_one_cut_cost: centers coincide");

    const auto cost = [&](double theta) {
        double s = 0.0;
        for (double x : points_1d)
            s += x <= theta ? detail::pow_abs(x - a, p) : detail::pow_abs(x - b, p);
        return s;
    };
    const auto density = [&](double theta) {
        if (law == OneCutLaw::uniform) return 1.0 / (b - a);
        return p * std::exp2(p - 1.0) / detail::pow_abs(b - a, p) *
               detail::pow_abs(std::min(theta - a, b - theta), p - 1.0);
    };

    std::vector<double> breaks{a, b, 0.5 * (a + b)};
    for (double x : points_1d)
        if (x > a && x < b) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        total += detail::integrate([&](double t) { return cost(t) * density(t); }, breaks[i],
                                   breaks[i + 1], 1e-8 * (b - a));
    return total;
}

// ---------------------------------------------------------------------------
// Statistical test utilities
// ---------------------------------------------------------------------------

struct TestVerdict {
    bool pass = false;
    double statistic = 0.0;
    double threshold = 0.0;
};

namespace detail {

inline double ks_critical(double alpha) { return std::sqrt(-0.5 * std::log(alpha / 2.0)); }

}  // namespace detail

inline double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
        d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

/// One-sample Kolmogorov-Smirnov check; refuses under-sampled input.
inline TestVerdict ks_test(const std::vector<double>& samples,
                           const std::function<double(double)>& cdf, double alpha = 0.01) {
    if (samples.size() < 10'000)
        throw std::invalid_argument("ks_test: need at least 1e4 samples");
    TestVerdict v;
    v.statistic = ks_statistic(samples, cdf);
    v.threshold = detail::ks_critical(alpha) / std::sqrt(static_cast<double>(samples.size()));
    v.pass = v.statistic < v.threshold;
    return v;
}

inline double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    // advance both sides through every tied value before measuring, so
    // atoms shared by the two samples do not inflate the statistic
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    return d;
}

inline TestVerdict ks_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                 double alpha = 0.01) {
    TestVerdict v;
    v.statistic = ks_two_sample_statistic(a, b);
    const double n = static_cast<double>(a.size()), m = static_cast<double>(b.size());
    v.threshold = detail::ks_critical(alpha) * std::sqrt((n + m) / (n * m));
    v.pass = v.statistic < v.threshold;
    return v;
}

/// Three-sigma binomial band around an analytic probability.
inline TestVerdict binomial_band(std::uint64_t successes, std::uint64_t trials, double prob) {
    TestVerdict v;
    const double sigma = std::sqrt(prob * (1.0 - prob) / static_cast<double>(trials));
    v.statistic = std::fabs(static_cast<double>(successes) / static_cast<double>(trials) - prob);
    v.threshold = 3.0 * sigma;
    v.pass = v.statistic <= v.threshold;
    return v;
}

/// Chi-square goodness of fit at the 99% level (Wilson-Hilferty quantile).
inline TestVerdict chi_square_gof(const std::vector<std::uint64_t>& observed,
                                  const std::vector<double>& expected_prob, std::uint64_t trials) {
    if (observed.size() != expected_prob.size() || observed.size() < 2)
        throw std::invalid_argument("chi_square_gof: bad bin layout");
    TestVerdict v;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_prob[i] * static_cast<double>(trials);
        if (e <= 0.0) continue;
        const double diff = static_cast<double>(observed[i]) - e;
        stat += diff * diff / e;
    }
    const double nu = static_cast<double>(observed.size() - 1);
    const double z = 2.3263478740408408;  // 99th percentile of the standard normal
    const double h = 1.0 - 2.0 / (9.0 * nu) + z * std::sqrt(2.0 / (9.0 * nu));
    v.statistic = stat;
    v.threshold = nu * h * h * h;
    v.pass = stat < v.threshold;
    return v;
}

/// Named entry point for the sampled-law checks: KS against an analytic
/// CDF with the sample-size guard.
inline TestVerdict statistical_suite(const std::vector<double>& samples,
                                     const std::function<double(double)>& analytic_cdf,
                                     double alpha = 0.01) {
    return ks_test(samples, analytic_cdf, alpha);
}

}  // namespace xcluster
