#pragma once

// Instance generators: the prime-field lower-bound family, the min-cut
// fooling family with duplicated tail points, Gaussian mixtures for
// benchmarks, and a seeded reference-clustering heuristic.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "xcluster/core.hpp"
#include "xcluster/rng.hpp"

namespace xcluster {

struct Instance {
    int dim = 0;
    std::vector<Point> points;
    std::vector<Point> centers;  // reference centers; may be empty for raw point files
    std::string generator;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    int n() const { return static_cast<int>(points.size()); }
    int k() const { return static_cast<int>(centers.size()); }
    CenterSet center_set() const { return CenterSet(centers); }
};

namespace detail {

inline bool is_prime(long m) {
    if (m < 2) return false;
    for (long f = 2; f * f <= m; ++f)
        if (m % f == 0) return false;
    return true;
}

}  // namespace detail

/// k = m centers in d = m(m-1) dimensions, one dimension per non-constant
/// linear function over Z_m; each center surrounded by 2d points at unit
/// distance. All pairwise center distances coincide and every nontrivial
/// cut must break up one of the point shells.
inline Instance gen_lower_bound(int m) {
    if (m < 3 || !detail::is_prime(m))
        throw std::invalid_argument("gen_lower_bound: m must be a prime >= 3");
    const int k = m;
    const int d = m * (m - 1);
    Instance inst;
    inst.dim = d;
    inst.generator = "lower-bound";
    inst.params["m"] = m;

    inst.centers.assign(k, Point(d));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < d; ++i) {
            const long a = 1 + i / m;
            const long b = i % m;
            inst.centers[j][i] = static_cast<double>((a * j + b) % m);
        }

    inst.points.reserve(static_cast<std::size_t>(2) * d * k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < d; ++i)
            for (const double c : {-1.0, 1.0}) {
                Point pt = inst.centers[j];
                pt[i] += c;
                inst.points.push_back(std::move(pt));
            }
    return inst;
}

/// Lower-bound family folded to {0,1} coordinates plus k marker dimensions
/// and (k-1)/2 duplicated points per cluster on the marker axis, so that
/// marker cuts always separate the fewest points. Duplicates are
/// materialized as distinct records.
inline Instance gen_adversarial(int m) {
    if (m < 3 || !detail::is_prime(m))
        throw std::invalid_argument("gen_adversarial: m must be a prime >= 3");
    const Instance base = gen_lower_bound(m);
    const int k = m;
    const int d = m * (m - 1);
    Instance inst;
    inst.dim = d + k;
    inst.generator = "adversarial";
    inst.params["m"] = m;

    inst.centers.assign(k, Point(d + k, 0.0));
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < d; ++i)
            inst.centers[j][i] = static_cast<double>(static_cast<long>(base.centers[j][i]) % 2);
        inst.centers[j][d + j] = 1.0;
    }

    const int copies = (k - 1) / 2;
    inst.points.reserve(static_cast<std::size_t>(k) * (2 * d + copies));
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < d; ++i)
            for (const double c : {-1.0, 1.0}) {
                Point pt = inst.centers[j];
                pt[i] += c;
                inst.points.push_back(std::move(pt));
            }
        Point dup = inst.centers[j];
        dup[d + j] -= 1.0;
        for (int r = 0; r < copies; ++r) inst.points.push_back(dup);
    }
    return inst;
}

/// k centers uniform in [0,1]^d with isotropic Gaussian point clouds;
/// the true centers double as the reference clustering.
inline Instance gen_gaussian_mixture(int k, int d, int n_per_cluster, double sigma,
                                     RngStream& rng) {
    if (k < 1 || d < 1 || n_per_cluster < 1)
        throw std::invalid_argument("gen_gaussian_mixture: k, d, n must be positive");
    if (!(sigma > 0.0)) throw std::invalid_argument("gen_gaussian_mixture: sigma must be positive");
    Instance inst;
    inst.dim = d;
    inst.generator = "gaussian";
    inst.params = {{"k", static_cast<double>(k)},
                   {"d", static_cast<double>(d)},
                   {"n_per_cluster", static_cast<double>(n_per_cluster)},
                   {"sigma", sigma}};
    inst.seed = rng.seed();

    inst.centers.assign(k, Point(d));
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < d; ++i) inst.centers[j][i] = rng.next_double();

    inst.points.reserve(static_cast<std::size_t>(k) * n_per_cluster);
    for (int j = 0; j < k; ++j)
        for (int s = 0; s < n_per_cluster; ++s) {
            Point pt(d);
            for (int i = 0; i < d; ++i) pt[i] = inst.centers[j][i] + sigma * rng.normal();
            inst.points.push_back(std::move(pt));
        }
    return inst;
}

/// Distance-weighted seeding followed by alternating assignment/recenter
/// passes (coordinate median for p=1, mean for p=2, 1-D convex
/// minimization otherwise) until the relative cost improvement drops below
/// 1e-6 or 100 passes elapse.
inline CenterSet reference_centers(const std::vector<Point>& points, int k, double p,
                                   RngStream& rng) {
    if (static_cast<int>(points.size()) < k)
        throw std::invalid_argument("reference_centers: need at least k points");
    if (k < 1) throw std::invalid_argument("reference_centers: k must be positive");
    if (p < 1.0) throw std::invalid_argument("reference_centers: p must be >= 1");
    const int d = static_cast<int>(points.front().size());

    std::vector<Point> centers;
    centers.push_back(points[rng.below(points.size())]);
    std::vector<double> weight(points.size());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double best = lp_pow_distance(points[i], centers[0], p);
            for (std::size_t c = 1; c < centers.size(); ++c)
                best = std::min(best, lp_pow_distance(points[i], centers[c], p));
            weight[i] = best;
            total += best;
        }
        if (!(total > 0.0))
            throw std::invalid_argument("reference_centers: fewer than k distinct points");
        double target = rng.next_double() * total;
        std::size_t pick = points.size() - 1;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (weight[i] <= 0.0) continue;
            pick = i;
            if (target < weight[i]) break;
            target -= weight[i];
        }
        centers.push_back(points[pick]);
    }

    CenterSet current(centers);
    double prev_cost = cost_to_centers(points, current, p);
    for (int pass = 0; pass < 100; ++pass) {
        std::vector<std::vector<int>> clusters(k);
        for (std::size_t i = 0; i < points.size(); ++i)
            clusters[nearest_center(points[i], current, p)].push_back(static_cast<int>(i));

        std::vector<Point> next = current.centers;
        std::vector<double> coord;
        for (int j = 0; j < k; ++j) {
            if (clusters[j].empty()) continue;  // keep the previous center
            for (int i = 0; i < d; ++i) {
                coord.resize(clusters[j].size());
                for (std::size_t mIdx = 0; mIdx < clusters[j].size(); ++mIdx)
                    coord[mIdx] = points[clusters[j][mIdx]][i];
                next[j][i] = detail::optimal_coordinate(coord, p);
            }
        }
        CenterSet candidate(next);
        const double cost = cost_to_centers(points, candidate, p);
        current = std::move(candidate);
        if (prev_cost > 0.0 && (prev_cost - cost) / prev_cost < 1e-6) break;
        if (cost == 0.0) break;
        prev_cost = cost;
    }
    return current;
}

}  // namespace xcluster
