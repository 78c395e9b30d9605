#pragma once

// Random cut generation: the uniform law over the centers' bounding box,
// the weighted D_p law over dimension-interval pairs with closed-form
// inverse-CDF theta sampling, and the separated-pair scan used by the
// discard rules.

#include <optional>
#include <vector>

#include "xcluster/core.hpp"
#include "xcluster/geometry.hpp"
#include "xcluster/rng.hpp"

namespace xcluster {

/// Uniform cut over the bounding box: dimension i with probability
/// |I_i|/L, theta uniform on I_i; density 1/L over all box cuts.
inline ThresholdCut sample_uniform_cut(const BoundingBox& box, RngStream& rng) {
    if (!(box.total_length > 0.0))
        throw std::invalid_argument("sample_uniform_cut: empty bounding box");
    double target = rng.next_double() * box.total_length;
    int dim = -1;
    for (int i = 0; i < box.dim(); ++i) {
        const double side = box.side(i);
        if (side <= 0.0) continue;
        dim = i;
        if (target < side) break;
        target -= side;
    }
    // target can escape the loop on rounding; the last nontrivial side wins
    const auto& [lo, hi] = box.intervals[dim];
    return {dim, rng.uniform(lo, hi)};
}

/// Exact inverse CDF of the density p*2^(p-1)/(b-a)^p * min(t-a, b-t)^(p-1)
/// on [a, b]. Symmetric around the midpoint; reduces to uniform at p = 1.
inline double theta_inverse_cdf(double a, double b, double p, double u) {
    if (!(a < b)) throw std::invalid_argument("theta_inverse_cdf: need a < b");
    if (p < 1.0) throw std::invalid_argument("theta_inverse_cdf: p must be >= 1");
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("theta_inverse_cdf: u outside [0,1]");
    const double len = b - a;
    if (u <= 0.5) return a + len * std::pow(u * std::exp2(1.0 - p), 1.0 / p);
    return b - len * std::pow((1.0 - u) * std::exp2(1.0 - p), 1.0 / p);
}

/// Analytic CDF matching theta_inverse_cdf (for statistical checks).
inline double theta_cdf(double a, double b, double p, double theta) {
    if (theta <= a) return 0.0;
    if (theta >= b) return 1.0;
    const double len = b - a;
    if (theta <= a + 0.5 * len)
        return std::exp2(p - 1.0) * std::pow((theta - a) / len, p);
    return 1.0 - std::exp2(p - 1.0) * std::pow((b - theta) / len, p);
}

/// D_p cut: dimension-interval pair (i, [a,b]) with probability
/// |b-a|^p / L_p, then theta by inverse CDF. The composite density is
/// proportional to min_j |mu_i^j - theta|^(p-1) on each interval.
inline ThresholdCut sample_dp_cut(const DimensionIntervalSet& set, RngStream& rng) {
    if (!(set.total_weight > 0.0)) throw std::invalid_argument("sample_dp_cut: zero total weight");
    double target = rng.next_double() * set.total_weight;
    std::size_t pick = set.entries.size() - 1;
    for (std::size_t e = 0; e < set.entries.size(); ++e) {
        if (target < set.entries[e].weight) {
            pick = e;
            break;
        }
        target -= set.entries[e].weight;
    }
    const auto& entry = set.entries[pick];
    return {entry.dim, theta_inverse_cdf(entry.a, entry.b, set.p, rng.next_double())};
}

enum class PairMetric { l1, pseudo_p };

/// Minimum metric value over all center pairs that share a leaf and are
/// separated by the cut; empty if the cut separates no co-leaf pair.
/// `leaves` is the current partition of center indices.
inline std::optional<double> min_separated_pair(const ThresholdCut& cut,
                                                const std::vector<std::vector<int>>& leaves,
                                                const CenterSet& centers, PairMetric metric,
                                                double p = 1.0) {
    std::optional<double> best;
    std::vector<int> lo_side, hi_side;
    for (const std::vector<int>& leaf : leaves) {
        lo_side.clear();
        hi_side.clear();
        for (int j : leaf) {
            if (centers[j][cut.dim] <= cut.theta)
                lo_side.push_back(j);
            else
                hi_side.push_back(j);
        }
        if (lo_side.empty() || hi_side.empty()) continue;
        for (int a : lo_side) {
            for (int b : hi_side) {
                const double d = metric == PairMetric::l1
                                     ? lp_pow_distance(centers[a], centers[b], 1.0)
                                     : pseudo_distance(centers[a], centers[b], centers, p);
                if (!best || d < *best) best = d;
            }
        }
    }
    return best;
}

/// Description of the active sampling law.
struct CutDistribution {
    enum class Kind { uniform_all_cuts, dp };

    Kind kind = Kind::uniform_all_cuts;
    double p = 1.0;
    BoundingBox box;               // uniform_all_cuts
    DimensionIntervalSet weights;  // dp

    static CutDistribution uniform(const CenterSet& centers) {
        CutDistribution d;
        d.kind = Kind::uniform_all_cuts;
        d.box = bounding_box(centers);
        return d;
    }

    static CutDistribution dp(const CenterSet& centers, double p) {
        CutDistribution d;
        d.kind = Kind::dp;
        d.p = p;
        d.weights = all_intervals(centers, p);
        if (!(d.weights.total_weight > 0.0))
            throw std::invalid_argument("CutDistribution: L_p must be positive");
        return d;
    }

    ThresholdCut sample(RngStream& rng) const {
        return kind == Kind::uniform_all_cuts ? sample_uniform_cut(box, rng)
                                              : sample_dp_cut(weights, rng);
    }
};

}  // namespace xcluster
