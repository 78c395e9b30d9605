#pragma once

// Bounding boxes, interval decompositions induced by center projections,
// and the pseudo-distance d_p. These carry the geometry behind both cut
// distributions: the uniform law over the bounding box and the weighted
// law over dimension-interval pairs.

#include <algorithm>
#include <utility>
#include <vector>

#include "xcluster/core.hpp"

namespace xcluster {

/// Per-dimension intervals [min_j mu_i^j, max_j mu_i^j] and their total
/// length L.
struct BoundingBox {
    std::vector<std::pair<double, double>> intervals;
    double total_length = 0.0;

    int dim() const { return static_cast<int>(intervals.size()); }
    double side(int i) const { return intervals[i].second - intervals[i].first; }
};

inline BoundingBox bounding_box(const CenterSet& centers) {
    BoundingBox box;
    box.intervals.resize(centers.dim);
    std::vector<double> sides(centers.dim);
    for (int i = 0; i < centers.dim; ++i) {
        double lo = centers[0][i], hi = centers[0][i];
        for (int j = 1; j < centers.k(); ++j) {
            lo = std::min(lo, centers[j][i]);
            hi = std::max(hi, centers[j][i]);
        }
        box.intervals[i] = {lo, hi};
        sides[i] = hi - lo;
    }
    box.total_length = detail::pairwise_sum(sides);
    return box;
}

/// Consecutive intervals along one dimension between two coordinates,
/// delimited by the center projections strictly between them. Contiguous:
/// each interval's right endpoint equals the next one's left endpoint.
struct IntervalDecomposition {
    int dim = 0;
    std::vector<std::pair<double, double>> intervals;

    double length_sum() const {
        std::vector<double> lens(intervals.size());
        for (std::size_t i = 0; i < intervals.size(); ++i)
            lens[i] = intervals[i].second - intervals[i].first;
        return detail::pairwise_sum(lens);
    }
};

inline IntervalDecomposition interval_decomposition(int dim, double x, double y,
                                                    const CenterSet& centers) {
    IntervalDecomposition out;
    out.dim = dim;
    if (x == y) return out;
    const double lo = std::min(x, y), hi = std::max(x, y);
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (int j = 0; j < centers.k(); ++j) {
        const double c = centers[j][dim];
        if (c > lo && c < hi) cuts.push_back(c);  // coincident projections merge below
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    out.intervals.reserve(cuts.size() - 1);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        out.intervals.emplace_back(cuts[i], cuts[i + 1]);
    return out;
}

/// d_p(x, y): sum of |b-a|^p over the decomposition of every dimension.
/// Lower-bounds ||x-y||_p^p, with equality at p = 1.
inline double pseudo_distance(const Point& x, const Point& y, const CenterSet& centers, double p) {
    if (x.size() != y.size()) throw std::invalid_argument("pseudo_distance: dimension mismatch");
    std::vector<double> terms;
    for (int i = 0; i < static_cast<int>(x.size()); ++i) {
        const IntervalDecomposition dec = interval_decomposition(i, x[i], y[i], centers);
        for (const auto& [a, b] : dec.intervals) terms.push_back(detail::pow_abs(b - a, p));
    }
    return detail::pairwise_sum(terms);
}

/// All dimension-interval pairs delimited by the center projections, with
/// weights |b-a|^p summing to L_p. Entries are ordered by (dim, a); within
/// a dimension they are consecutive and disjoint.
struct DimensionIntervalSet {
    struct Entry {
        int dim;
        double a;
        double b;
        double weight;  // |b-a|^p
    };

    std::vector<Entry> entries;
    std::vector<int> dim_offsets;  // entries of dimension i live in [dim_offsets[i], dim_offsets[i+1])
    double total_weight = 0.0;     // L_p
    double p = 1.0;

    int count(int dim) const { return dim_offsets[dim + 1] - dim_offsets[dim]; }
    const Entry& at(int dim, int index) const { return entries[dim_offsets[dim] + index]; }
};

inline DimensionIntervalSet all_intervals(const CenterSet& centers, double p) {
    if (centers.k() < 2) throw std::invalid_argument("all_intervals: need k >= 2");
    if (p < 1.0) throw std::invalid_argument("all_intervals: p must be >= 1");
    DimensionIntervalSet set;
    set.p = p;
    set.dim_offsets.assign(centers.dim + 1, 0);
    std::vector<double> proj(centers.k());
    for (int i = 0; i < centers.dim; ++i) {
        set.dim_offsets[i] = static_cast<int>(set.entries.size());
        for (int j = 0; j < centers.k(); ++j) proj[j] = centers[j][i];
        std::sort(proj.begin(), proj.end());
        const auto last = std::unique(proj.begin(), proj.end());
        for (auto it = proj.begin(); it + 1 != last; ++it) {
            const double a = *it, b = *(it + 1);
            set.entries.push_back({i, a, b, detail::pow_abs(b - a, p)});
        }
    }
    set.dim_offsets[centers.dim] = static_cast<int>(set.entries.size());
    std::vector<double> weights(set.entries.size());
    for (std::size_t e = 0; e < set.entries.size(); ++e) weights[e] = set.entries[e].weight;
    set.total_weight = detail::pairwise_sum(weights);
    return set;
}

}  // namespace xcluster
