#pragma once

// Core domain types for threshold-tree clustering: points, center sets,
// threshold cuts/trees, point-to-leaf assignment and exact l_p cost
// evaluation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xcluster {

using Point = std::vector<double>;

namespace detail {

// Summation over a buffer with pairwise splitting; keeps rounding drift
// O(log n) instead of O(n).
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(std::span<const double>(v));
}

// |x|^p with repeated multiplication for small integer p so that the
// common p in {1,2,3} stay exact; std::pow otherwise.
inline double pow_abs(double x, double p) {
    x = std::fabs(x);
    if (p == 1.0) return x;
    if (p == 2.0) return x * x;
    double ip;
    if (std::modf(p, &ip) == 0.0 && p > 0.0 && p <= 64.0) {
        double r = 1.0;
        for (int i = 0; i < static_cast<int>(ip); ++i) r *= x;
        return r;
    }
    return std::pow(x, p);
}

inline bool finite_point(const Point& x) {
    return std::all_of(x.begin(), x.end(), [](double c) { return std::isfinite(c); });
}

}  // namespace detail

/// A set of k reference centers in R^d. Centers are pairwise distinct as
/// vectors; every center has exactly `dim` finite coordinates.
struct CenterSet {
    std::vector<Point> centers;
    int dim = 0;

    CenterSet() = default;

    explicit CenterSet(std::vector<Point> cs) : centers(std::move(cs)) {
        if (centers.empty()) throw std::invalid_argument("CenterSet: need at least one center");
        dim = static_cast<int>(centers.front().size());
        if (dim < 1) throw std::invalid_argument("CenterSet: dimension must be positive");
        for (const Point& c : centers) {
            if (static_cast<int>(c.size()) != dim)
                throw std::invalid_argument("CenterSet: inconsistent dimensions");
            if (!detail::finite_point(c))
                throw std::invalid_argument("CenterSet: non-finite coordinate");
        }
        // pairwise distinct, checked via a lexicographic sort of indices
        std::vector<int> order(centers.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return centers[a] < centers[b]; });
        for (std::size_t i = 1; i < order.size(); ++i) {
            if (centers[order[i - 1]] == centers[order[i]])
                throw std::invalid_argument("CenterSet: centers must be pairwise distinct");
        }
    }

    int k() const { return static_cast<int>(centers.size()); }
    const Point& operator[](int j) const { return centers[static_cast<std::size_t>(j)]; }
};

/// An axis-aligned split: route left iff x[dim] <= theta.
struct ThresholdCut {
    int dim = 0;
    double theta = 0.0;
};

/// Binary tree of threshold cuts with exactly k leaves; each leaf owns one
/// reference center. Nodes live in a flat arena, `root` first.
struct ThresholdTree {
    struct Node {
        int dim = -1;
        double theta = 0.0;
        int left = -1;
        int right = -1;
        int cluster = -1;       // leaf only
        int center_index = -1;  // leaf only
        bool is_leaf() const { return left < 0; }
    };

    std::vector<Node> nodes;
    int root = 0;
    int dim = 0;         // ambient dimension
    int num_leaves = 0;

    int k() const { return num_leaves; }

    int depth() const {
        if (nodes.empty()) return 0;
        return depth_below(root);
    }

    /// Routes x from the root; returns the reached leaf's cluster id.
    int assign(const Point& x) const {
        if (static_cast<int>(x.size()) != dim)
            throw std::invalid_argument("assign_point: dimension mismatch");
        int n = root;
        while (!nodes[n].is_leaf())
            n = (x[nodes[n].dim] <= nodes[n].theta) ? nodes[n].left : nodes[n].right;
        return nodes[n].cluster;
    }

    /// Leaf node index reached by routing x (for center-index lookups).
    int route_to_leaf(const Point& x) const {
        int n = root;
        while (!nodes[n].is_leaf())
            n = (x[nodes[n].dim] <= nodes[n].theta) ? nodes[n].left : nodes[n].right;
        return n;
    }

    std::vector<int> leaf_node_ids() const {
        std::vector<int> out;
        collect_leaves(root, out);
        return out;
    }

    /// Structural invariants against the center set the tree was built for.
    void validate(const CenterSet& centers) const {
        if (num_leaves != centers.k())
            throw std::logic_error("ThresholdTree: leaf count != k");
        const std::vector<int> leaves = leaf_node_ids();
        if (static_cast<int>(leaves.size()) != num_leaves)
            throw std::logic_error("ThresholdTree: inconsistent leaf count");
        std::vector<char> seen(centers.k(), 0);
        int internal = 0;
        for (const Node& n : nodes)
            if (!n.is_leaf()) ++internal;
        if (internal != centers.k() - 1)
            throw std::logic_error("ThresholdTree: internal node count != k-1");
        for (int id : leaves) {
            const Node& leaf = nodes[id];
            if (leaf.center_index < 0 || leaf.center_index >= centers.k())
                throw std::logic_error("ThresholdTree: bad center index");
            if (seen[leaf.center_index]++)
                throw std::logic_error("ThresholdTree: duplicate center ownership");
            if (route_to_leaf(centers[leaf.center_index]) != id)
                throw std::logic_error("ThresholdTree: owned center does not route to its leaf");
        }
    }

private:
    int depth_below(int n) const {
        if (nodes[n].is_leaf()) return 0;
        return 1 + std::max(depth_below(nodes[n].left), depth_below(nodes[n].right));
    }

    void collect_leaves(int n, std::vector<int>& out) const {
        if (nodes[n].is_leaf()) {
            out.push_back(n);
            return;
        }
        collect_leaves(nodes[n].left, out);
        collect_leaves(nodes[n].right, out);
    }
};

/// Total map point index -> cluster id.
using Assignment = std::vector<int>;

inline int assign_point(const ThresholdTree& tree, const Point& x) { return tree.assign(x); }

inline Assignment assign_all(const ThresholdTree& tree, const std::vector<Point>& points) {
    Assignment a(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) a[i] = tree.assign(points[i]);
    return a;
}

/// ||x - y||_p^p = sum_i |x_i - y_i|^p.
inline double lp_pow_distance(const Point& x, const Point& y, double p) {
    if (x.size() != y.size()) throw std::invalid_argument("lp_pow_distance: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += detail::pow_abs(x[i] - y[i], p);
    return s;
}

/// Index of the nearest center under ||.||_p^p; ties go to the lowest index.
inline int nearest_center(const Point& x, const CenterSet& centers, double p) {
    int best = 0;
    double best_d = lp_pow_distance(x, centers[0], p);
    for (int j = 1; j < centers.k(); ++j) {
        const double d = lp_pow_distance(x, centers[j], p);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

/// cost_p of the unconstrained clustering induced by `centers`:
/// sum_x min_j ||x - mu_j||_p^p.
inline double cost_to_centers(const std::vector<Point>& points, const CenterSet& centers, double p) {
    if (p < 1.0) throw std::invalid_argument("cost_to_centers: p must be >= 1");
    std::vector<double> terms;
    terms.reserve(points.size());
    for (const Point& x : points) {
        if (static_cast<int>(x.size()) != centers.dim)
            throw std::invalid_argument("cost_to_centers: dimension mismatch");
        terms.push_back(lp_pow_distance(x, centers[nearest_center(x, centers, p)], p));
    }
    return detail::pairwise_sum(terms);
}

enum class LeafCenterMode { reference, optimal };

/// Per-run cost figures for one tree evaluation.
struct CostReport {
    double p = 1.0;
    LeafCenterMode mode = LeafCenterMode::reference;
    double cost_reference_centers = 0.0;    // each point charged to its leaf's owned center
    double cost_optimal_leaf_centers = 0.0; // per-leaf coordinate-wise optimal centers
    double ratio_to_reference = 0.0;        // cost(mode) / cost_p(centers)
    std::vector<int> empty_leaves;          // clusters that received no point
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;

    double cost() const {
        return mode == LeafCenterMode::reference ? cost_reference_centers
                                                 : cost_optimal_leaf_centers;
    }
};

namespace detail {

// 1-D optimal center for sum_i |v_i - c|^p. Exact median/mean for p in
// {1,2}; ternary search on the convex objective otherwise (width < 1e-12
// or 200 iterations).
inline double optimal_coordinate(std::vector<double>& vals, double p) {
    if (vals.empty()) return 0.0;
    if (p == 1.0) {
        std::sort(vals.begin(), vals.end());
        const std::size_t n = vals.size();
        if (n % 2 == 1) return vals[n / 2];
        return 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
    }
    if (p == 2.0) return pairwise_sum(vals) / static_cast<double>(vals.size());
    auto objective = [&](double c) {
        double s = 0.0;
        for (double v : vals) s += pow_abs(v - c, p);
        return s;
    };
    double lo = *std::min_element(vals.begin(), vals.end());
    double hi = *std::max_element(vals.begin(), vals.end());
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (objective(m1) < objective(m2))
            hi = m2;
        else
            lo = m1;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Exact cost of the explainable clustering defined by `tree`. Reference
/// mode charges each point to its leaf's owned center; optimal mode
/// recomputes each leaf's cost-minimizing center coordinate-wise. Both
/// figures are always reported. Empty leaves contribute zero cost and are
/// flagged.
inline CostReport cost_of_tree(const std::vector<Point>& points, const ThresholdTree& tree,
                               const CenterSet& centers, double p,
                               LeafCenterMode mode = LeafCenterMode::reference) {
    if (p < 1.0) throw std::invalid_argument("cost_of_tree: p must be >= 1");
    CostReport report;
    report.p = p;
    report.mode = mode;

    const std::vector<int> leaf_ids = tree.leaf_node_ids();
    std::vector<std::vector<int>> leaf_points(leaf_ids.size());
    std::vector<int> leaf_of_node(tree.nodes.size(), -1);
    for (std::size_t li = 0; li < leaf_ids.size(); ++li) leaf_of_node[leaf_ids[li]] = static_cast<int>(li);

    for (std::size_t i = 0; i < points.size(); ++i) {
        const int node = tree.route_to_leaf(points[i]);
        leaf_points[leaf_of_node[node]].push_back(static_cast<int>(i));
    }

    std::vector<double> ref_terms, opt_terms;
    ref_terms.reserve(points.size());
    opt_terms.reserve(points.size());
    for (std::size_t li = 0; li < leaf_ids.size(); ++li) {
        const ThresholdTree::Node& leaf = tree.nodes[leaf_ids[li]];
        const std::vector<int>& members = leaf_points[li];
        if (members.empty()) {
            report.empty_leaves.push_back(leaf.cluster);
            continue;
        }
        const Point& owned = centers[leaf.center_index];
        for (int pi : members) ref_terms.push_back(lp_pow_distance(points[pi], owned, p));

        Point opt(centers.dim);
        std::vector<double> coord(members.size());
        for (int d = 0; d < centers.dim; ++d) {
            for (std::size_t m = 0; m < members.size(); ++m) coord[m] = points[members[m]][d];
            opt[d] = detail::optimal_coordinate(coord, p);
        }
        for (int pi : members) opt_terms.push_back(lp_pow_distance(points[pi], opt, p));
    }
    report.cost_reference_centers = detail::pairwise_sum(ref_terms);
    report.cost_optimal_leaf_centers = detail::pairwise_sum(opt_terms);

    const double baseline = cost_to_centers(points, centers, p);
    const double c = report.cost();
    if (baseline > 0.0)
        report.ratio_to_reference = c / baseline;
    else
        report.ratio_to_reference = (c == 0.0) ? 1.0 : std::numeric_limits<double>::infinity();
    return report;
}

}  // namespace xcluster
