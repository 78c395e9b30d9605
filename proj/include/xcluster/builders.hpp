#pragma once

// Clarity-first tree builders. The randomized builders are oblivious to
// data points: they consume only the reference centers and an RngStream.
// The min-cut baseline is the deterministic point-driven construction used
// for comparison.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "xcluster/core.hpp"
#include "xcluster/geometry.hpp"
#include "xcluster/rng.hpp"
#include "xcluster/samplers.hpp"

namespace xcluster {

/// Record of one build: accepted cuts with the maximum co-leaf distance
/// before each, plus draw/discard counters. `c_max_before` is measured in
/// l1 for the uniform and modified builders and in pseudo-distance for the
/// l_p builder; fast uniform builds leave it NaN.
struct BuildTrace {
    struct Step {
        std::uint64_t draw_index = 0;  // cumulative draws when this cut was accepted (1-based)
        ThresholdCut cut;
        int leaves_split = 0;
        double c_max_before = 0.0;
    };

    std::vector<Step> steps;
    double initial_c_max = 0.0;
    std::uint64_t total_draws = 0;  // all sampled cuts, including discarded and non-splitting ones
    std::uint64_t discarded = 0;    // rejected by the close-pair rule
    std::uint64_t no_ops = 0;       // split no leaf, silently resampled
    int splits_total = 0;           // leaf splits performed; k-1 on completion
};

struct BuildResult {
    ThresholdTree tree;
    BuildTrace trace;
};

namespace detail {

inline constexpr std::uint64_t REJECTION_GUARD = 10'000'000;

// After this many consecutive non-splitting draws the builder samples once
// from the exact conditional law instead; by memorylessness of rejection
// the accepted cut's distribution is unchanged, but degenerate geometries
// (split windows of relative measure ~1e-9) still terminate.
inline constexpr std::uint64_t CONDITIONAL_FALLBACK_STREAK = 10'000;

// Incremental tree arena: nodes start as leaves and become internal when
// split.
class TreeAssembler {
public:
    explicit TreeAssembler(int dim) {
        tree_.dim = dim;
        tree_.nodes.emplace_back();
    }

    int root() const { return 0; }

    std::pair<int, int> split(int node, const ThresholdCut& cut) {
        const int left = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        const int right = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        ThresholdTree::Node& n = tree_.nodes[node];
        n.dim = cut.dim;
        n.theta = cut.theta;
        n.left = left;
        n.right = right;
        return {left, right};
    }

    void set_leaf_center(int node, int center_index) {
        tree_.nodes[node].center_index = center_index;
    }

    /// Assigns cluster ids in left-to-right leaf order and returns the tree.
    ThresholdTree finish() {
        int next_cluster = 0;
        assign_clusters(0, next_cluster);
        tree_.num_leaves = next_cluster;
        return std::move(tree_);
    }

private:
    void assign_clusters(int node, int& next) {
        ThresholdTree::Node& n = tree_.nodes[node];
        if (n.is_leaf()) {
            n.cluster = next++;
            return;
        }
        assign_clusters(n.left, next);
        assign_clusters(n.right, next);
    }

    ThresholdTree tree_;
};

struct LeafState {
    std::vector<int> members;
    std::vector<std::pair<double, double>> extents;  // per dimension
    double diameter = 0.0;  // max pairwise member distance under the build metric
    int node = 0;
    int created_iteration = 0;
};

inline std::vector<std::pair<double, double>> member_extents(const CenterSet& centers,
                                                             const std::vector<int>& members) {
    std::vector<std::pair<double, double>> ext(centers.dim);
    for (int i = 0; i < centers.dim; ++i) {
        double lo = centers[members[0]][i], hi = lo;
        for (std::size_t m = 1; m < members.size(); ++m) {
            const double c = centers[members[m]][i];
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        ext[i] = {lo, hi};
    }
    return ext;
}

inline double leaf_diameter(const CenterSet& centers, const std::vector<int>& members,
                            PairMetric metric, double p) {
    double best = 0.0;
    for (std::size_t a = 0; a < members.size(); ++a) {
        for (std::size_t b = a + 1; b < members.size(); ++b) {
            const double d = metric == PairMetric::l1
                                 ? lp_pow_distance(centers[members[a]], centers[members[b]], 1.0)
                                 : pseudo_distance(centers[members[a]], centers[members[b]],
                                                   centers, p);
            best = std::max(best, d);
        }
    }
    return best;
}

enum class RefVariant { uniform, modified, lp };

inline BuildResult build_reference(const CenterSet& centers, RngStream& rng, RefVariant variant,
                                   double p, int ell) {
    if (variant == RefVariant::lp && p < 1.0)
        throw std::invalid_argument("build_lp: p must be >= 1");
    if (ell < 4) throw std::invalid_argument("builder: ell must be >= 4");

    const int k = centers.k();
    TreeAssembler assembler(centers.dim);
    BuildResult result;

    if (k == 1) {
        assembler.set_leaf_center(assembler.root(), 0);
        result.tree = assembler.finish();
        return result;
    }

    const PairMetric metric = variant == RefVariant::lp ? PairMetric::pseudo_p : PairMetric::l1;
    const double metric_p = variant == RefVariant::lp ? p : 1.0;
    const CutDistribution dist = variant == RefVariant::lp ? CutDistribution::dp(centers, p)
                                                           : CutDistribution::uniform(centers);
    const double k_pow_ell = std::pow(static_cast<double>(k), static_cast<double>(ell));

    std::vector<LeafState> leaves;
    {
        LeafState root;
        root.members.resize(k);
        for (int j = 0; j < k; ++j) root.members[j] = j;
        root.extents = member_extents(centers, root.members);
        root.diameter = leaf_diameter(centers, root.members, metric, metric_p);
        root.node = assembler.root();
        leaves.push_back(std::move(root));
    }
    result.trace.initial_c_max = leaves[0].diameter;

    // Exact conditional draws for the rejection fallback: theta uniform on
    // the union of the current leaf extents, or a covered dimension-interval
    // pair weighted by |b-a|^p.
    const auto conditional_uniform = [&]() -> ThresholdCut {
        std::vector<std::vector<std::pair<double, double>>> unions(centers.dim);
        std::vector<double> measure(centers.dim, 0.0);
        std::vector<std::pair<double, double>> segs;
        for (int i = 0; i < centers.dim; ++i) {
            segs.clear();
            for (const LeafState& leaf : leaves)
                if (leaf.extents[i].first < leaf.extents[i].second) segs.push_back(leaf.extents[i]);
            std::sort(segs.begin(), segs.end());
            for (const auto& s : segs) {
                if (!unions[i].empty() && s.first <= unions[i].back().second)
                    unions[i].back().second = std::max(unions[i].back().second, s.second);
                else
                    unions[i].push_back(s);
            }
            for (const auto& s : unions[i]) measure[i] += s.second - s.first;
        }
        double total = 0.0;
        for (double m : measure) total += m;
        double target = rng.next_double() * total;
        int dim = -1;
        for (int i = 0; i < centers.dim; ++i) {
            if (measure[i] <= 0.0) continue;
            dim = i;
            if (target < measure[i]) break;
            target -= measure[i];
        }
        for (const auto& [lo, hi] : unions[dim]) {
            if (target < hi - lo) {
                double theta = lo + target;
                if (!(theta < hi)) theta = std::nextafter(hi, lo);
                return {dim, theta};
            }
            target -= hi - lo;
        }
        const auto& [lo, hi] = unions[dim].back();
        return {dim, std::nextafter(hi, lo)};
    };

    const auto conditional_dp = [&]() -> ThresholdCut {
        const DimensionIntervalSet& set = dist.weights;
        std::vector<std::size_t> covered;
        double total = 0.0;
        for (std::size_t e = 0; e < set.entries.size(); ++e) {
            const auto& entry = set.entries[e];
            for (const LeafState& leaf : leaves) {
                const auto& [lo, hi] = leaf.extents[entry.dim];
                if (lo <= entry.a && entry.b <= hi) {
                    covered.push_back(e);
                    total += entry.weight;
                    break;
                }
            }
        }
        if (covered.empty())
            throw std::logic_error("builder: no covered interval while leaves remain");
        double target = rng.next_double() * total;
        std::size_t pick = covered.back();
        for (std::size_t c : covered) {
            if (target < set.entries[c].weight) {
                pick = c;
                break;
            }
            target -= set.entries[c].weight;
        }
        const auto& entry = set.entries[pick];
        double theta = theta_inverse_cdf(entry.a, entry.b, p, rng.next_double());
        if (!(theta < entry.b)) theta = std::nextafter(entry.b, entry.a);
        return {entry.dim, theta};
    };

    std::uint64_t consecutive_rejects = 0;
    std::uint64_t noop_streak = 0;
    std::vector<int> split_ids, lo_side, hi_side;
    while (static_cast<int>(leaves.size()) < k) {
        const ThresholdCut cut =
            noop_streak >= CONDITIONAL_FALLBACK_STREAK
                ? (variant == RefVariant::lp ? conditional_dp() : conditional_uniform())
                : dist.sample(rng);
        ++result.trace.total_draws;

        split_ids.clear();
        for (std::size_t li = 0; li < leaves.size(); ++li) {
            const auto& [lo, hi] = leaves[li].extents[cut.dim];
            if (lo <= cut.theta && cut.theta < hi) split_ids.push_back(static_cast<int>(li));
        }
        if (split_ids.empty()) {
            ++result.trace.no_ops;
            ++noop_streak;
            if (++consecutive_rejects > REJECTION_GUARD)
                throw std::runtime_error("builder: rejection loop exceeded guard");
            continue;
        }
        noop_streak = 0;

        double c_max = 0.0;
        for (const LeafState& leaf : leaves) c_max = std::max(c_max, leaf.diameter);

        if (variant != RefVariant::uniform) {
            double closest = std::numeric_limits<double>::infinity();
            for (int li : split_ids) {
                lo_side.clear();
                hi_side.clear();
                for (int j : leaves[li].members) {
                    if (centers[j][cut.dim] <= cut.theta)
                        lo_side.push_back(j);
                    else
                        hi_side.push_back(j);
                }
                for (int a : lo_side) {
                    for (int b : hi_side) {
                        const double d = metric == PairMetric::l1
                                             ? lp_pow_distance(centers[a], centers[b], 1.0)
                                             : pseudo_distance(centers[a], centers[b], centers, p);
                        closest = std::min(closest, d);
                    }
                }
            }
            if (closest <= c_max / k_pow_ell) {
                ++result.trace.discarded;
                if (++consecutive_rejects > REJECTION_GUARD)
                    throw std::runtime_error("builder: discard loop exceeded guard");
                continue;
            }
        }

        consecutive_rejects = 0;
        result.trace.steps.push_back({result.trace.total_draws, cut,
                                      static_cast<int>(split_ids.size()), c_max});

        // split back-to-front so stored indices stay valid
        for (auto it = split_ids.rbegin(); it != split_ids.rend(); ++it) {
            LeafState parent = std::move(leaves[*it]);
            leaves.erase(leaves.begin() + *it);

            LeafState minus, plus;
            minus.created_iteration = static_cast<int>(result.trace.steps.size());
            plus.created_iteration = minus.created_iteration;
            for (int j : parent.members) {
                if (centers[j][cut.dim] <= cut.theta)
                    minus.members.push_back(j);
                else
                    plus.members.push_back(j);
            }
            const auto [lnode, rnode] = assembler.split(parent.node, cut);
            minus.node = lnode;
            plus.node = rnode;
            for (LeafState* child : {&minus, &plus}) {
                child->extents = member_extents(centers, child->members);
                child->diameter = child->members.size() > 1
                                      ? leaf_diameter(centers, child->members, metric, metric_p)
                                      : 0.0;
            }
            leaves.push_back(std::move(minus));
            leaves.push_back(std::move(plus));
            ++result.trace.splits_total;
        }
    }

    for (const LeafState& leaf : leaves) assembler.set_leaf_center(leaf.node, leaf.members[0]);
    result.tree = assembler.finish();
    return result;
}

}  // namespace detail

/// Uniform random cuts over the bounding box until every center sits in
/// its own leaf. Draws are conditioned on splitting at least one leaf by
/// silent resampling; the trace counts the resamples.
inline BuildResult build_uniform(const CenterSet& centers, RngStream& rng) {
    return detail::build_reference(centers, rng, detail::RefVariant::uniform, 1.0, 4);
}

/// Sample-discard variant: a uniform cut separating two co-leaf centers
/// closer than c_max(t)/k^ell (l1) is discarded and redrawn.
inline BuildResult build_modified(const CenterSet& centers, RngStream& rng, int ell = 4) {
    return detail::build_reference(centers, rng, detail::RefVariant::modified, 1.0, ell);
}

/// General l_p builder: cuts from D_p, discarding any that separates two
/// co-leaf centers closer than c'_{p,max}(t)/k^ell in pseudo-distance.
inline BuildResult build_lp(const CenterSet& centers, double p, RngStream& rng, int ell = 4) {
    return detail::build_reference(centers, rng, detail::RefVariant::lp, p, ell);
}

/// Deterministic min-cut baseline. Each point is pre-assigned to its
/// nearest center (||.||_p^p with `assign_p`; ties to the lowest index).
/// At every node the candidate cuts are the midpoints between consecutive
/// distinct coordinates of the node's points and centers; among those
/// separating at least two of the node's centers, the one separating the
/// fewest points from their own centers wins, ties resolved by lowest
/// dimension then lowest theta.
inline ThresholdTree build_imm_min_cut(const std::vector<Point>& points, const CenterSet& centers,
                                       double assign_p = 1.0) {
    if (points.empty()) throw std::invalid_argument("build_imm_min_cut: need at least one point");
    for (const Point& x : points)
        if (static_cast<int>(x.size()) != centers.dim)
            throw std::invalid_argument("build_imm_min_cut: dimension mismatch");

    std::vector<int> owner(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        owner[i] = nearest_center(points[i], centers, assign_p);

    detail::TreeAssembler assembler(centers.dim);

    struct Frame {
        std::vector<int> pts;
        std::vector<int> ctrs;
        int node;
    };
    std::vector<Frame> stack;
    {
        Frame root;
        root.pts.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) root.pts[i] = static_cast<int>(i);
        root.ctrs.resize(centers.k());
        for (int j = 0; j < centers.k(); ++j) root.ctrs[j] = j;
        root.node = assembler.root();
        stack.push_back(std::move(root));
    }

    std::vector<double> values;
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        if (frame.ctrs.size() == 1) {
            assembler.set_leaf_center(frame.node, frame.ctrs[0]);
            continue;
        }

        std::vector<char> in_node(centers.k(), 0);
        for (int j : frame.ctrs) in_node[j] = 1;

        long best_mistakes = -1;
        ThresholdCut best_cut;
        for (int dim = 0; dim < centers.dim; ++dim) {
            values.clear();
            for (int pi : frame.pts) values.push_back(points[pi][dim]);
            for (int j : frame.ctrs) values.push_back(centers[j][dim]);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                const double theta = 0.5 * (values[v] + values[v + 1]);
                int below = 0;
                for (int j : frame.ctrs)
                    if (centers[j][dim] <= theta) ++below;
                if (below == 0 || below == static_cast<int>(frame.ctrs.size())) continue;
                long mistakes = 0;
                for (int pi : frame.pts) {
                    if (!in_node[owner[pi]]) continue;  // already separated higher up
                    const bool point_left = points[pi][dim] <= theta;
                    const bool center_left = centers[owner[pi]][dim] <= theta;
                    if (point_left != center_left) ++mistakes;
                }
                if (best_mistakes < 0 || mistakes < best_mistakes ||
                    (mistakes == best_mistakes &&
                     (dim < best_cut.dim || (dim == best_cut.dim && theta < best_cut.theta)))) {
                    best_mistakes = mistakes;
                    best_cut = {dim, theta};
                }
            }
        }

        const auto [lnode, rnode] = assembler.split(frame.node, best_cut);
        Frame left, right;
        left.node = lnode;
        right.node = rnode;
        for (int pi : frame.pts)
            (points[pi][best_cut.dim] <= best_cut.theta ? left.pts : right.pts).push_back(pi);
        for (int j : frame.ctrs)
            (centers[j][best_cut.dim] <= best_cut.theta ? left.ctrs : right.ctrs).push_back(j);
        stack.push_back(std::move(left));
        stack.push_back(std::move(right));
    }

    return assembler.finish();
}

}  // namespace xcluster
