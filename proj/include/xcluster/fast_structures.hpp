#pragma once

// Near-linear builder machinery: per-leaf ordered coordinate sets for
// O(d min(|B-|,|B+|) log|B|) splits, per-dimension segment trees over the
// center-projection segments for stabbing retrieval and for sampling cuts
// conditioned on splitting a leaf, and the weighted interval tree behind
// D_p sampling.

#include <bit>
#include <cassert>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <vector>

#include "xcluster/builders.hpp"
#include "xcluster/core.hpp"
#include "xcluster/geometry.hpp"
#include "xcluster/rng.hpp"
#include "xcluster/samplers.hpp"

namespace xcluster {

namespace detail {

// Segment tree over the elementary segments of one dimension. Tracks, per
// node, the static weight of its range and the weight of the part covered
// by at least one stored range (cover counts held at canonical nodes, so
// updates and the proportional sampling descent are O(log n)).
class CoverSampleTree {
public:
    explicit CoverSampleTree(const std::vector<double>& weights)
        : nseg_(static_cast<int>(weights.size())),
          size_(static_cast<int>(std::bit_ceil(std::max<std::size_t>(weights.size(), 1)))) {
        full_.assign(2 * size_, 0.0);
        covered_.assign(2 * size_, 0.0);
        cnt_.assign(2 * size_, 0);
        for (int j = 0; j < nseg_; ++j) full_[size_ + j] = weights[j];
        for (int n = size_ - 1; n >= 1; --n) full_[n] = full_[2 * n] + full_[2 * n + 1];
    }

    int segments() const { return nseg_; }
    double covered_total() const { return covered_[1]; }
    double full_total() const { return full_[1]; }

    /// Adds `delta` to the cover count of segments [l, r] (inclusive).
    void add(int l, int r, int delta) {
        if (l > r) return;
        add_rec(1, 0, size_ - 1, l, r, delta);
    }

    /// Segment index drawn proportionally to covered weight; `frac` gets
    /// the residual position inside the segment, uniform in [0, 1).
    int sample_segment(double u, double& frac) const {
        double target = u * covered_[1];
        int node = 1;
        bool forced = false;
        while (node < size_) {
            forced = forced || cnt_[node] > 0;
            const int left = 2 * node, right = 2 * node + 1;
            const double lmass = forced ? full_[left] : covered_[left];
            const double rmass = forced ? full_[right] : covered_[right];
            if (rmass <= 0.0 || (target < lmass && lmass > 0.0)) {
                node = left;
            } else {
                target -= lmass;
                node = right;
            }
        }
        const int seg = node - size_;
        frac = full_[node] > 0.0 ? target / full_[node] : 0.0;
        if (frac < 0.0) frac = 0.0;
        if (frac >= 1.0) frac = std::nextafter(1.0, 0.0);
        return seg;
    }

    int cover_count_brute(int seg) const {  // test hook: count along the root path
        int node = size_ + seg, c = 0;
        while (node >= 1) {
            c += cnt_[node];
            node /= 2;
        }
        return c;
    }

private:
    void add_rec(int node, int nl, int nr, int l, int r, int delta) {
        if (r < nl || nr < l) return;
        if (l <= nl && nr <= r) {
            cnt_[node] += delta;
        } else {
            const int mid = nl + (nr - nl) / 2;
            add_rec(2 * node, nl, mid, l, r, delta);
            add_rec(2 * node + 1, mid + 1, nr, l, r, delta);
        }
        if (cnt_[node] > 0)
            covered_[node] = full_[node];
        else
            covered_[node] = node < size_ ? covered_[2 * node] + covered_[2 * node + 1] : 0.0;
    }

    int nseg_;
    int size_;
    std::vector<double> full_;
    std::vector<double> covered_;
    std::vector<int> cnt_;
};

// Canonical storage of leaf ranges for stabbing queries: each range is
// recorded at its O(log n) canonical nodes, and a stab walks one
// root-to-leaf path collecting everything stored on it.
class StabIndex {
public:
    explicit StabIndex(int nseg)
        : nseg_(nseg),
          size_(static_cast<int>(std::bit_ceil(std::max(static_cast<unsigned>(nseg), 1u)))) {
        items_.resize(2 * size_);
    }

    void insert(int leaf, int l, int r) {
        if (l > r) return;
        if (leaf >= static_cast<int>(reg_.size())) reg_.resize(leaf + 1);
        insert_rec(1, 0, size_ - 1, l, r, leaf);
    }

    void remove(int leaf) {
        if (leaf >= static_cast<int>(reg_.size())) return;
        for (std::size_t h = 0; h < reg_[leaf].size(); ++h) {
            const auto [node, pos] = reg_[leaf][h];
            std::vector<Item>& vec = items_[node];
            if (pos != static_cast<int>(vec.size()) - 1) {
                vec[pos] = vec.back();
                reg_[vec[pos].leaf][vec[pos].slot].second = pos;
            }
            vec.pop_back();
        }
        reg_[leaf].clear();
    }

    void stab(int seg, std::vector<int>& out) const {
        if (seg < 0 || seg >= nseg_) return;
        int node = 1;
        while (true) {
            for (const Item& item : items_[node]) out.push_back(item.leaf);
            if (node >= size_) break;
            const int bit = std::bit_width(static_cast<unsigned>(size_)) -
                            std::bit_width(static_cast<unsigned>(node)) - 1;
            node = 2 * node + ((seg >> bit) & 1);
        }
    }

private:
    struct Item {
        int leaf;
        int slot;  // index into reg_[leaf]
    };

    void insert_rec(int node, int nl, int nr, int l, int r, int leaf) {
        if (r < nl || nr < l) return;
        if (l <= nl && nr <= r) {
            items_[node].push_back({leaf, static_cast<int>(reg_[leaf].size())});
            reg_[leaf].emplace_back(node, static_cast<int>(items_[node].size()) - 1);
            return;
        }
        const int mid = nl + (nr - nl) / 2;
        insert_rec(2 * node, nl, mid, l, r, leaf);
        insert_rec(2 * node + 1, mid + 1, nr, l, r, leaf);
    }

    int nseg_;
    int size_;
    std::vector<std::vector<Item>> items_;
    std::vector<std::vector<std::pair<int, int>>> reg_;  // per leaf: (node, pos)
};

}  // namespace detail

/// Per-leaf ordered coordinate sets, one per dimension. A split rebuilds
/// the smaller side's sets from scratch and erases its members from the
/// larger side's, which the reused-slot move makes
/// O(d min(|B-|,|B+|) log|B|). Leaf ids are never reused: a split retires
/// the parent id and returns two fresh ids.
class LeafCoordinateIndex {
public:
    explicit LeafCoordinateIndex(const CenterSet& centers)
        : coords_(centers.centers), dim_(centers.dim) {
        LeafRec root;
        root.sets.resize(dim_);
        for (int j = 0; j < static_cast<int>(coords_.size()); ++j)
            for (int i = 0; i < dim_; ++i) root.sets[i].insert({coords_[j][i], j});
        leaves_.push_back(std::move(root));
    }

    struct SplitResult {
        int minus_leaf;
        int plus_leaf;
    };

    int num_slots() const { return static_cast<int>(leaves_.size()); }
    int num_alive() const { return alive_count_; }
    bool alive(int leaf) const { return leaves_[leaf].alive; }
    int size(int leaf) const { return static_cast<int>(leaves_[leaf].sets[0].size()); }

    std::pair<double, double> extent(int leaf, int dim) const {
        const auto& s = leaves_[leaf].sets[dim];
        return {s.begin()->first, s.rbegin()->first};
    }

    std::vector<std::pair<double, double>> extents(int leaf) const {
        std::vector<std::pair<double, double>> out(dim_);
        for (int i = 0; i < dim_; ++i) out[i] = extent(leaf, i);
        return out;
    }

    std::vector<int> members(int leaf) const {
        std::vector<int> out;
        out.reserve(leaves_[leaf].sets[0].size());
        for (const auto& [coord, id] : leaves_[leaf].sets[0]) out.push_back(id);
        return out;
    }

    std::vector<int> alive_ids() const {
        std::vector<int> out;
        for (int l = 0; l < num_slots(); ++l)
            if (leaves_[l].alive) out.push_back(l);
        return out;
    }

    bool is_split_by(int leaf, const ThresholdCut& cut) const {
        const auto [lo, hi] = extent(leaf, cut.dim);
        return lo <= cut.theta && cut.theta < hi;
    }

    /// Count of members with coordinate <= theta in O(log|B|)-ish time
    /// (scans from the cheaper end).
    int count_at_most(int leaf, int dim, double theta) const {
        const auto& s = leaves_[leaf].sets[dim];
        const int n = static_cast<int>(s.size());
        int fwd = 0;
        for (auto it = s.begin(); it != s.end() && it->first <= theta && fwd <= n / 2; ++it) ++fwd;
        if (fwd <= n / 2) return fwd;
        int bwd = 0;
        for (auto it = s.rbegin(); it != s.rend() && it->first > theta; ++it) ++bwd;
        return n - bwd;
    }

    SplitResult split_leaf(int leaf, const ThresholdCut& cut) {
        if (!leaves_[leaf].alive || !is_split_by(leaf, cut))
            throw std::logic_error("split_leaf: cut does not split this leaf");
        auto& dimset = leaves_[leaf].sets[cut.dim];
        const int n = static_cast<int>(dimset.size());

        // find the smaller side by scanning inward from both ends
        std::vector<int> small_ids;
        bool minus_is_small = true;
        {
            int fwd = 0;
            auto it = dimset.begin();
            while (it != dimset.end() && it->first <= cut.theta && fwd <= n / 2) {
                ++fwd;
                ++it;
            }
            if (fwd <= n / 2) {
                small_ids.reserve(fwd);
                auto jt = dimset.begin();
                for (int c = 0; c < fwd; ++c, ++jt) small_ids.push_back(jt->second);
            } else {
                minus_is_small = false;
                for (auto rt = dimset.rbegin(); rt != dimset.rend() && rt->first > cut.theta; ++rt)
                    small_ids.push_back(rt->second);
            }
        }

        LeafRec small;
        small.sets.resize(dim_);
        for (int id : small_ids)
            for (int i = 0; i < dim_; ++i) small.sets[i].insert({coords_[id][i], id});
        for (int id : small_ids)
            for (int i = 0; i < dim_; ++i) leaves_[leaf].sets[i].erase({coords_[id][i], id});

        LeafRec large = std::move(leaves_[leaf]);
        large.alive = true;
        leaves_[leaf].alive = false;
        leaves_[leaf].sets.clear();

        const int first_id = static_cast<int>(leaves_.size());
        if (minus_is_small) {
            leaves_.push_back(std::move(small));
            leaves_.push_back(std::move(large));
        } else {
            leaves_.push_back(std::move(large));
            leaves_.push_back(std::move(small));
        }
        ++alive_count_;
        return {first_id, first_id + 1};
    }

    void check_consistent(int leaf) const {  // test hook
        const auto& rec = leaves_[leaf];
        for (int i = 1; i < dim_; ++i)
            if (rec.sets[i].size() != rec.sets[0].size())
                throw std::logic_error("LeafCoordinateIndex: set sizes diverged");
    }

private:
    struct LeafRec {
        std::vector<std::set<std::pair<double, int>>> sets;
        bool alive = true;
    };

    std::vector<LeafRec> leaves_;
    std::vector<Point> coords_;
    int dim_;
    int alive_count_ = 1;
};

/// Per-dimension interval structure over the current leaves' coordinate
/// ranges, augmented with the (weighted) measure of their union. With
/// exponent 1 the union weight is the plain union length used by the
/// conditioned uniform sampler; with exponent p it carries the |b-a|^p
/// weights of the D_p law. A cut sampled from it always splits at least
/// one leaf, because segments outside every leaf extent carry no covered
/// weight.
class DimensionIntervalIndex {
public:
    DimensionIntervalIndex(const CenterSet& centers, double exponent = 1.0)
        : p_(exponent), dim_(centers.dim) {
        coords_.resize(dim_);
        std::vector<double> proj;
        for (int i = 0; i < dim_; ++i) {
            proj.resize(centers.k());
            for (int j = 0; j < centers.k(); ++j) proj[j] = centers[j][i];
            std::sort(proj.begin(), proj.end());
            proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
            coords_[i] = proj;
            std::vector<double> weights(proj.size() > 1 ? proj.size() - 1 : 0);
            for (std::size_t j = 0; j + 1 < proj.size(); ++j)
                weights[j] = detail::pow_abs(proj[j + 1] - proj[j], p_);
            cover_.emplace_back(weights);
            stab_.emplace_back(static_cast<int>(weights.size()));
        }
    }

    double exponent() const { return p_; }
    int dims() const { return dim_; }
    const std::vector<double>& coords(int dim) const { return coords_[dim]; }

    void insert_leaf(int leaf, const std::vector<std::pair<double, double>>& ext) {
        if (leaf >= static_cast<int>(ranges_.size())) ranges_.resize(leaf + 1);
        ranges_[leaf].assign(dim_, {-1, -1});
        for (int i = 0; i < dim_; ++i) {
            const auto& [lo, hi] = ext[i];
            if (!(lo < hi)) continue;
            const int l = rank(i, lo), r = rank(i, hi) - 1;
            cover_[i].add(l, r, +1);
            stab_[i].insert(leaf, l, r);
            ranges_[leaf][i] = {l, r};
        }
    }

    void remove_leaf(int leaf) {
        for (int i = 0; i < dim_; ++i) {
            const auto [l, r] = ranges_[leaf][i];
            if (l >= 0) cover_[i].add(l, r, -1);
            stab_[i].remove(leaf);
        }
        ranges_[leaf].assign(dim_, {-1, -1});
    }

    /// Leaves whose extent in cut.dim properly contains theta.
    std::vector<int> stab_split_leaves(const ThresholdCut& cut) const {
        std::vector<int> out;
        stab_[cut.dim].stab(segment_of(cut.dim, cut.theta), out);
        return out;
    }

    std::vector<int> stab_segment(int dim, int segment) const {
        std::vector<int> out;
        stab_[dim].stab(segment, out);
        return out;
    }

    double union_weight(int dim) const { return cover_[dim].covered_total(); }

    double total_union_weight() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += cover_[i].covered_total();
        return t;
    }

    struct SampledCut {
        ThresholdCut cut;
        int segment;
    };

    /// Cut conditioned on splitting at least one current leaf: dimension
    /// proportional to covered weight, segment proportional to its weight
    /// within the dimension, theta uniform (exponent 1) or via the
    /// inverse CDF (exponent p) inside the segment.
    SampledCut sample(RngStream& rng) const {
        const double total = total_union_weight();
        if (!(total > 0.0))
            throw std::runtime_error("DimensionIntervalIndex: no splittable leaf");
        double target = rng.next_double() * total;
        int dim = -1;
        for (int i = 0; i < dim_; ++i) {
            const double w = cover_[i].covered_total();
            if (w <= 0.0) continue;
            dim = i;
            if (target < w) break;
            target -= w;
        }
        double frac;
        const int seg = cover_[dim].sample_segment(rng.next_double(), frac);
        const double a = coords_[dim][seg], b = coords_[dim][seg + 1];
        double theta = p_ == 1.0 ? a + frac * (b - a) : theta_inverse_cdf(a, b, p_, frac);
        if (!(theta < b)) theta = std::nextafter(b, a);  // keep theta inside [a, b)
        if (theta < a) theta = a;
        return {{dim, theta}, seg};
    }

    int segment_of(int dim, double theta) const {
        const std::vector<double>& c = coords_[dim];
        if (c.size() < 2 || theta < c.front() || theta >= c.back()) return -1;
        const auto it = std::upper_bound(c.begin(), c.end(), theta);
        return static_cast<int>(it - c.begin()) - 1;
    }

private:
    int rank(int dim, double value) const {
        const std::vector<double>& c = coords_[dim];
        return static_cast<int>(std::lower_bound(c.begin(), c.end(), value) - c.begin());
    }

    double p_;
    int dim_;
    std::vector<std::vector<double>> coords_;
    std::vector<detail::CoverSampleTree> cover_;
    std::vector<detail::StabIndex> stab_;
    std::vector<std::vector<std::pair<int, int>>> ranges_;  // per leaf per dim
};

inline std::vector<int> stab_split_leaves(const DimensionIntervalIndex& index,
                                          const ThresholdCut& cut) {
    return index.stab_split_leaves(cut);
}

inline ThresholdCut sample_conditioned_uniform(const DimensionIntervalIndex& index,
                                               RngStream& rng) {
    if (index.exponent() != 1.0)
        throw std::invalid_argument("sample_conditioned_uniform: index must use exponent 1");
    return index.sample(rng).cut;
}

/// Per-dimension segment trees over the k-1 ordered intervals delimited by
/// the center projections, with |b-a|^p weights and live/removed flags.
/// Supports removal, live range sums, and sampling an interval with
/// probability weight/total followed by the inverse-CDF theta draw.
class WeightedIntervalSegTree {
public:
    explicit WeightedIntervalSegTree(DimensionIntervalSet set) : set_(std::move(set)) {
        const int d = static_cast<int>(set_.dim_offsets.size()) - 1;
        trees_.reserve(d);
        live_.resize(d);
        for (int i = 0; i < d; ++i) {
            const int n = set_.count(i);
            Tree t;
            t.n = n;
            t.size = static_cast<int>(std::bit_ceil(std::max(static_cast<unsigned>(n), 1u)));
            t.sum.assign(2 * t.size, 0.0);
            for (int j = 0; j < n; ++j) t.sum[t.size + j] = set_.at(i, j).weight;
            for (int node = t.size - 1; node >= 1; --node)
                t.sum[node] = t.sum[2 * node] + t.sum[2 * node + 1];
            trees_.push_back(std::move(t));
            live_[i].assign(n, 1);
        }
    }

    double p() const { return set_.p; }
    int dims() const { return static_cast<int>(trees_.size()); }
    int intervals(int dim) const { return trees_[dim].n; }
    bool live(int dim, int index) const { return live_[dim][index] != 0; }
    const DimensionIntervalSet::Entry& entry(int dim, int index) const {
        return set_.at(dim, index);
    }

    void remove(int dim, int index) {
        if (!live_[dim][index]) throw std::logic_error("WeightedIntervalSegTree: already removed");
        live_[dim][index] = 0;
        Tree& t = trees_[dim];
        int node = t.size + index;
        t.sum[node] = 0.0;
        for (node /= 2; node >= 1; node /= 2) t.sum[node] = t.sum[2 * node] + t.sum[2 * node + 1];
    }

    /// Sum of live weights over interval indices [l, r] (inclusive).
    double range_weight(int dim, int l, int r) const {
        const Tree& t = trees_[dim];
        if (l < 0 || r >= t.n || l > r)
            throw std::invalid_argument("WeightedIntervalSegTree: bad range");
        return range_rec(t, 1, 0, t.size - 1, l, r);
    }

    double dim_weight(int dim) const { return trees_[dim].sum[1]; }

    double total_weight() const {
        double s = 0.0;
        for (const Tree& t : trees_) s += t.sum[1];
        return s;
    }

    std::pair<int, int> sample_interval(RngStream& rng) const {
        const double total = total_weight();
        if (!(total > 0.0)) throw std::runtime_error("WeightedIntervalSegTree: zero live weight");
        double target = rng.next_double() * total;
        int dim = -1;
        for (int i = 0; i < dims(); ++i) {
            const double w = trees_[i].sum[1];
            if (w <= 0.0) continue;
            dim = i;
            if (target < w) break;
            target -= w;
        }
        const Tree& t = trees_[dim];
        int node = 1;
        while (node < t.size) {
            const int left = 2 * node;
            if (t.sum[left + 1] <= 0.0 || (target < t.sum[left] && t.sum[left] > 0.0)) {
                node = left;
            } else {
                target -= t.sum[left];
                node = left + 1;
            }
        }
        return {dim, node - t.size};
    }

    ThresholdCut sample(RngStream& rng) const {
        const auto [dim, index] = sample_interval(rng);
        const auto& e = entry(dim, index);
        return {dim, theta_inverse_cdf(e.a, e.b, set_.p, rng.next_double())};
    }

private:
    struct Tree {
        int n = 0;
        int size = 1;
        std::vector<double> sum;
    };

    static double range_rec(const Tree& t, int node, int nl, int nr, int l, int r) {
        if (r < nl || nr < l) return 0.0;
        if (l <= nl && nr <= r) return t.sum[node];
        const int mid = nl + (nr - nl) / 2;
        return range_rec(t, 2 * node, nl, mid, l, r) + range_rec(t, 2 * node + 1, mid + 1, nr, l, r);
    }

    DimensionIntervalSet set_;
    std::vector<Tree> trees_;
    std::vector<std::vector<char>> live_;
};

inline ThresholdCut sample_dp_fast(const WeightedIntervalSegTree& segtrees, RngStream& rng) {
    return segtrees.sample(rng);
}

enum class FastVariant { uniform, modified, lp };

/// Fast builder: same output distribution as the corresponding reference
/// builder, but every sampled cut splits at least one leaf and all index
/// maintenance is polylogarithmic per split. The uniform variant skips
/// diameter bookkeeping entirely (its trace carries NaN for c_max).
inline BuildResult build_fast(const CenterSet& centers, double p, RngStream& rng,
                              FastVariant variant, int ell = 4) {
    if (variant == FastVariant::lp && p < 1.0)
        throw std::invalid_argument("build_fast: p must be >= 1");
    if (ell < 4) throw std::invalid_argument("build_fast: ell must be >= 4");

    const int k = centers.k();
    detail::TreeAssembler assembler(centers.dim);
    BuildResult result;
    if (k == 1) {
        assembler.set_leaf_center(assembler.root(), 0);
        result.tree = assembler.finish();
        return result;
    }

    const double weight_p = variant == FastVariant::lp ? p : 1.0;
    const PairMetric metric =
        variant == FastVariant::lp ? PairMetric::pseudo_p : PairMetric::l1;
    const double k_pow_ell = std::pow(static_cast<double>(k), static_cast<double>(ell));
    const bool track_diameters = variant != FastVariant::uniform;

    LeafCoordinateIndex index(centers);
    DimensionIntervalIndex intervals(centers, weight_p);
    intervals.insert_leaf(0, index.extents(0));

    std::vector<int> node_of{assembler.root()};
    std::vector<double> diam{0.0};
    std::priority_queue<std::pair<double, int>> heap;
    if (track_diameters) {
        diam[0] = detail::leaf_diameter(centers, index.members(0), metric, p);
        heap.emplace(diam[0], 0);
        result.trace.initial_c_max = diam[0];
    } else {
        result.trace.initial_c_max = std::numeric_limits<double>::quiet_NaN();
    }

    auto current_c_max = [&]() -> double {
        while (!heap.empty()) {
            const auto [d, leaf] = heap.top();
            if (index.alive(leaf) && diam[leaf] == d) return d;
            heap.pop();
        }
        return 0.0;
    };

    std::uint64_t consecutive_rejects = 0;
    std::vector<int> lo_side, hi_side;
    while (index.num_alive() < k) {
        const DimensionIntervalIndex::SampledCut sc = intervals.sample(rng);
        ++result.trace.total_draws;
        std::vector<int> stabbed = intervals.stab_segment(sc.cut.dim, sc.segment);
        assert(!stabbed.empty());

        double c_max = std::numeric_limits<double>::quiet_NaN();
        if (track_diameters) {
            c_max = current_c_max();
            double closest = std::numeric_limits<double>::infinity();
            for (int leaf : stabbed) {
                lo_side.clear();
                hi_side.clear();
                for (int j : index.members(leaf)) {
                    if (centers[j][sc.cut.dim] <= sc.cut.theta)
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
                if (++consecutive_rejects > detail::REJECTION_GUARD)
                    throw std::runtime_error("build_fast: discard loop exceeded guard");
                continue;
            }
        }

        consecutive_rejects = 0;
        result.trace.steps.push_back(
            {result.trace.total_draws, sc.cut, static_cast<int>(stabbed.size()), c_max});

        for (int leaf : stabbed) {
            intervals.remove_leaf(leaf);
            const auto [minus_leaf, plus_leaf] = index.split_leaf(leaf, sc.cut);
            const auto [lnode, rnode] = assembler.split(node_of[leaf], sc.cut);
            node_of.resize(index.num_slots(), -1);
            diam.resize(index.num_slots(), 0.0);
            node_of[minus_leaf] = lnode;
            node_of[plus_leaf] = rnode;
            for (int child : {minus_leaf, plus_leaf}) {
                intervals.insert_leaf(child, index.extents(child));
                if (track_diameters && index.size(child) > 1) {
                    diam[child] =
                        detail::leaf_diameter(centers, index.members(child), metric, p);
                    heap.emplace(diam[child], child);
                }
            }
            ++result.trace.splits_total;
        }
    }

    for (int leaf : index.alive_ids())
        assembler.set_leaf_center(node_of[leaf], index.members(leaf)[0]);
    result.tree = assembler.finish();
    return result;
}

}  // namespace xcluster
