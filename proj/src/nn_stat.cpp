#include "nngof/nn_stat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "nngof/errors.hpp"

namespace nngof {

namespace {

// Shared distance kernel. Both search methods funnel every candidate pair
// through this exact expression so their results are bit-identical.
inline double sq_dist(const double* a, const double* b, Index m) {
    double s = 0.0;
    for (Index k = 0; k < m; ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

// Row-major copy; the query loops touch one contiguous row at a time.
struct PointsView {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows;
    explicit PointsView(const Matrix& pts) : rows(pts) {}
    const double* row(Index i) const { return rows.data() + i * rows.cols(); }
    Index size() const { return rows.rows(); }
    Index dim() const { return rows.cols(); }
};

std::vector<Index> brute_force_nn(const PointsView& pts) {
    const Index n = pts.size();
    const Index m = pts.dim();
    std::vector<Index> out(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        Index best_idx = -1;
        const double* pi = pts.row(i);
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = sq_dist(pi, pts.row(j), m);
            if (d < best) {  // strict: equal distance keeps the smaller index
                best = d;
                best_idx = j;
            }
        }
        out[static_cast<std::size_t>(i)] = best_idx;
    }
    return out;
}

class KdTree {
  public:
    explicit KdTree(const PointsView& pts) : pts_(pts) {
        order_.resize(static_cast<std::size_t>(pts.size()));
        std::iota(order_.begin(), order_.end(), Index{0});
        nodes_.reserve(order_.size() / kLeafSize * 2 + 2);
        root_ = build(0, pts.size());
    }

    Index query(Index self) const {
        double best = std::numeric_limits<double>::infinity();
        Index best_idx = -1;
        search(root_, pts_.row(self), self, best, best_idx);
        return best_idx;
    }

  private:
    static constexpr Index kLeafSize = 16;

    struct Node {
        Index begin = 0, end = 0;      // leaf: range in order_
        int axis = -1;                 // -1 marks a leaf
        double split = 0.0;
        Index left = -1, right = -1;
        std::vector<double> lo, hi;    // bounding box
    };

    Index build(Index begin, Index end) {
        Node node;
        node.begin = begin;
        node.end = end;
        const Index m = pts_.dim();
        node.lo.assign(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
        node.hi.assign(static_cast<std::size_t>(m), -std::numeric_limits<double>::infinity());
        for (Index t = begin; t < end; ++t) {
            const double* p = pts_.row(order_[static_cast<std::size_t>(t)]);
            for (Index k = 0; k < m; ++k) {
                node.lo[static_cast<std::size_t>(k)] = std::min(node.lo[static_cast<std::size_t>(k)], p[k]);
                node.hi[static_cast<std::size_t>(k)] = std::max(node.hi[static_cast<std::size_t>(k)], p[k]);
            }
        }
        if (end - begin <= kLeafSize) {
            nodes_.push_back(std::move(node));
            return static_cast<Index>(nodes_.size()) - 1;
        }
        // Split the widest axis at the median point.
        int axis = 0;
        double width = -1.0;
        for (Index k = 0; k < m; ++k) {
            const double w = node.hi[static_cast<std::size_t>(k)] - node.lo[static_cast<std::size_t>(k)];
            if (w > width) {
                width = w;
                axis = static_cast<int>(k);
            }
        }
        if (width <= 0.0) {  // all points identical: keep as leaf
            nodes_.push_back(std::move(node));
            return static_cast<Index>(nodes_.size()) - 1;
        }
        const Index mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](Index a, Index b) {
                             const double pa = pts_.row(a)[axis];
                             const double pb = pts_.row(b)[axis];
                             return pa < pb || (pa == pb && a < b);
                         });
        node.axis = axis;
        node.split = pts_.row(order_[static_cast<std::size_t>(mid)])[axis];
        const Index self = static_cast<Index>(nodes_.size());
        nodes_.push_back(node);
        const Index left = build(begin, mid);
        const Index right = build(mid, end);
        nodes_[static_cast<std::size_t>(self)].left = left;
        nodes_[static_cast<std::size_t>(self)].right = right;
        return self;
    }

    // Lower bound on the squared distance from q to the node box, accumulated
    // with the same kernel ordering as sq_dist so it never exceeds the true
    // distance to any contained point.
    double box_bound(const Node& node, const double* q) const {
        double s = 0.0;
        for (Index k = 0; k < pts_.dim(); ++k) {
            double d = 0.0;
            if (q[k] < node.lo[static_cast<std::size_t>(k)])
                d = node.lo[static_cast<std::size_t>(k)] - q[k];
            else if (q[k] > node.hi[static_cast<std::size_t>(k)])
                d = q[k] - node.hi[static_cast<std::size_t>(k)];
            s += d * d;
        }
        return s;
    }

    void search(Index node_idx, const double* q, Index self, double& best, Index& best_idx) const {
        const Node& node = nodes_[static_cast<std::size_t>(node_idx)];
        if (box_bound(node, q) > best) return;  // strict: keep exact ties reachable
        if (node.axis < 0) {
            for (Index t = node.begin; t < node.end; ++t) {
                const Index j = order_[static_cast<std::size_t>(t)];
                if (j == self) continue;
                const double d = sq_dist(q, pts_.row(j), pts_.dim());
                if (d < best || (d == best && j < best_idx)) {
                    best = d;
                    best_idx = j;
                }
            }
            return;
        }
        // Descend the nearer side first for tighter pruning.
        const bool left_first = q[node.axis] <= node.split;
        search(left_first ? node.left : node.right, q, self, best, best_idx);
        search(left_first ? node.right : node.left, q, self, best, best_idx);
    }

    const PointsView& pts_;
    std::vector<Index> order_;
    std::vector<Node> nodes_;
    Index root_ = -1;
};

std::vector<Index> kd_tree_nn(const PointsView& pts) {
    const KdTree tree(pts);
    std::vector<Index> out(static_cast<std::size_t>(pts.size()));
    for (Index i = 0; i < pts.size(); ++i) out[static_cast<std::size_t>(i)] = tree.query(i);
    return out;
}

}  // namespace

std::vector<Index> nearest_neighbor_indices(const Matrix& points, NnMethod method) {
    if (points.rows() < 2)
        throw DimensionError("nearest_neighbor_indices: need at least two points");
    const PointsView pts(points);
    if (method == NnMethod::kAuto)
        method = points.rows() <= 1000 ? NnMethod::kBruteForce : NnMethod::kKdTree;
    return method == NnMethod::kBruteForce ? brute_force_nn(pts) : kd_tree_nn(pts);
}

PooledCloud PooledCloud::pool(const Sample& data, const Sample& reference) {
    if (data.m() != reference.m()) throw DimensionError("PooledCloud: dimension mismatch");
    PooledCloud cloud;
    cloud.n_data = data.n();
    cloud.n_reference = reference.n();
    const Index total = cloud.n_data + cloud.n_reference;
    cloud.points.resize(total, data.m());
    cloud.points.topRows(cloud.n_data) = data.data;
    cloud.points.bottomRows(cloud.n_reference) = reference.data;
    cloud.labels.assign(static_cast<std::size_t>(total), 0);
    std::fill(cloud.labels.begin() + cloud.n_data, cloud.labels.end(), std::uint8_t{1});

    // Exact duplicates would make the NN graph degenerate; nudge the k-th
    // repeat of a point by a deterministic offset scaled to the cloud.
    const double scale = std::max(1.0, cloud.points.cwiseAbs().maxCoeff());
    const double eps = 1e-9 * scale;
    std::unordered_map<std::string, Index> seen;
    std::string key;
    for (Index i = 0; i < total; ++i) {
        // Byte key built row-wise (rows of a column-major matrix are strided).
        key.clear();
        for (Index k = 0; k < cloud.points.cols(); ++k) {
            const double v = cloud.points(i, k);
            key.append(reinterpret_cast<const char*>(&v), sizeof(double));
        }
        auto [it, inserted] = seen.emplace(key, 0);
        if (!inserted) {
            it->second += 1;
            cloud.points(i, 0) += eps * static_cast<double>(it->second);
            ++cloud.perturbed_duplicates;
        }
    }
    return cloud;
}

Index within_count(const PooledCloud& cloud, std::uint8_t target_label, NnMethod method) {
    const std::vector<Index> nn = nearest_neighbor_indices(cloud.points, method);
    Index count = 0;
    for (Index i = 0; i < cloud.points.rows(); ++i) {
        if (cloud.labels[static_cast<std::size_t>(i)] != target_label) continue;
        if (cloud.labels[static_cast<std::size_t>(nn[static_cast<std::size_t>(i)])] == target_label)
            ++count;
    }
    return count;
}

NnStatResult nn_result_from_count(Index t_count, Index n) {
    if (n < 1) throw DimensionError("nn_result_from_count: empty reference sample");
    if (t_count < 0 || t_count > n)
        throw std::invalid_argument("nn_result_from_count: count outside [0, n]");
    const double nd = static_cast<double>(n);
    return NnStatResult{t_count, n,
                        (static_cast<double>(t_count) - nd / 2.0) / std::sqrt(nd / 4.0)};
}

NnStatResult cross_edge_statistic(const Sample& z, const Sample& y, NnMethod method) {
    const PooledCloud cloud = PooledCloud::pool(z, y);
    return nn_result_from_count(within_count(cloud, 1, method), cloud.n_reference);
}

}  // namespace nngof
