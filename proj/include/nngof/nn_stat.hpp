#pragma once

#include <cstdint>
#include <vector>

#include "nngof/sample.hpp"

namespace nngof {

enum class NnMethod {
    kBruteForce,  // exact O(N^2 m) scan
    kKdTree,      // exact tree search; always agrees with brute force
    kAuto,        // brute force up to 1000 points, tree above
};

// Index of the 1-nearest neighbour of every point (self excluded) under
// squared Euclidean distance. Ties break to the smallest index; both methods
// return identical arrays on identical input.
std::vector<Index> nearest_neighbor_indices(const Matrix& points,
                                            NnMethod method = NnMethod::kAuto);

// Two labelled samples pooled into one point cloud. Label 0 tags the data
// rows, label 1 the reference rows. Exact duplicate points are perturbed
// deterministically (and counted) so the NN graph is well defined.
struct PooledCloud {
    Matrix points;
    std::vector<std::uint8_t> labels;
    Index n_data = 0;
    Index n_reference = 0;
    Index perturbed_duplicates = 0;

    static PooledCloud pool(const Sample& data, const Sample& reference);
};

// Number of points with the target label whose nearest neighbour carries the
// same label.
Index within_count(const PooledCloud& cloud, std::uint8_t target_label,
                   NnMethod method = NnMethod::kAuto);

struct NnStatResult {
    Index t_count = 0;   // reference points whose NN is a reference point
    Index n = 0;         // reference sample size
    double z_score = 0;  // (t_count - n/2) / sqrt(n/4)
};

// Pooled-sample cross-edge statistic: pools z (data) with y (reference) and
// counts reference points whose nearest neighbour is also a reference point.
NnStatResult cross_edge_statistic(const Sample& z, const Sample& y,
                                  NnMethod method = NnMethod::kAuto);

NnStatResult nn_result_from_count(Index t_count, Index n);

}  // namespace nngof
