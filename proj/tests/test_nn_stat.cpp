#include <doctest.h>

#include <cmath>

#include "helpers/test_oracles.hpp"
#include "nngof/errors.hpp"
#include "nngof/estimation.hpp"
#include "nngof/mggd.hpp"
#include "nngof/nn_stat.hpp"

using namespace nngof;

TEST_CASE("nn indices: points on a line") {
    Matrix pts(3, 1);
    pts << 0.0, 1.0, 3.0;
    const auto nn = nearest_neighbor_indices(pts, NnMethod::kBruteForce);
    CHECK(nn[0] == 1);
    CHECK(nn[1] == 0);
    CHECK(nn[2] == 1);
}

TEST_CASE("nn indices: exact ties break to the smallest index") {
    // Right-angle layout: point 0 ties between 1 and 2 at distance 1.
    Matrix pts(3, 2);
    pts << 0, 0, 1, 0, 0, 1;
    for (const NnMethod method : {NnMethod::kBruteForce, NnMethod::kKdTree}) {
        const auto nn = nearest_neighbor_indices(pts, method);
        CHECK(nn[0] == 1);
        CHECK(nn[1] == 0);
        CHECK(nn[2] == 0);
    }

    // Unit square: every corner ties between its two neighbours.
    Matrix square(4, 2);
    square << 0, 0, 1, 0, 0, 1, 1, 1;
    for (const NnMethod method : {NnMethod::kBruteForce, NnMethod::kKdTree}) {
        const auto nn = nearest_neighbor_indices(square, method);
        CHECK(nn[0] == 1);  // ties with 2
        CHECK(nn[1] == 0);  // ties with 3
        CHECK(nn[2] == 0);  // ties with 3
        CHECK(nn[3] == 1);  // ties with 2
    }
}

TEST_CASE("nn indices: kd-tree equals brute force exactly") {
    RngStream rng(41);
    // Continuous clouds at several shapes, plus integer lattices that force
    // exact ties.
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 20 + static_cast<Index>(rng.next_below(180));
        const Index m = 1 + static_cast<Index>(rng.next_below(50));
        Matrix pts(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j) pts(i, j) = standard_normal(rng);
        CHECK(nearest_neighbor_indices(pts, NnMethod::kBruteForce) ==
              nearest_neighbor_indices(pts, NnMethod::kKdTree));
    }
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 30 + static_cast<Index>(rng.next_below(70));
        const Index m = 1 + static_cast<Index>(rng.next_below(4));
        Matrix pts(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j)
                pts(i, j) = static_cast<double>(rng.next_below(4));  // heavy ties
        CHECK(nearest_neighbor_indices(pts, NnMethod::kBruteForce) ==
              nearest_neighbor_indices(pts, NnMethod::kKdTree));
    }
}

TEST_CASE("nn indices: needs two points") {
    Matrix one(1, 3);
    one.setZero();
    CHECK_THROWS_AS(nearest_neighbor_indices(one), DimensionError);
}

TEST_CASE("pooled cloud: labels and duplicate perturbation") {
    Matrix a(2, 2);
    a << 0, 0, 1, 1;
    Matrix b(2, 2);
    b << 0, 0, 2, 2;  // first row duplicates a's first row
    const PooledCloud cloud = PooledCloud::pool(Sample{Matrix(a)}, Sample{Matrix(b)});
    CHECK(cloud.n_data == 2);
    CHECK(cloud.n_reference == 2);
    CHECK(cloud.labels[0] == 0);
    CHECK(cloud.labels[2] == 1);
    CHECK(cloud.perturbed_duplicates == 1);
    // The perturbed copy moved off its twin but stayed close.
    CHECK(cloud.points.row(2) != cloud.points.row(0));
    CHECK((cloud.points.row(2) - cloud.points.row(0)).norm() < 1e-6);
}

TEST_CASE("within count: separation and forced cross edges") {
    RngStream rng(42);
    const Index n = 15, m = 3;
    Matrix a(n, m), b(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
            a(i, j) = standard_normal(rng);
            b(i, j) = standard_normal(rng) + 1000.0;  // far cluster
        }
    const PooledCloud far = PooledCloud::pool(Sample{Matrix(a)}, Sample{Matrix(b)});
    CHECK(within_count(far, 1) == n);
    CHECK(within_count(far, 0) == n);

    Matrix a1(1, 1), b1(1, 1);
    a1 << 0.0;
    b1 << 1.0;
    const PooledCloud pair = PooledCloud::pool(Sample{Matrix(a1)}, Sample{Matrix(b1)});
    CHECK(within_count(pair, 1) == 0);
    CHECK(within_count(pair, 0) == 0);
}

TEST_CASE("within count: exhaustive recount oracle") {
    RngStream rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 10 + static_cast<Index>(rng.next_below(10));
        Matrix a(n, 3), b(n, 3);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < 3; ++j) {
                a(i, j) = standard_normal(rng);
                b(i, j) = standard_normal(rng);
            }
        const PooledCloud cloud = PooledCloud::pool(Sample{Matrix(a)}, Sample{Matrix(b)});
        CHECK(within_count(cloud, 1) ==
              oracle::exhaustive_within_count(cloud.points, cloud.labels, 1));
        CHECK(within_count(cloud, 0) ==
              oracle::exhaustive_within_count(cloud.points, cloud.labels, 0));
    }
}

TEST_CASE("cross edge statistic: separation limit and z-score identity") {
    RngStream rng(44);
    const Index n = 25, m = 4;
    Matrix z(n, m), y(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
            z(i, j) = standard_normal(rng) + 1e6;
            y(i, j) = standard_normal(rng);
        }
    const NnStatResult res = cross_edge_statistic(Sample{Matrix(z)}, Sample{Matrix(y)});
    CHECK(res.t_count == n);
    CHECK(res.z_score == doctest::Approx(std::sqrt(static_cast<double>(n))));
    // Exact z formula.
    const NnStatResult mid = nn_result_from_count(10, 25);
    CHECK(mid.z_score == doctest::Approx((10.0 - 12.5) / std::sqrt(25.0 / 4.0)));
}

TEST_CASE("cross edge statistic: duplicated sample matches the permutation null") {
    RngStream rng(45);
    const Index n = 30, m = 5;
    Matrix y(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) y(i, j) = standard_normal(rng);
    // Pool Y with itself; duplicates get perturbed.
    const PooledCloud cloud = PooledCloud::pool(Sample{Matrix(y)}, Sample{Matrix(y)});
    CHECK(cloud.perturbed_duplicates == n);

    // Permutation oracle: random label reassignments on the same point set.
    const auto nn = nearest_neighbor_indices(cloud.points);
    const int reps = 2000;
    double sum = 0.0;
    std::vector<Index> perm(static_cast<std::size_t>(2 * n));
    for (Index i = 0; i < 2 * n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int r = 0; r < reps; ++r) {
        for (Index i = 2 * n - 1; i > 0; --i)
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i + 1)))]);
        std::vector<std::uint8_t> labels(static_cast<std::size_t>(2 * n), 0);
        for (Index i = 0; i < n; ++i) labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = 1;
        Index t = 0;
        for (Index i = 0; i < 2 * n; ++i)
            if (labels[static_cast<std::size_t>(i)] == 1 &&
                labels[static_cast<std::size_t>(nn[static_cast<std::size_t>(i)])] == 1)
                ++t;
        sum += static_cast<double>(t);
    }
    const double mean_t = sum / reps;
    // Exchangeable labels center the count at n(n-1)/(2n-1) ~ n/2.
    CHECK(std::fabs(mean_t - static_cast<double>(n) / 2.0) < 1.5);
}

TEST_CASE("cross edge statistic: null centering over replicates") {
    RngStream rng(46);
    const Index n = 100, m = 10;
    const int reps = 500;
    double sum = 0.0, sum2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        Matrix z(n, m), y(n, m);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < m; ++j) {
                z(i, j) = standard_normal(rng);
                y(i, j) = standard_normal(rng);
            }
        const NnStatResult res = cross_edge_statistic(Sample{Matrix(z)}, Sample{Matrix(y)});
        sum += static_cast<double>(res.t_count);
        sum2 += static_cast<double>(res.t_count) * static_cast<double>(res.t_count);
    }
    const double mean_t = sum / reps;
    const double var_t = sum2 / reps - mean_t * mean_t;
    const double se = std::sqrt(var_t / reps);
    CHECK(std::fabs(mean_t - 50.0) < 3.0 * se + 0.3);  // exchangeability offset ~0.25
}

TEST_CASE("cross edge statistic: fitted-shape reference stays centered") {
    // Oracle location/shape with fitted beta_hat and the matching scale
    // calibration: estimator noise must not decenter the count. (Skipping the
    // scale step decenters it badly — the reference law's radial scale moves
    // quickly with beta_hat, which is what calibrate_scale compensates.)
    RngStream rng(460);
    const Index n = 100, m = 10;
    const int reps = 300;
    const SpdMatrix eye(Matrix::Identity(m, m));
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        RngStream stream = rng.substream(static_cast<std::uint64_t>(r));
        Sample z = sample_standard_mggd(m, ShapeParam(0.5), n, stream);
        const auto est = estimate_beta(z, Vector::Zero(m), eye);
        const SpdMatrix calibrated = calibrate_scale(eye, z, Vector::Zero(m), est.beta);
        z.data /= std::sqrt(calibrated.matrix()(0, 0));
        const Sample y = sample_standard_mggd(m, est.beta, n, stream);
        sum += cross_edge_statistic(z, y).z_score;
    }
    const double mean_z = sum / reps;
    CHECK(std::fabs(mean_z) < 0.2);
}

TEST_CASE("cross edge statistic: rigid motions leave the NN graph unchanged") {
    RngStream rng(47);
    const Index n = 60, m = 6;
    Matrix pts(2 * n, m);
    for (Index i = 0; i < 2 * n; ++i)
        for (Index j = 0; j < m; ++j) pts(i, j) = standard_normal(rng);

    RngStream qrng(470);
    const Matrix q = oracle::random_orthogonal(m, qrng);
    Vector shift(m);
    for (Index k = 0; k < m; ++k) shift(k) = qrng.next_uniform(-10.0, 10.0);
    const Matrix moved = (pts * q.transpose()).rowwise() + shift.transpose();

    CHECK(nearest_neighbor_indices(pts) == nearest_neighbor_indices(moved));
}

TEST_CASE("cross edge statistic: monotone under separation") {
    RngStream rng(48);
    const Index n = 40, m = 5;
    Matrix z(n, m), y(n, m);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < m; ++j) {
            z(i, j) = standard_normal(rng);
            y(i, j) = standard_normal(rng);
        }
    Index prev = 0;
    for (const double shift : {0.0, 1.0, 2.0, 5.0, 10.0, 100.0}) {
        Matrix ys = y;
        ys.col(0).array() += shift;
        const NnStatResult res = cross_edge_statistic(Sample{Matrix(z)}, Sample{Matrix(ys)});
        CHECK(res.t_count >= prev);
        prev = res.t_count;
    }
    CHECK(prev == n);
}

TEST_CASE("cross edge statistic: dimension mismatch") {
    Matrix z(5, 3), y(5, 2);
    z.setZero();
    y.setZero();
    // Zero matrices carry duplicates; the guard fires before any NN work.
    CHECK_THROWS_AS(cross_edge_statistic(Sample{Matrix(z)}, Sample{Matrix(y)}), DimensionError);
}
