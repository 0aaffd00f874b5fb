#pragma once

// Independent oracles used by the test suites. Everything here recomputes
// quantities from first principles (exhaustive scans, quadrature, closed
// forms) without touching the implementation paths under test.

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nngof/nn_stat.hpp"
#include "nngof/rng.hpp"
#include "nngof/sample.hpp"

namespace oracle {

// Exhaustive O(N^2) nearest-neighbour recount of the within-label statistic:
// plain double loop, strict-< with ascending scan for smallest-index ties.
inline nngof::Index exhaustive_within_count(const nngof::Matrix& points,
                                            const std::vector<std::uint8_t>& labels,
                                            std::uint8_t target) {
    const nngof::Index n = points.rows();
    nngof::Index count = 0;
    for (nngof::Index i = 0; i < n; ++i) {
        if (labels[static_cast<std::size_t>(i)] != target) continue;
        double best = std::numeric_limits<double>::infinity();
        nngof::Index best_j = -1;
        for (nngof::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = 0.0;
            for (nngof::Index k = 0; k < points.cols(); ++k) {
                const double diff = points(i, k) - points(j, k);
                d += diff * diff;
            }
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        if (labels[static_cast<std::size_t>(best_j)] == target) ++count;
    }
    return count;
}

// Closed-form multivariate Gaussian log density via an explicit LU solve,
// independent of the spectral code path.
inline double gaussian_log_density(const nngof::Vector& mu, const nngof::Matrix& sigma,
                                   const nngof::Vector& x) {
    const nngof::Index m = mu.size();
    const nngof::Matrix inv = sigma.inverse();
    const double det = sigma.determinant();
    const nngof::Vector c = x - mu;
    const double q = c.dot(inv * c);
    return -0.5 * (static_cast<double>(m) * std::log(2.0 * M_PI) + std::log(det) + q);
}

// Two-sample Kolmogorov-Smirnov distance.
inline double two_sample_ks(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

// Simpson quadrature of f over [a, b].
template <typename F>
double simpson(F f, double a, double b, int intervals) {
    if (intervals % 2 == 1) ++intervals;
    const double h = (b - a) / intervals;
    double sum = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Sample mean / variance / excess-free kurtosis helpers.
inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double variance_of(const std::vector<double>& v) {
    const double mu = mean_of(v);
    double s = 0.0;
    for (const double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size() - 1);
}

inline double kurtosis_of(const std::vector<double>& v) {
    const double mu = mean_of(v);
    double m2 = 0.0, m4 = 0.0;
    for (const double x : v) {
        const double d = x - mu;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(v.size());
    m4 /= static_cast<double>(v.size());
    return m4 / (m2 * m2);
}

// Deterministic random SPD matrix: B B^T + ridge I.
inline nngof::Matrix random_spd(nngof::Index m, double ridge, nngof::RngStream& rng) {
    nngof::Matrix b(m, m);
    for (nngof::Index i = 0; i < m; ++i)
        for (nngof::Index j = 0; j < m; ++j) b(i, j) = nngof::standard_normal(rng);
    return b * b.transpose() / static_cast<double>(m) + ridge * nngof::Matrix::Identity(m, m);
}

// Random orthogonal matrix via QR of a Gaussian matrix.
inline nngof::Matrix random_orthogonal(nngof::Index m, nngof::RngStream& rng) {
    nngof::Matrix g(m, m);
    for (nngof::Index i = 0; i < m; ++i)
        for (nngof::Index j = 0; j < m; ++j) g(i, j) = nngof::standard_normal(rng);
    Eigen::HouseholderQR<nngof::Matrix> qr(g);
    nngof::Matrix q = qr.householderQ();
    return q;
}

}  // namespace oracle
