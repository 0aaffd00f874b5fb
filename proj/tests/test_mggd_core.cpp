#include <doctest.h>

#include <cmath>
#include <vector>

#include "helpers/test_oracles.hpp"
#include "nngof/errors.hpp"
#include "nngof/mggd.hpp"
#include "nngof/special_functions.hpp"

using namespace nngof;

namespace {

// KS critical value at level 1e-3: sqrt(-ln(alpha/2)/2).
constexpr double kKsCrit1em3 = 1.9494682;

std::vector<double> radial_transform(const Sample& x, double beta) {
    std::vector<double> w(static_cast<std::size_t>(x.n()));
    for (Index i = 0; i < x.n(); ++i)
        w[static_cast<std::size_t>(i)] = 0.5 * std::pow(x.data.row(i).norm(), 2.0 * beta);
    return w;
}

}  // namespace

TEST_CASE("unit sphere: 1D gives signs with equal frequency") {
    RngStream rng(1);
    int plus = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Vector u = sample_unit_sphere(1, rng);
        CHECK(std::fabs(std::fabs(u(0)) - 1.0) < 1e-15);
        if (u(0) > 0) ++plus;
    }
    CHECK(std::fabs(plus / static_cast<double>(n) - 0.5) < 0.02);
}

TEST_CASE("unit sphere: exact norms and coordinate symmetry") {
    RngStream rng(2);
    for (int i = 0; i < 100; ++i)
        CHECK(std::fabs(sample_unit_sphere(3, rng).norm() - 1.0) <= 1e-12);

    const Index m = 10;
    const int draws = 100000;
    Vector mean = Vector::Zero(m);
    for (int i = 0; i < draws; ++i) mean += sample_unit_sphere(m, rng);
    mean /= static_cast<double>(draws);
    const double band = 3.0 * std::sqrt(1.0 / (static_cast<double>(m) * draws));
    for (Index k = 0; k < m; ++k) CHECK(std::fabs(mean(k)) < band);
}

TEST_CASE("radius: Gaussian case reduces to the 2D radial law") {
    RngStream rng(3);
    const RadialLaw law(2, ShapeParam(1.0));
    std::vector<double> half_r2(20000);
    for (auto& v : half_r2) {
        const double r = sample_radius(law, rng);
        v = 0.5 * r * r;
    }
    // R^2/2 ~ Exponential(1).
    const double ks = ks_statistic(half_r2, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(ks < kKsCrit1em3 / std::sqrt(20000.0));
}

TEST_CASE("radius: Gamma mean identity at m=50, beta=0.5") {
    RngStream rng(4);
    const RadialLaw law(50, ShapeParam(0.5));
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = sample_radius(law, rng);
        sum += 0.5 * std::pow(r, 2.0 * 0.5);
    }
    CHECK(sum / n == doctest::Approx(50.0).epsilon(0.01));
}

TEST_CASE("radius: thin-shell concentration at m=200") {
    RngStream rng(5);
    const RadialLaw law(200, ShapeParam(0.5));
    const int n = 20000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample_radius(law, rng) / std::pow(200.0, 1.0);
    // m^{1/(2 beta)} = 200 at beta = 0.5; the ratio concentrates near 2.
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("radial concentration constant") {
    CHECK(radial_concentration_const(ShapeParam(1.0)) == doctest::Approx(1.0));
    CHECK(radial_concentration_const(ShapeParam(0.5)) == doctest::Approx(2.0));
    CHECK(radial_concentration_const(ShapeParam(2.0)) ==
          doctest::Approx(0.8408964152537145).epsilon(1e-12));
}

TEST_CASE("sampler: Gaussian member passes marginal KS") {
    RngStream rng(6);
    const Index m = 5;
    const MggdParams params(Vector::Zero(m), SpdMatrix(Matrix::Identity(m, m)), ShapeParam(1.0));
    const Sample x = sample_mggd(params, 10000, rng);
    for (Index k = 0; k < m; ++k) {
        std::vector<double> col(x.data.col(k).data(), x.data.col(k).data() + x.n());
        const double ks = ks_statistic(col, normal_cdf);
        CHECK(ks < kKsCrit1em3 / std::sqrt(10000.0));
    }
}

TEST_CASE("sampler: location equivariance") {
    RngStream rng(7);
    const Index m = 4;
    const Vector mu = Vector::Constant(m, 5.0);
    RngStream rng_spd(70);
    const MggdParams params(mu, SpdMatrix(oracle::random_spd(m, 0.3, rng_spd)),
                            ShapeParam(0.8));
    const Index n = 20000;
    const Sample x = sample_mggd(params, n, rng);
    for (Index k = 0; k < m; ++k) {
        const double mean = x.data.col(k).mean();
        const double sd = std::sqrt((x.data.col(k).array() - mean).square().mean());
        CHECK(std::fabs(mean - 5.0) < 4.0 * sd / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("sampler: radial transform follows the exact Gamma law") {
    RngStream rng(8);
    const Index m = 50;
    const double beta = 0.5;
    const MggdParams params(Vector::Zero(m), SpdMatrix(Matrix::Identity(m, m)),
                            ShapeParam(beta));
    const Sample x = sample_mggd(params, 100000, rng);
    const double shape = static_cast<double>(m) / (2.0 * beta);
    const double ks = ks_statistic(radial_transform(x, beta),
                                   [&](double w) { return gamma_cdf(w, shape); });
    CHECK(ks < 0.01);
}

TEST_CASE("sampler: radial law across a reduced (m, beta) grid") {
    RngStream rng(9);
    for (const Index m : {10, 50}) {
        for (const double beta : {0.3, 2.0}) {
            const Sample x = sample_standard_mggd(m, ShapeParam(beta), 30000, rng);
            const double shape = static_cast<double>(m) / (2.0 * beta);
            const double ks = ks_statistic(radial_transform(x, beta),
                                           [&](double w) { return gamma_cdf(w, shape); });
            CHECK_MESSAGE(ks < 0.013, "m=", m, " beta=", beta, " ks=", ks);
        }
    }
}

TEST_CASE("sampler: affine equivariance via Mahalanobis radii") {
    RngStream rng(10);
    const Index m = 8;
    RngStream rng_spd(100);
    const SpdMatrix sigma(oracle::random_spd(m, 0.2, rng_spd));
    Vector mu(m);
    for (Index k = 0; k < m; ++k) mu(k) = rng.next_uniform(-3.0, 3.0);
    const double beta = 0.6;

    const Index n = 20000;
    const Sample x = sample_mggd(MggdParams(mu, sigma, ShapeParam(beta)), n, rng);
    // Map back to standard coordinates and compare radii with a direct
    // standardized sample.
    const Matrix z = (x.data.rowwise() - mu.transpose()) * sigma.inv_sqrt();
    std::vector<double> mapped(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) mapped[static_cast<std::size_t>(i)] = z.row(i).norm();

    const Sample direct = sample_standard_mggd(m, ShapeParam(beta), n, rng);
    std::vector<double> reference(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        reference[static_cast<std::size_t>(i)] = direct.data.row(i).norm();

    const double ks = oracle::two_sample_ks(mapped, reference);
    // Two-sample 0.1% critical value: 1.95 * sqrt(2/n).
    CHECK(ks < 1.95 * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("log density: standard normal value at the mode") {
    const MggdParams params(Vector::Zero(1), SpdMatrix(Matrix::Identity(1, 1)), ShapeParam(1.0));
    CHECK(log_density(params, Vector::Zero(1)) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-12));
}

TEST_CASE("log density: Gaussian member equals the closed form everywhere") {
    RngStream rng(11);
    const Index m = 6;
    RngStream rng_spd(110);
    const Matrix sigma = oracle::random_spd(m, 0.3, rng_spd);
    Vector mu(m);
    for (Index k = 0; k < m; ++k) mu(k) = rng.next_uniform(-2.0, 2.0);
    const MggdParams params(mu, SpdMatrix(sigma), ShapeParam(1.0));
    for (int t = 0; t < 100; ++t) {
        Vector x(m);
        for (Index k = 0; k < m; ++k) x(k) = rng.next_uniform(-6.0, 6.0);
        const double expected = oracle::gaussian_log_density(mu, sigma, x);
        CHECK(std::fabs(log_density(params, x) - expected) < 1e-10);
    }
}

TEST_CASE("log density: quadrature normalization oracle at m=4, beta=0.5") {
    const Index m = 4;
    const MggdParams params(Vector::Zero(m), SpdMatrix(Matrix::Identity(m, m)),
                            ShapeParam(0.5));
    // Spherical symmetry: mass = S_{m-1} * int r^{m-1} f(r e_1) dr with
    // S_3 = 2 pi^2.
    const double surface = 2.0 * M_PI * M_PI;
    const auto integrand = [&](double r) {
        Vector x = Vector::Zero(m);
        x(0) = r;
        return std::pow(r, 3.0) * std::exp(log_density(params, x));
    };
    const double mass = surface * oracle::simpson(integrand, 0.0, 150.0, 200000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mahalanobis moments: chi-square identities") {
    CHECK(mahalanobis_moment(7, ShapeParam(1.0), 1) == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(mahalanobis_moment(10, ShapeParam(1.0), 2) == doctest::Approx(120.0).epsilon(1e-12));
}

TEST_CASE("mahalanobis moments: Monte Carlo oracle at beta=0.5") {
    RngStream rng(12);
    const Index m = 10;
    const double beta = 0.5;
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    const RadialLaw law(m, ShapeParam(beta));
    for (int i = 0; i < n; ++i) {
        const double r = sample_radius(law, rng);
        const double q = r * r;
        sum += q;
        sum2 += q * q;
    }
    const double m1 = mahalanobis_moment(m, ShapeParam(beta), 1);
    const double m2 = mahalanobis_moment(m, ShapeParam(beta), 2);
    CHECK(sum / n == doctest::Approx(m1).epsilon(0.005));
    // Second moment within 3 Monte Carlo standard errors.
    const double m4 = mahalanobis_moment(m, ShapeParam(beta), 4);
    const double se2 = std::sqrt((m4 - m2 * m2) / n);
    CHECK(std::fabs(sum2 / n - m2) < 3.0 * se2);
}

TEST_CASE("multivariate t: large nu approaches the Gaussian") {
    RngStream rng(13);
    const SpdMatrix id(Matrix::Identity(3, 3));
    const Sample x = sample_multivariate_t(Vector::Zero(3), id, 1e6, 10000, rng);
    for (Index k = 0; k < 3; ++k) {
        std::vector<double> col(x.data.col(k).data(), x.data.col(k).data() + x.n());
        CHECK(ks_statistic(col, normal_cdf) < 0.01 + 1.9494682 / 100.0);
    }
}

TEST_CASE("multivariate t: t3 quantile and heavy tails") {
    RngStream rng(14);
    const SpdMatrix id(Matrix::Identity(1, 1));
    const Index n = 100000;
    const Sample x = sample_multivariate_t(Vector::Zero(1), id, 3.0, n, rng);
    std::vector<double> v(x.data.col(0).data(), x.data.col(0).data() + n);
    std::sort(v.begin(), v.end());
    const double q95 = v[static_cast<std::size_t>(0.95 * n)];
    CHECK(q95 == doctest::Approx(2.353).epsilon(0.05));  // published t3 quantile
    CHECK(oracle::kurtosis_of(v) > 5.0);
}

TEST_CASE("log density: input validation") {
    const MggdParams params(Vector::Zero(3), SpdMatrix(Matrix::Identity(3, 3)), ShapeParam(1.0));
    CHECK_THROWS_AS(log_density(params, Vector::Zero(2)), DimensionError);
    Vector bad(3);
    bad << 1.0, std::numeric_limits<double>::quiet_NaN(), 0.0;
    CHECK_THROWS_AS(log_density(params, bad), DataError);
}

TEST_CASE("mahalanobis moments: overflow is reported, not returned") {
    CHECK_THROWS_AS(mahalanobis_moment(200, ShapeParam(0.01), 2), std::overflow_error);
}

TEST_CASE("shape parameter envelope") {
    CHECK_THROWS(ShapeParam(0.0));
    CHECK_THROWS(ShapeParam(-1.0));
    CHECK_THROWS(ShapeParam(0.005));
    CHECK_THROWS(ShapeParam(150.0));
    CHECK_NOTHROW(ShapeParam(0.01));
    CHECK_NOTHROW(ShapeParam(100.0));
}
