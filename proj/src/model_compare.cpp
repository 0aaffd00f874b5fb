#include "nngof/model_compare.hpp"

#include <algorithm>
#include <cmath>

#include "nngof/errors.hpp"
#include "nngof/estimation.hpp"
#include "nngof/mggd.hpp"
#include "nngof/special_functions.hpp"
#include "nngof/spd_matrix.hpp"

namespace nngof {

namespace {

constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kLog2 = 0.69314718055994530941723212145818;

std::vector<double> linear_grid(double lo, double hi, double step) {
    std::vector<double> grid;
    for (double v = lo; v <= hi + 1e-12; v += step) grid.push_back(v);
    return grid;
}

struct GaussianFit {
    Vector mu;
    Matrix cov;
    double log_likelihood = 0.0;
};

GaussianFit gaussian_mle(const Matrix& x) {
    const Index n = x.rows();
    const Index m = x.cols();
    GaussianFit fit;
    fit.mu = x.colwise().mean();
    const Matrix centered = x.rowwise() - fit.mu.transpose();
    fit.cov = centered.transpose() * centered / static_cast<double>(n);
    const SpdMatrix spd(fit.cov);
    double quad_sum = 0.0;
    for (Index i = 0; i < n; ++i) quad_sum += spd.quad_form_inv(centered.row(i).transpose());
    fit.log_likelihood = -0.5 * static_cast<double>(n) *
                             (static_cast<double>(m) * kLog2Pi + spd.log_det()) -
                         0.5 * quad_sum;
    return fit;
}

// EM fit of the multivariate t scatter at fixed nu, returning the maximized
// log likelihood.
double student_t_profile_loglik(const Matrix& x, double nu) {
    const Index n = x.rows();
    const Index m = x.cols();
    Vector mu = x.colwise().mean();
    Matrix centered = x.rowwise() - mu.transpose();
    Matrix sigma = centered.transpose() * centered / static_cast<double>(n);

    const double md = static_cast<double>(m);
    Vector delta(n);
    for (int iter = 0; iter < 500; ++iter) {
        const SpdMatrix spd(sigma);
        for (Index i = 0; i < n; ++i)
            delta(i) = spd.quad_form_inv((x.row(i).transpose() - mu).eval());
        const Vector w = (nu + md) / (nu + delta.array());

        const Vector mu_next = (w.asDiagonal() * x).colwise().sum().transpose() / w.sum();
        const Matrix c2 = x.rowwise() - mu_next.transpose();
        Matrix sigma_next = c2.transpose() * (w.asDiagonal() * c2) / static_cast<double>(n);
        sigma_next = 0.5 * (sigma_next + sigma_next.transpose());

        const double move = (sigma_next - sigma).norm() / sigma.norm() +
                            (mu_next - mu).norm() / std::max(1.0, mu.norm());
        mu = mu_next;
        sigma = sigma_next;
        if (move < 1e-9) break;
    }

    const SpdMatrix spd(sigma);
    for (Index i = 0; i < n; ++i)
        delta(i) = spd.quad_form_inv((x.row(i).transpose() - mu).eval());
    const double nd = static_cast<double>(n);
    double ll = nd * (std::lgamma(0.5 * (nu + md)) - std::lgamma(0.5 * nu) -
                      0.5 * md * (std::log(nu) + kLogPi) - 0.5 * spd.log_det());
    ll -= 0.5 * (nu + md) * (1.0 + delta.array() / nu).log().sum();
    return ll;
}

// Profile log likelihood of the generalized Gaussian at fixed beta, with the
// scale of the shape matrix re-optimized in closed form.
double mggd_profile_loglik(double beta, Index n, Index m, const Vector& radii_shape,
                           double log_det_shape) {
    const double nd = static_cast<double>(n);
    const double md = static_cast<double>(m);
    const double a = md / (2.0 * beta);

    // First-order condition for the scale s = sigma^2:
    // s^beta = (beta / (n m)) sum_i q_i^beta.
    const double sum_qb = radii_shape.array().pow(beta).sum();
    if (!(sum_qb > 0.0)) throw DataError("model_comparison: degenerate radii");
    const double log_s = (std::log(beta) + std::log(sum_qb) - std::log(nd * md)) / beta;

    const double log_const =
        std::log(beta) + std::lgamma(0.5 * md) - 0.5 * md * kLogPi - std::lgamma(a) - a * kLog2;
    double ll = nd * log_const - 0.5 * nd * (md * log_s + log_det_shape);
    ll -= 0.5 * std::exp(std::log(sum_qb) - beta * log_s);
    return ll;
}

int gaussian_parameter_count(Index m) {
    return static_cast<int>(m + m * (m + 1) / 2);
}

ModelFitSummary summarize(const std::string& model, double ll, int k, Index n, double shape,
                          bool edge) {
    ModelFitSummary s;
    s.model = model;
    s.log_likelihood = ll;
    s.parameter_count = k;
    s.aic = 2.0 * k - 2.0 * ll;
    s.bic = static_cast<double>(k) * std::log(static_cast<double>(n)) - 2.0 * ll;
    s.shape = shape;
    s.grid_edge = edge;
    return s;
}

}  // namespace

ModelComparison model_comparison(const Dataset& data, const ModelCompareOptions& opts) {
    const Index n = data.n();
    const Index m = data.m();
    if (n <= m + 2)
        throw DataError("model_comparison: need n > m + 2 for a covariance fit");

    const Matrix& x = data.values;
    ModelComparison cmp;

    // Gaussian baseline, closed form.
    const GaussianFit gauss = gaussian_mle(x);
    cmp.normal = summarize("normal", gauss.log_likelihood, gaussian_parameter_count(m), n, 0.0,
                           false);

    // Multivariate t profile over nu.
    std::vector<double> nu_grid = opts.nu_grid;
    if (nu_grid.empty()) nu_grid = linear_grid(1.0, 50.0, 0.5);
    double best_ll_t = -std::numeric_limits<double>::infinity();
    std::size_t best_nu_idx = 0;
    for (std::size_t i = 0; i < nu_grid.size(); ++i) {
        const double ll = student_t_profile_loglik(x, nu_grid[i]);
        if (ll > best_ll_t) {
            best_ll_t = ll;
            best_nu_idx = i;
        }
    }
    const bool nu_edge = nu_grid.size() > 1 &&
                         (best_nu_idx == 0 || best_nu_idx + 1 == nu_grid.size());
    cmp.student_t = summarize("t", best_ll_t, gaussian_parameter_count(m) + 1, n,
                              nu_grid[best_nu_idx], nu_edge);

    // Generalized Gaussian profile over beta: robust location, Tyler shape,
    // closed-form scale per beta.
    const Sample sample = data.as_sample();
    const SpatialMedianResult med = spatial_median(sample);
    const TylerResult tyler = tyler_regularized(sample, med.point, TylerConfig{});
    const Matrix centered = x.rowwise() - med.point.transpose();
    const Matrix half = centered * tyler.shape.inv_sqrt();
    const Vector radii = half.rowwise().squaredNorm();
    const double log_det_shape = tyler.shape.log_det();

    std::vector<double> beta_grid = opts.beta_grid;
    if (beta_grid.empty()) beta_grid = linear_grid(0.2, 4.0, 0.05);
    std::sort(beta_grid.begin(), beta_grid.end());

    auto eval_beta = [&](double beta) {
        return mggd_profile_loglik(beta, n, m, radii, log_det_shape);
    };

    for (const double beta : beta_grid)
        cmp.beta_profile.push_back({beta, eval_beta(beta)});

    auto best_it = std::max_element(
        cmp.beta_profile.begin(), cmp.beta_profile.end(),
        [](const ProfilePoint& a, const ProfilePoint& b) {
            return a.log_likelihood < b.log_likelihood;
        });
    const bool beta_edge_coarse =
        cmp.beta_profile.size() > 1 &&
        (best_it == cmp.beta_profile.begin() || best_it + 1 == cmp.beta_profile.end());

    if (opts.refine_beta && !beta_edge_coarse && beta_grid.size() > 1) {
        // One refinement pass around the coarse maximum.
        const double center = best_it->shape;
        const double step = (beta_grid.back() - beta_grid.front()) /
                            static_cast<double>(beta_grid.size() - 1);
        for (double b = center - step; b <= center + step + 1e-12; b += step / 5.0) {
            if (b <= 0.0) continue;
            cmp.beta_profile.push_back({b, eval_beta(b)});
        }
        std::sort(cmp.beta_profile.begin(), cmp.beta_profile.end(),
                  [](const ProfilePoint& a, const ProfilePoint& b) { return a.shape < b.shape; });
        best_it = std::max_element(
            cmp.beta_profile.begin(), cmp.beta_profile.end(),
            [](const ProfilePoint& a, const ProfilePoint& b) {
                return a.log_likelihood < b.log_likelihood;
            });
    }

    cmp.mggd = summarize("mggd", best_it->log_likelihood, gaussian_parameter_count(m) + 1, n,
                         best_it->shape, beta_edge_coarse);
    return cmp;
}

std::vector<QqPoint> mahalanobis_qq(const Dataset& data) {
    const Index n = data.n();
    const Index m = data.m();
    const Matrix& x = data.values;
    const Vector mu = x.colwise().mean();
    const Matrix centered = x.rowwise() - mu.transpose();

    std::vector<double> observed(static_cast<std::size_t>(n));
    bool used_cov = false;
    if (n > m + 1) {
        try {
            const SpdMatrix cov(
                (centered.transpose() * centered / static_cast<double>(n)).eval());
            for (Index i = 0; i < n; ++i)
                observed[static_cast<std::size_t>(i)] =
                    cov.quad_form_inv(centered.row(i).transpose());
            used_cov = true;
        } catch (const std::exception&) {
            used_cov = false;
        }
    }
    if (!used_cov) {
        // Singular covariance (tiny n): fall back to the identity scatter.
        for (Index i = 0; i < n; ++i)
            observed[static_cast<std::size_t>(i)] = centered.row(i).squaredNorm();
    }
    std::sort(observed.begin(), observed.end());

    std::vector<QqPoint> points(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        points[static_cast<std::size_t>(i)] = {chi_square_quantile(p, static_cast<double>(m)),
                                               observed[static_cast<std::size_t>(i)]};
    }
    return points;
}

}  // namespace nngof
