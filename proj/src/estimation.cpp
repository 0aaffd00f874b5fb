#include "nngof/estimation.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>
#include <string>

#include "nngof/errors.hpp"

namespace nngof {

double default_tyler_rho(Index m, Index n) {
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    return std::min(0.9, std::max(0.05, md / (md + 2.0 * nd)));
}

SpatialMedianResult spatial_median(const Sample& x, double tol, int max_iter) {
    if (x.n() < 2) throw DimensionError("spatial_median: need at least two rows");
    const Index n = x.n();
    const Index m = x.m();
    const double scale = std::max(1.0, x.data.cwiseAbs().maxCoeff());
    const double collision_eps = 1e-13 * scale;

    SpatialMedianResult res;
    Vector mu = x.data.colwise().mean();
    Vector prev_step = Vector::Zero(m);

    for (int iter = 1; iter <= max_iter; ++iter) {
        res.iterations = iter;
        Vector dist = (x.data.rowwise() - mu.transpose()).rowwise().norm();

        // Gradient of sum_i ||x_i - mu|| over the non-coincident points.
        Vector grad = Vector::Zero(m);
        Vector weighted = Vector::Zero(m);
        double weight_sum = 0.0;
        Index collided = 0;
        for (Index i = 0; i < n; ++i) {
            if (dist(i) <= collision_eps) {
                ++collided;
                continue;
            }
            const Vector diff = x.data.row(i).transpose() - mu;
            grad -= diff / dist(i);
            weighted += x.data.row(i).transpose() / dist(i);
            weight_sum += 1.0 / dist(i);
        }

        if (collided == n) {
            // All rows equal mu: degenerate minimizer.
            res.converged = true;
            res.gradient_norm = 0.0;
            break;
        }

        const double grad_norm = grad.norm();
        res.gradient_norm = grad_norm;
        if (collided > 0) {
            // Vardi-Zhang singular-point rule: the collision contributes a
            // subgradient ball of radius `collided`.
            if (grad_norm <= static_cast<double>(collided)) {
                res.converged = true;
                break;
            }
            const Vector t_tilde = weighted / weight_sum;
            const double gamma =
                std::min(1.0, static_cast<double>(collided) / grad_norm);
            const Vector next = (1.0 - gamma) * t_tilde + gamma * mu;
            prev_step = next - mu;
            mu = next;
            continue;
        }

        if (grad_norm <= tol * static_cast<double>(n)) {
            res.converged = true;
            break;
        }

        Vector next = weighted / weight_sum;
        Vector step = next - mu;
        // Damp when successive steps reverse direction (oscillation).
        if (prev_step.norm() > 0.0 && step.dot(prev_step) < 0.0) {
            step *= 0.5;
            next = mu + step;
        }
        prev_step = step;
        mu = next;
    }

    res.point = mu;
    return res;
}

TylerResult tyler_regularized(const Sample& x, const Vector& mu_hat, const TylerConfig& cfg) {
    if (x.n() < 2) throw DimensionError("tyler_regularized: need at least two rows");
    if (mu_hat.size() != x.m()) throw DimensionError("tyler_regularized: dimension mismatch");
    const double rho = cfg.rho ? *cfg.rho : default_tyler_rho(x.m(), x.n());
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("tyler_regularized: rho must lie in (0,1)");
    if (cfg.max_iter < 1 || !(cfg.tol > 0.0))
        throw std::invalid_argument("tyler_regularized: bad iteration config");

    const Index m = x.m();
    Matrix centered = x.data.rowwise() - mu_hat.transpose();

    // Rows coinciding with the location estimate have no direction
    // information and a zero denominator; drop them.
    Index kept = 0;
    for (Index i = 0; i < centered.rows(); ++i) {
        if (centered.row(i).squaredNorm() > 0.0) {
            if (kept != i) centered.row(kept) = centered.row(i);
            ++kept;
        }
    }
    const Index dropped_rows = centered.rows() - kept;
    if (kept < 2) throw DataError("tyler_regularized: fewer than two usable rows");
    centered.conservativeResize(kept, m);
    const double n_used = static_cast<double>(kept);

    const auto rhs = [&](const Matrix& sigma) -> Matrix {
        Eigen::LLT<Matrix> llt(sigma);
        if (llt.info() != Eigen::Success)
            throw NotPositiveDefiniteError("tyler_regularized: iterate lost definiteness", 0.0);
        const Matrix solved = llt.solve(centered.transpose());  // m x n
        Matrix weighted(kept, m);
        for (Index i = 0; i < kept; ++i) {
            const double q = centered.row(i).dot(solved.col(i));
            if (q < tol::kZeroDenominator)
                throw ZeroDenominatorError("tyler_regularized: vanishing quadratic form");
            weighted.row(i) = centered.row(i) / q;
        }
        Matrix next = (1.0 - rho) * (static_cast<double>(m) / n_used) *
                          (centered.transpose() * weighted) +
                      rho * Matrix::Identity(m, m);
        return 0.5 * (next + next.transpose());
    };

    Matrix sigma = Matrix::Identity(m, m);
    int iterations = 0;
    bool converged = false;
    for (int iter = 1; iter <= cfg.max_iter; ++iter) {
        iterations = iter;
        const Matrix next = rhs(sigma);
        const double rel = (next - sigma).norm() / sigma.norm();
        sigma = next;
        if (rel <= cfg.tol) {
            converged = true;
            break;
        }
    }

    const double residual = (rhs(sigma) - sigma).norm() / sigma.norm();
    const double trace_before = sigma.trace();
    sigma *= static_cast<double>(m) / trace_before;

    return TylerResult{SpdMatrix(sigma), iterations, converged, residual, trace_before,
                       dropped_rows};
}

namespace {

Vector mahalanobis_radii(const Sample& x, const Vector& mu_hat, const SpdMatrix& sigma) {
    const Matrix centered = x.data.rowwise() - mu_hat.transpose();
    const Matrix half = centered * sigma.inv_sqrt();
    return half.rowwise().squaredNorm();
}

}  // namespace

SpdMatrix calibrate_scale(const SpdMatrix& sigma_shape, const Sample& x, const Vector& mu_hat,
                          const ShapeParam& beta_hat) {
    const Vector radii = mahalanobis_radii(x, mu_hat, sigma_shape);
    const double mean_radius = radii.mean();
    if (!(mean_radius > 0.0))
        throw DataError("calibrate_scale: degenerate radii (all observations at mu_hat)");
    const double expected = mahalanobis_moment(x.m(), beta_hat, 1);
    const double scale = mean_radius / expected;
    return SpdMatrix(scale * sigma_shape.matrix());
}

double beta_moment_ratio(Index m, double beta) {
    const double a = static_cast<double>(m) / (2.0 * beta);
    const double inv_b = 1.0 / beta;
    return std::exp(std::lgamma(a) + std::lgamma(a + 2.0 * inv_b) -
                    2.0 * std::lgamma(a + inv_b));
}

BetaEstimate solve_beta_from_ratio(double ratio, Index m, double lo, double hi, double tol) {
    if (!(ratio > 0.0) || !std::isfinite(ratio))
        throw std::invalid_argument("solve_beta_from_ratio: ratio must be finite and positive");
    // The ratio is strictly decreasing in beta: heavier tails inflate it.
    if (ratio >= beta_moment_ratio(m, lo)) return {ShapeParam(lo), true};
    if (ratio <= beta_moment_ratio(m, hi)) return {ShapeParam(hi), true};

    double a = lo;
    double b = hi;
    for (int iter = 0; iter < tol::kBetaMaxIter && (b - a) > tol; ++iter) {
        const double mid = 0.5 * (a + b);
        if (beta_moment_ratio(m, mid) > ratio) {
            a = mid;
        } else {
            b = mid;
        }
    }
    return {ShapeParam(0.5 * (a + b)), false};
}

BetaEstimate estimate_beta(const Sample& x, const Vector& mu_hat, const SpdMatrix& sigma_hat,
                           double lo, double hi, double tol) {
    if (x.n() < 4) throw DimensionError("estimate_beta: need at least four rows");
    const Vector radii = mahalanobis_radii(x, mu_hat, sigma_hat);
    const double mean_q = radii.mean();
    if (!(mean_q > 0.0)) throw DataError("estimate_beta: degenerate radii");
    const double mean_q2 = radii.array().square().mean();
    return solve_beta_from_ratio(mean_q2 / (mean_q * mean_q), x.m(), lo, hi, tol);
}

FittedNull fit_mggd(const Sample& x, const FitConfig& cfg) {
    if (x.n() < 10) throw DimensionError("fit_mggd: need at least ten rows");

    const SpatialMedianResult med = spatial_median(x);
    const TylerResult tyler = tyler_regularized(x, med.point, cfg.tyler);

    BetaEstimate beta_est{ShapeParam(1.0), false};
    if (cfg.fixed_beta) {
        beta_est = {ShapeParam(*cfg.fixed_beta), false};
    } else {
        beta_est = estimate_beta(x, med.point, tyler.shape);
    }

    SpdMatrix sigma = calibrate_scale(tyler.shape, x, med.point, beta_est.beta);

    // One refinement pass: re-estimate the shape under the calibrated scatter
    // and recalibrate if it moved. The moment ratio is scale-free, so this is
    // a fixed point after a single pass.
    if (!cfg.fixed_beta) {
        const BetaEstimate refined = estimate_beta(x, med.point, sigma);
        if (std::fabs(refined.beta.value() - beta_est.beta.value()) > tol::kBetaTol) {
            sigma = calibrate_scale(tyler.shape, x, med.point, refined.beta);
        }
        beta_est = refined;
    }

    FitDiagnostics diag;
    diag.median_iterations = med.iterations;
    diag.median_converged = med.converged;
    diag.tyler_iterations = tyler.iterations;
    diag.tyler_converged = tyler.converged;
    diag.tyler_residual = tyler.fixed_point_residual;
    diag.dropped_rows = tyler.dropped_rows;
    diag.beta_clamped = beta_est.clamped;
    diag.scatter_condition = sigma.condition_diagnostics();

    MggdParams params(med.point, std::move(sigma), beta_est.beta);
    WhiteningMap map(params.mu, *params.sigma);

    const Matrix check = map.sigma_inv_sqrt * params.sigma->matrix() * map.sigma_inv_sqrt;
    const double rel =
        (check - Matrix::Identity(x.m(), x.m())).norm() / std::sqrt(static_cast<double>(x.m()));
    if (rel > tol::kWhitenRel)
        throw ConditioningError("fit_mggd: whitening map inconsistent with scatter");

    return FittedNull{std::move(params), std::move(map), diag};
}

}  // namespace nngof
