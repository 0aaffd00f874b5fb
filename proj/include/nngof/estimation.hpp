#pragma once

#include <optional>

#include "nngof/mggd.hpp"
#include "nngof/sample.hpp"
#include "nngof/spd_matrix.hpp"
#include "nngof/tolerances.hpp"

namespace nngof {

struct TylerConfig {
    // Regularization weight in (0,1). Unset selects the dimension-aware
    // default min(0.9, max(0.05, m/(m+2n))).
    std::optional<double> rho;
    int max_iter = tol::kTylerMaxIter;
    double tol = tol::kTylerTol;
};

double default_tyler_rho(Index m, Index n);

struct SpatialMedianResult {
    Vector point;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

// Minimizer of sum_i ||x_i - mu|| by damped Weiszfeld iteration with the
// Vardi-Zhang correction when an iterate lands on a data point. Stops when
// the gradient norm drops below tol * n.
SpatialMedianResult spatial_median(const Sample& x, double tol = tol::kMedianTol,
                                   int max_iter = tol::kMedianMaxIter);

struct TylerResult {
    SpdMatrix shape;            // fixed point, trace-normalized to m
    int iterations = 0;
    bool converged = false;
    double fixed_point_residual = 0.0;  // of the unnormalized fixed point
    double trace_before_normalization = 0.0;
    Index dropped_rows = 0;     // rows coinciding with mu_hat
};

// Regularized scatter fixed point
//   Sigma = (1-rho) (m/n) sum_i c_i c_i^T / (c_i^T Sigma^{-1} c_i) + rho I,
// c_i = x_i - mu_hat, iterated from I until the relative Frobenius change
// between iterates is <= cfg.tol. The converged solution is returned
// trace-normalized to m; overall scale is restored separately by
// calibrate_scale.
TylerResult tyler_regularized(const Sample& x, const Vector& mu_hat, const TylerConfig& cfg);

// Rescale a trace-normalized shape matrix so the mean empirical Mahalanobis
// radius matches its model expectation under beta_hat. Closed form.
SpdMatrix calibrate_scale(const SpdMatrix& sigma_shape, const Sample& x, const Vector& mu_hat,
                          const ShapeParam& beta_hat);

struct BetaEstimate {
    ShapeParam beta;
    bool clamped = false;  // empirical ratio outside the attainable range
};

// Theoretical moment ratio E[Q^2]/E[Q]^2 of the squared Mahalanobis radius
// under shape beta in dimension m; strictly decreasing in beta.
double beta_moment_ratio(Index m, double beta);

// Solve beta_moment_ratio(m, beta) = ratio by bisection over [lo, hi].
BetaEstimate solve_beta_from_ratio(double ratio, Index m, double lo = tol::kBetaLower,
                                   double hi = tol::kBetaUpper, double tol = tol::kBetaTol);

// Moment-matching shape estimate from the Mahalanobis radii of x under
// (mu_hat, sigma_hat). Scale-free in sigma_hat.
BetaEstimate estimate_beta(const Sample& x, const Vector& mu_hat, const SpdMatrix& sigma_hat,
                           double lo = tol::kBetaLower, double hi = tol::kBetaUpper,
                           double tol = tol::kBetaTol);

struct FitDiagnostics {
    int median_iterations = 0;
    bool median_converged = false;
    int tyler_iterations = 0;
    bool tyler_converged = false;
    double tyler_residual = 0.0;
    Index dropped_rows = 0;
    bool beta_clamped = false;
    ConditionReport scatter_condition;
};

struct FitConfig {
    TylerConfig tyler;
    // When set, the shape parameter is pinned instead of estimated
    // (fixed-shape null variants, e.g. a Gaussian null at 1.0).
    std::optional<double> fixed_beta;
};

struct FittedNull {
    MggdParams params;
    WhiteningMap whitening;
    FitDiagnostics diagnostics;
};

// Full composite-null fit: spatial median -> regularized Tyler shape ->
// moment shape estimate -> closed-form scale calibration, with one
// beta/scale refinement pass, then the whitening map.
FittedNull fit_mggd(const Sample& x, const FitConfig& cfg = {});

}  // namespace nngof
