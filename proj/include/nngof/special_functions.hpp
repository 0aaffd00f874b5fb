#pragma once

#include <functional>
#include <vector>

// Scalar special functions used by the distribution code and the diagnostic
// commands. Everything is assembled in log space where overflow is possible.

namespace nngof {

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a,x) = 1 - P(a,x).
double gamma_q(double a, double x);

// CDF of the Gamma(shape, unit scale) distribution.
inline double gamma_cdf(double x, double shape) {
    return x <= 0.0 ? 0.0 : gamma_p(shape, x);
}

// Inverse of P(a,.) — x such that P(a,x) = p.
double inverse_gamma_p(double a, double p);

double chi_square_cdf(double x, double dof);
double chi_square_quantile(double p, double dof);

double normal_cdf(double x);

// Kolmogorov-Smirnov distance between the empirical CDF of the values and a
// reference CDF. `values` need not be sorted; a sorted copy is made.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);

// KS distance of p-values against the uniform reference on [0,1].
double ks_uniform_statistic(std::vector<double> pvalues);

}  // namespace nngof
