#include "nngof/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nngof {

namespace {

constexpr int kMaxIter = 5000;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFpMin = std::numeric_limits<double>::min() / kEps;

// Series expansion of P(a,x), reliable for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz continued fraction for Q(a,x), reliable for x >= a+1.
double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p: shape must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_q: shape must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double inverse_gamma_p(double a, double p) {
    if (!(a > 0.0)) throw std::invalid_argument("inverse_gamma_p: shape must be positive");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("inverse_gamma_p: p outside [0,1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return std::numeric_limits<double>::infinity();

    // Wilson-Hilferty starting point, then safeguarded Newton on P(a,x)-p.
    const double g = std::lgamma(a);
    double x;
    if (a > 1.0) {
        // Normal quantile via Acklam-style rational approximation is overkill
        // here; a crude start is enough for Newton below.
        const double t = std::sqrt(-2.0 * std::log(p < 0.5 ? p : 1.0 - p));
        double z = t - (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481));
        if (p < 0.5) z = -z;
        const double wh = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * std::sqrt(a));
        x = a * wh * wh * wh;
        if (x <= 0.0) x = 0.5 * a;
    } else {
        const double t = 1.0 - a * (0.253 + a * 0.12);
        x = (p < t) ? std::pow(p / t, 1.0 / a) : 1.0 - std::log(1.0 - (p - t) / (1.0 - t));
    }

    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 200; ++it) {
        if (x <= 0.0) x = 0.5 * (lo + (std::isfinite(hi) ? hi : lo + 1.0));
        const double err = gamma_p(a, x) - p;
        if (err > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        const double logpdf = (a - 1.0) * std::log(x) - x - g;
        const double step = err / std::exp(logpdf);
        double xn = x - step;
        if (!(xn > lo && (xn < hi))) {
            xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
        }
        if (std::fabs(xn - x) <= 1e-14 * std::max(1.0, std::fabs(xn))) return xn;
        x = xn;
    }
    return x;
}

double chi_square_cdf(double x, double dof) {
    return x <= 0.0 ? 0.0 : gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, double dof) {
    return 2.0 * inverse_gamma_p(0.5 * dof, p);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
    if (values.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

double ks_uniform_statistic(std::vector<double> pvalues) {
    return ks_statistic(std::move(pvalues), [](double p) {
        return std::clamp(p, 0.0, 1.0);
    });
}

}  // namespace nngof
