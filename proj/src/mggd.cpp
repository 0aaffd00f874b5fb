#include "nngof/mggd.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nngof/errors.hpp"
#include "nngof/tolerances.hpp"

namespace nngof {

namespace {
constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2 = 0.69314718055994530941723212145818;
}  // namespace

ShapeParam::ShapeParam(double beta) : beta_(beta) {
    if (!(beta >= tol::kShapeMin && beta <= tol::kShapeMax))
        throw std::invalid_argument("ShapeParam: beta " + std::to_string(beta) +
                                    " outside [" + std::to_string(tol::kShapeMin) + ", " +
                                    std::to_string(tol::kShapeMax) + "]");
}

MggdParams::MggdParams(Vector mu_in, SpdMatrix sigma_in, ShapeParam beta_in)
    : mu(std::move(mu_in)),
      sigma(std::make_shared<const SpdMatrix>(std::move(sigma_in))),
      beta(beta_in) {
    if (mu.size() != sigma->dim())
        throw DimensionError("MggdParams: location/scatter dimension mismatch");
}

RadialLaw::RadialLaw(Index m_in, ShapeParam beta_in) : m(m_in), beta(beta_in) {
    if (m < 1) throw DimensionError("RadialLaw: dimension must be >= 1");
}

Vector sample_unit_sphere(Index m, RngStream& rng) {
    if (m < 1) throw DimensionError("sample_unit_sphere: dimension must be >= 1");
    Vector u(m);
    for (;;) {
        fill_standard_normal(rng, u.data(), static_cast<std::size_t>(m));
        const double norm = u.norm();
        if (norm > 1e-12) return u / norm;
        // Zero-norm draw has probability zero; regenerate.
    }
}

double sample_radius(const RadialLaw& law, RngStream& rng) {
    // R = (2W)^{1/(2 beta)} assembled in log space so small gamma shapes and
    // tiny beta stay finite.
    const double log_w = sample_log_gamma_variate(law.gamma_shape(), rng);
    return std::exp((kLog2 + log_w) / (2.0 * law.beta.value()));
}

double radial_concentration_const(const ShapeParam& beta) {
    const double b = beta.value();
    return std::pow(1.0 / b, 1.0 / (2.0 * b));
}

Sample sample_standard_mggd(Index m, const ShapeParam& beta, Index n, RngStream& rng) {
    if (n < 1) throw DimensionError("sample_standard_mggd: need n >= 1");
    const RadialLaw law(m, beta);
    Matrix x(n, m);
    Vector u(m);
    for (Index i = 0; i < n; ++i) {
        u = sample_unit_sphere(m, rng);
        x.row(i) = sample_radius(law, rng) * u.transpose();
    }
    Sample out;
    out.data = std::move(x);
    return out;
}

Sample sample_mggd(const MggdParams& params, Index n, RngStream& rng) {
    Sample z = sample_standard_mggd(params.dim(), params.beta, n, rng);
    Sample out;
    out.data = (z.data * params.sigma->sqrt()).rowwise() + params.mu.transpose();
    return out;
}

double log_density_standard(Index m, const ShapeParam& beta, double q) {
    if (q < 0.0) throw std::invalid_argument("log_density_standard: negative quadratic form");
    const double b = beta.value();
    const double md = static_cast<double>(m);
    const double a = md / (2.0 * b);
    const double log_const =
        std::log(b) + std::lgamma(0.5 * md) - 0.5 * md * kLogPi - std::lgamma(a) - a * kLog2;
    return log_const - 0.5 * std::pow(q, b);
}

double log_density(const MggdParams& params, const Vector& x) {
    if (x.size() != params.dim()) throw DimensionError("log_density: dimension mismatch");
    if (!x.allFinite()) throw DataError("log_density: non-finite point");
    const double q = params.sigma->quad_form_inv(x - params.mu);
    return log_density_standard(params.dim(), params.beta, q) - 0.5 * params.sigma->log_det();
}

double mahalanobis_moment(Index m, const ShapeParam& beta, int k) {
    if (k < 1) throw std::invalid_argument("mahalanobis_moment: order must be >= 1");
    const double b = beta.value();
    const double a = static_cast<double>(m) / (2.0 * b);
    const double kb = static_cast<double>(k) / b;
    const double log_moment = kb * kLog2 + std::lgamma(a + kb) - std::lgamma(a);
    const double moment = std::exp(log_moment);
    if (!std::isfinite(moment))
        throw std::overflow_error("mahalanobis_moment: result exceeds floating range");
    return moment;
}

Sample sample_multivariate_t(const Vector& mu, const SpdMatrix& sigma, double nu, Index n,
                             RngStream& rng) {
    if (!(nu > 0.0)) throw std::invalid_argument("sample_multivariate_t: nu must be positive");
    if (mu.size() != sigma.dim())
        throw DimensionError("sample_multivariate_t: dimension mismatch");
    const Index m = sigma.dim();
    Matrix z(n, m);
    fill_standard_normal(rng, z.data(), static_cast<std::size_t>(n * m));
    Vector scale(n);
    for (Index i = 0; i < n; ++i)
        scale(i) = 1.0 / std::sqrt(sample_chi_square(nu, rng) / nu);
    Sample out;
    out.data = ((scale.asDiagonal() * z) * sigma.sqrt()).rowwise() + mu.transpose();
    return out;
}

}  // namespace nngof
