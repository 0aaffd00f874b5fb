#pragma once

#include <memory>

#include "nngof/rng.hpp"
#include "nngof/sample.hpp"
#include "nngof/spd_matrix.hpp"

namespace nngof {

// Tail-shape exponent of the generalized Gaussian family. beta = 1 is the
// Gaussian member, beta < 1 heavy-tailed, beta > 1 light-tailed. Note this is
// the exponent acting on the squared Mahalanobis form; sources using the
// s-parameterisation relate to it by beta = s/2.
class ShapeParam {
  public:
    explicit ShapeParam(double beta);
    double value() const { return beta_; }

  private:
    double beta_;
};

// Parameter triple (mu, sigma, beta). The scatter is held factorized so the
// sampler and density reuse one spectral decomposition.
struct MggdParams {
    Vector mu;
    std::shared_ptr<const SpdMatrix> sigma;
    ShapeParam beta;

    MggdParams(Vector mu_in, SpdMatrix sigma_in, ShapeParam beta_in);

    Index dim() const { return mu.size(); }
};

// Law of the Mahalanobis radius of a standardized member: with
// W = 0.5 * R^(2 beta), W ~ Gamma(m/(2 beta), scale 1).
struct RadialLaw {
    Index m;
    ShapeParam beta;

    RadialLaw(Index m_in, ShapeParam beta_in);

    double gamma_shape() const { return static_cast<double>(m) / (2.0 * beta.value()); }
};

// Uniform draw from the unit sphere in R^m (normalized Gaussian vector).
Vector sample_unit_sphere(Index m, RngStream& rng);

// Radius draw R = (2W)^{1/(2 beta)} with W ~ Gamma(m/(2 beta), 1).
double sample_radius(const RadialLaw& law, RngStream& rng);

// Concentration point of ||X|| / m^{1/(2 beta)} as the dimension grows:
// (1/beta)^{1/(2 beta)}.
double radial_concentration_const(const ShapeParam& beta);

// n iid rows via the stochastic representation X = mu + sigma^{1/2} R U.
Sample sample_mggd(const MggdParams& params, Index n, RngStream& rng);

// Standardized variant (mu = 0, sigma = I) skipping the affine transform.
Sample sample_standard_mggd(Index m, const ShapeParam& beta, Index n, RngStream& rng);

// Log density of the generalized Gaussian at x. Normalizing constant handled
// entirely in log space.
double log_density(const MggdParams& params, const Vector& x);

// Same, for the standardized member with Q = ||x||^2 precomputed.
double log_density_standard(Index m, const ShapeParam& beta, double q);

// k-th moment of the squared Mahalanobis radius under (0, I, beta):
// 2^{k/beta} Gamma(m/(2 beta) + k/beta) / Gamma(m/(2 beta)).
double mahalanobis_moment(Index m, const ShapeParam& beta, int k);

// Multivariate t rows: mu + sigma^{1/2} Z / sqrt(S/nu), Z Gaussian,
// S ~ chi-square(nu) independent of Z.
Sample sample_multivariate_t(const Vector& mu, const SpdMatrix& sigma, double nu, Index n,
                             RngStream& rng);

}  // namespace nngof
