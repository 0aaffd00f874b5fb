#pragma once

#include <vector>

#include "nngof/dataset.hpp"
#include "nngof/sample.hpp"

namespace nngof {

struct ModelFitSummary {
    std::string model;          // "normal" / "t" / "mggd"
    double log_likelihood = 0.0;
    int parameter_count = 0;
    double aic = 0.0;
    double bic = 0.0;
    double shape = 0.0;         // nu or beta; 0 for the normal model
    bool grid_edge = false;     // profile maximum sat on a grid boundary
};

struct ProfilePoint {
    double shape = 0.0;
    double log_likelihood = 0.0;
};

struct ModelComparison {
    ModelFitSummary normal;
    ModelFitSummary student_t;
    ModelFitSummary mggd;
    std::vector<ProfilePoint> beta_profile;  // merged coarse + refined grid
};

struct ModelCompareOptions {
    // Profile grids. Defaults: nu in {1, 1.5, ..., 50}, beta in
    // {0.2, 0.25, ..., 4} with one local refinement pass at step 0.01.
    std::vector<double> nu_grid;
    std::vector<double> beta_grid;
    bool refine_beta = true;
};

// Penalized-likelihood comparison of the Gaussian, multivariate-t and
// generalized Gaussian fits. Gaussian: closed-form MLE. t: per-nu EM scatter
// fit profiled over the nu grid. Generalized Gaussian: robust location and
// shape matrix, scale re-optimized in closed form per beta on the profile
// grid.
ModelComparison model_comparison(const Dataset& data, const ModelCompareOptions& opts = {});

struct QqPoint {
    double theoretical = 0.0;  // chi-square(m) quantile at (i - 0.5)/n
    double observed = 0.0;     // sorted squared Mahalanobis distance
};

// Mahalanobis distance QQ data against the chi-square reference (Gaussian
// baseline with MLE mean/covariance).
std::vector<QqPoint> mahalanobis_qq(const Dataset& data);

}  // namespace nngof
