#pragma once

#include <Eigen/Core>

#include "nngof/sample.hpp"

namespace nngof {

struct ConditionReport {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double condition = 0.0;
};

// Symmetric positive definite matrix with a cached spectral factorization.
//
// The factorization is computed once at construction and reused for the
// symmetric square root, its inverse, the log determinant and conditioning
// diagnostics. Instances are immutable and safe to share across threads.
class SpdMatrix {
  public:
    // Validates symmetry and positive definiteness, then factorizes.
    // Throws NotSymmetricError / NotPositiveDefiniteError.
    explicit SpdMatrix(const Matrix& a);

    Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }

    // Eigenvalues in descending order, orthonormal eigenvectors as columns
    // (column k pairs with eigenvalues()[k]).
    const Vector& eigenvalues() const { return eigenvalues_; }
    const Matrix& eigenvectors() const { return eigenvectors_; }

    // V diag(lambda^{1/2}) V^T.
    const Matrix& sqrt() const { return sqrt_; }

    // V diag(lambda^{-1/2}) V^T. Throws ConditioningError when the condition
    // number exceeds tol::kMaxCondition. Precomputed at construction for
    // well-conditioned matrices, so instances stay immutable and shareable.
    const Matrix& inv_sqrt() const;

    // Sum of log eigenvalues; never forms the determinant itself.
    double log_det() const { return log_det_; }

    double trace() const { return matrix_.trace(); }

    ConditionReport condition_diagnostics() const;

    // Squared Mahalanobis norm x^T S^{-1} x via the cached factorization.
    double quad_form_inv(const Vector& x) const;

  private:
    Matrix matrix_;
    Vector eigenvalues_;   // descending
    Matrix eigenvectors_;  // columns match eigenvalues_
    Matrix sqrt_;
    Matrix inv_sqrt_;
    bool inv_sqrt_ready_ = false;
    double log_det_ = 0.0;
};

// Convenience: factorize a raw symmetric matrix (spec-facing name).
inline SpdMatrix factorize(const Matrix& a) { return SpdMatrix(a); }

// Affine standardization x -> sigma^{-1/2} (x - mu) and its inverse.
struct WhiteningMap {
    Vector mu_hat;
    Matrix sigma_inv_sqrt;
    Matrix sigma_sqrt;  // cached inverse of the map

    WhiteningMap() = default;
    WhiteningMap(Vector mu, const SpdMatrix& sigma);

    Index dim() const { return mu_hat.size(); }
};

// Row-wise application of the whitening map.
Sample whiten(const WhiteningMap& map, const Sample& x);
Sample unwhiten(const WhiteningMap& map, const Sample& z);

}  // namespace nngof
