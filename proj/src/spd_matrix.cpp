#include "nngof/spd_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

#include "nngof/errors.hpp"
#include "nngof/tolerances.hpp"

namespace nngof {

SpdMatrix::SpdMatrix(const Matrix& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw DimensionError("SpdMatrix: matrix must be square and nonempty");
    if (!a.allFinite()) throw DataError("SpdMatrix: non-finite entry");

    const double max_abs = a.cwiseAbs().maxCoeff();
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > tol::kSymmetryRel * std::max(max_abs, 1e-30))
        throw NotSymmetricError("SpdMatrix: asymmetry " + std::to_string(asym) +
                                " exceeds tolerance");

    // Symmetrize before factorizing so round-off asymmetry cannot leak in.
    matrix_ = 0.5 * (a + a.transpose());

    Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_);
    if (solver.info() != Eigen::Success)
        throw NotPositiveDefiniteError("SpdMatrix: eigen factorization failed", 0.0);

    const Index m = matrix_.rows();
    eigenvalues_ = solver.eigenvalues().reverse();
    eigenvectors_ = solver.eigenvectors().rowwise().reverse();

    const double lambda_min = eigenvalues_(m - 1);
    if (!(lambda_min > 0.0))
        throw NotPositiveDefiniteError(
            "SpdMatrix: smallest eigenvalue " + std::to_string(lambda_min) + " is not positive",
            lambda_min);

    const Matrix recon =
        eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.transpose();
    const double rel_err = (recon - matrix_).norm() / matrix_.norm();
    if (rel_err > tol::kReconstructionRel)
        throw NotPositiveDefiniteError("SpdMatrix: reconstruction error too large", lambda_min);

    sqrt_ = eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() * eigenvectors_.transpose();
    sqrt_ = 0.5 * (sqrt_ + sqrt_.transpose());
    log_det_ = eigenvalues_.array().log().sum();

    if (eigenvalues_(0) / lambda_min <= tol::kMaxCondition) {
        inv_sqrt_ = eigenvectors_ * eigenvalues_.cwiseSqrt().cwiseInverse().asDiagonal() *
                    eigenvectors_.transpose();
        inv_sqrt_ = 0.5 * (inv_sqrt_ + inv_sqrt_.transpose());
        inv_sqrt_ready_ = true;
    }
}

const Matrix& SpdMatrix::inv_sqrt() const {
    if (!inv_sqrt_ready_)
        throw ConditioningError("SpdMatrix: condition number " +
                                std::to_string(condition_diagnostics().condition) +
                                " exceeds limit for inv_sqrt");
    return inv_sqrt_;
}

ConditionReport SpdMatrix::condition_diagnostics() const {
    ConditionReport rep;
    rep.lambda_max = eigenvalues_(0);
    rep.lambda_min = eigenvalues_(dim() - 1);
    rep.condition = rep.lambda_max / rep.lambda_min;
    return rep;
}

double SpdMatrix::quad_form_inv(const Vector& x) const {
    if (x.size() != dim()) throw DimensionError("quad_form_inv: dimension mismatch");
    const Vector y = eigenvectors_.transpose() * x;
    return (y.array().square() / eigenvalues_.array()).sum();
}

WhiteningMap::WhiteningMap(Vector mu, const SpdMatrix& sigma)
    : mu_hat(std::move(mu)), sigma_inv_sqrt(sigma.inv_sqrt()), sigma_sqrt(sigma.sqrt()) {
    if (mu_hat.size() != sigma.dim())
        throw DimensionError("WhiteningMap: location/scatter dimension mismatch");
}

Sample whiten(const WhiteningMap& map, const Sample& x) {
    if (x.m() != map.dim()) throw DimensionError("whiten: dimension mismatch");
    Sample out;
    out.data = (x.data.rowwise() - map.mu_hat.transpose()) * map.sigma_inv_sqrt;
    if (!out.data.allFinite()) throw DataError("whiten: non-finite output");
    return out;
}

Sample unwhiten(const WhiteningMap& map, const Sample& z) {
    if (z.m() != map.dim()) throw DimensionError("unwhiten: dimension mismatch");
    Sample out;
    out.data = (z.data * map.sigma_sqrt).rowwise() + map.mu_hat.transpose();
    return out;
}

}  // namespace nngof
