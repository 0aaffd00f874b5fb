#pragma once

#include <Eigen/Core>

#include "nngof/errors.hpp"

namespace nngof {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// An n x m observation matrix; rows are observations.
struct Sample {
    Matrix data;

    Sample() = default;
    explicit Sample(Matrix d) : data(std::move(d)) { validate(); }

    Index n() const { return data.rows(); }
    Index m() const { return data.cols(); }

    void validate() const {
        if (data.rows() < 1 || data.cols() < 1)
            throw DimensionError("Sample: need at least one row and one column");
        if (!data.allFinite())
            throw DataError("Sample: non-finite entry");
    }
};

}  // namespace nngof
