#pragma once

#include <stdexcept>
#include <string>

namespace nngof {

// Input shape/content problems (bad dimensions, non-finite values, ...).
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NotSymmetricError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class NotPositiveDefiniteError : public std::runtime_error {
  public:
    NotPositiveDefiniteError(const std::string& what, double lambda_min)
        : std::runtime_error(what), lambda_min_(lambda_min) {}
    double lambda_min() const { return lambda_min_; }

  private:
    double lambda_min_;
};

class ConditioningError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Iterative procedure failed to reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ZeroDenominatorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// CSV / config ingestion problems.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace nngof
