#ifndef HYPERWALK_TYPES_HPP
#define HYPERWALK_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hyperwalk {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;

// Row-major so that S.row(i) is contiguous; similarity scoring is row-heavy.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid input or violated precondition.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
struct ConvergenceError : Error {
    double residual;
    ConvergenceError(const std::string& what, double residual_)
        : Error(what), residual(residual_) {}
};

/// Nonlinear fit produced non-finite parameters.
struct FitError : Error {
    using Error::Error;
};

}  // namespace hyperwalk

#endif
