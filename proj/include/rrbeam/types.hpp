#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rrbeam {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Lower bound reported for output SINR when the signal term vanishes.
inline constexpr double kSinrFloorDb = -300.0;

/// Raised when a recursion or solve hits a numerical hazard
/// (vanishing denominator, rank deficiency, non-convergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised for inputs that violate an operation's preconditions.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Returns (m + m^H) / 2.
inline CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) * 0.5; }

}  // namespace rrbeam
