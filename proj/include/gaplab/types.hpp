#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gaplab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "0.1.0";

/// Absolute Hermiticity tolerance carried by every matrix-valued contract.
inline constexpr double kHermitianTol = 1e-12;

/// Thrown when an eigensolver fails to meet its contract (non-convergence,
/// size cap exceeded).  CLI maps this family to exit code 2.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense dimension exceeds the configured cap.
struct CapExceededError : SolverError {
    using SolverError::SolverError;
};

inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
    if (m.rows() != m.cols()) return false;
    return hermiticity_defect(m) <= tol;
}

inline void require_hermitian(const Matrix& m, const char* who) {
    if (!is_hermitian(m))
        throw std::invalid_argument(std::string(who) + ": matrix is not Hermitian within 1e-12");
}

}  // namespace gaplab
