#pragma once

#include <Eigen/Dense>

namespace onestep {

/// Default relative tolerance for asymmetry and negative eigenvalues.
inline constexpr double kPsdTolerance = 1e-9;

/// Symmetric square root b of a symmetric positive semidefinite B, so that
/// b b^T = B. Eigenvalues in [-tol*|B|, 0) are clamped to zero, where |B| is
/// the spectral norm. Throws NotPsdError for asymmetry or an eigenvalue
/// below -tol*|B|.
Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& B, double tol = kPsdTolerance);

}  // namespace onestep
