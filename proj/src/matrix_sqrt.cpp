#include "onestep/matrix_sqrt.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "onestep/errors.hpp"

namespace onestep {

Eigen::MatrixXd matrix_sqrt_psd(const Eigen::MatrixXd& B, double tol) {
  const Eigen::Index n = B.rows();
  if (B.cols() != n) throw NotPsdError("diffusion matrix is not square");
  if (n == 0) return B;
  if (!B.allFinite()) throw NotPsdError("diffusion matrix has non-finite entries");

  const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
  const double asym = (B - B.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    std::ostringstream msg;
    msg << "diffusion matrix not symmetric (max asymmetry " << asym << ")";
    throw NotPsdError(msg.str());
  }

  if (n == 1) {
    const double v = B(0, 0);
    // The lone eigenvalue is also the norm, so any negative value is out of
    // tolerance.
    if (v < 0.0) {
      std::ostringstream msg;
      msg << "diffusion not PSD (eigenvalue " << v << ")";
      throw NotPsdError(msg.str());
    }
    return Eigen::MatrixXd::Constant(1, 1, v > 0.0 ? std::sqrt(v) : 0.0);
  }
  if ((B.array() == 0.0).all()) return Eigen::MatrixXd::Zero(n, n);

  const Eigen::MatrixXd sym = 0.5 * (B + B.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NotPsdError("eigendecomposition failed");

  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double norm = lambda.cwiseAbs().maxCoeff();
  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda(i) < -tol * norm) {
      std::ostringstream msg;
      msg << "diffusion not PSD (eigenvalue " << lambda(i) << ", norm " << norm << ")";
      throw NotPsdError(msg.str());
    }
    root(i) = lambda(i) > 0.0 ? std::sqrt(lambda(i)) : 0.0;
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd b = v * root.asDiagonal() * v.transpose();
  return 0.5 * (b + b.transpose());
}

}  // namespace onestep
