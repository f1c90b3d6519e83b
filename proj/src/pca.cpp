#include "tennis/pca.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "tennis/error.hpp"

namespace tennis::indicators {

Eigen::MatrixXd standardize(const Eigen::MatrixXd& matrix, const PcaResult& pca) {
  Eigen::MatrixXd z = matrix.rowwise() - pca.mean.transpose();
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    if (pca.stddev(j) > 0)
      z.col(j) /= pca.stddev(j);
    else
      z.col(j).setZero();
  }
  return z;
}

PcaResult pca_reduce(const Eigen::MatrixXd& matrix, int k, std::vector<std::string>* warnings) {
  const Eigen::Index n = matrix.rows();
  const Eigen::Index p = matrix.cols();
  if (n < 2) throw ArgumentError("pca_reduce: need at least 2 rows");
  if (k < 1 || k > std::min<Eigen::Index>(n - 1, p))
    throw ArgumentError("pca_reduce: k = " + std::to_string(k) + " outside [1, min(n-1, p)]");

  PcaResult out;
  out.mean = matrix.colwise().mean().transpose();
  out.stddev.resize(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    const double ss = (matrix.col(j).array() - out.mean(j)).square().sum();
    out.stddev(j) = std::sqrt(ss / static_cast<double>(n - 1));
    if (out.stddev(j) == 0 && warnings)
      warnings->push_back("pca: column " + std::to_string(j) + " has zero variance");
  }
  const Eigen::MatrixXd z = standardize(matrix, out);
  const Eigen::MatrixXd cov = (z.transpose() * z) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error("pca_reduce: eigen-decomposition failed");

  // Eigen returns ascending eigenvalues.
  out.loadings.resize(k, p);
  out.explained_variance.resize(k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = p - 1 - c;
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    out.loadings.row(c) = v.transpose();
    out.explained_variance(c) = std::max(0.0, solver.eigenvalues()(src));
  }
  out.scores = z * out.loadings.transpose();
  return out;
}

}  // namespace tennis::indicators
