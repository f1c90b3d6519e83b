#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tennis::indicators {

struct PcaResult {
  Eigen::MatrixXd loadings;            // k x p, orthonormal rows
  Eigen::MatrixXd scores;              // n x k
  Eigen::VectorXd explained_variance;  // k, non-increasing
  Eigen::VectorXd mean;                // p
  Eigen::VectorXd stddev;              // p, 0 for constant columns
};

/// Standardizes columns (sample std), diagonalizes their covariance and keeps the top k
/// components. Each component is signed so its largest-magnitude loading is non-negative.
PcaResult pca_reduce(const Eigen::MatrixXd& matrix, int k, std::vector<std::string>* warnings = nullptr);

/// Standardized copy of `matrix` using the moments stored in `pca`.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& matrix, const PcaResult& pca);

}  // namespace tennis::indicators
