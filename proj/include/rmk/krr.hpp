#pragma once

#include <Eigen/Dense>

#include "rmk/errors.hpp"

namespace rmk {

// Dual coefficients beta = (K + cI)^{-1} y via Cholesky with one refinement
// pass. Requires K symmetric; throws numeric_error when the shifted matrix is
// not positive definite or the relative residual ends up above 1e-8.
Eigen::VectorXd krr_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                        double c);

// Same solve, also returning diag((K + cI)^{-1}) for leave-one-out formulas.
struct KrrSolution {
  Eigen::VectorXd beta;
  Eigen::VectorXd inv_diag;
};
KrrSolution krr_fit_detailed(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                             double c);

}  // namespace rmk
