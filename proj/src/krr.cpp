#include "rmk/krr.hpp"

#include <cmath>
#include <string>

namespace rmk {

namespace {

constexpr double kResidualTol = 1e-8;

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& K, double c) {
  if (K.rows() != K.cols())
    throw invalid_argument_error("krr_fit: kernel matrix must be square");
  if (c < 0.0) throw invalid_argument_error("krr_fit: regularizer must be >= 0");
  const double scale = std::max(1.0, K.cwiseAbs().maxCoeff());
  if ((K - K.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw invalid_argument_error("krr_fit: kernel matrix is not symmetric");

  Eigen::MatrixXd A = K;
  A.diagonal().array() += c;
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw numeric_error(
        "krr_fit: K + cI is not positive definite; increase the regularizer c");
  return llt;
}

Eigen::VectorXd solve_refined(const Eigen::LLT<Eigen::MatrixXd>& llt,
                              const Eigen::MatrixXd& K, double c,
                              const Eigen::VectorXd& y) {
  Eigen::VectorXd beta = llt.solve(y);
  Eigen::VectorXd resid = y - K * beta - c * beta;
  beta += llt.solve(resid);
  resid = y - K * beta - c * beta;
  const double ynorm = y.norm();
  if (ynorm > 0.0 && resid.norm() > kResidualTol * ynorm)
    throw numeric_error("krr_fit: solve residual " + std::to_string(resid.norm() / ynorm) +
                        " exceeds tolerance; K + cI is numerically singular, "
                        "increase the regularizer c");
  return beta;
}

}  // namespace

Eigen::VectorXd krr_fit(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                        double c) {
  if (K.rows() != y.size())
    throw invalid_argument_error("krr_fit: kernel/target size mismatch");
  const auto llt = factorize(K, c);
  return solve_refined(llt, K, c, y);
}

KrrSolution krr_fit_detailed(const Eigen::MatrixXd& K, const Eigen::VectorXd& y,
                             double c) {
  if (K.rows() != y.size())
    throw invalid_argument_error("krr_fit: kernel/target size mismatch");
  const auto llt = factorize(K, c);
  KrrSolution sol;
  sol.beta = solve_refined(llt, K, c, y);
  const Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(K.rows(), K.rows()));
  sol.inv_diag = inv.diagonal();
  return sol;
}

}  // namespace rmk
