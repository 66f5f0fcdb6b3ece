#include "rmk/stacking.hpp"

#include <cmath>

namespace rmk {

std::string stacking_mode_name(StackingMode mode) {
  switch (mode) {
    case StackingMode::plain: return "plain";
    case StackingMode::ridge: return "ridge";
    case StackingMode::sparse: return "sparse";
  }
  return "unknown";
}

StackingMode parse_stacking_mode(const std::string& name) {
  if (name == "plain") return StackingMode::plain;
  if (name == "ridge") return StackingMode::ridge;
  if (name == "sparse") return StackingMode::sparse;
  throw invalid_argument_error("unknown stacking mode: " + name);
}

void StackingConfig::validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0)
    throw invalid_argument_error("StackingConfig: regularization strengths must be >= 0");
}

namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

Eigen::VectorXd fit_plain(const Eigen::MatrixXd& F, const Eigen::VectorXd& y) {
  const Eigen::Index n = F.rows(), p = F.cols();
  if (n < p)
    throw invalid_argument_error(
        "fit_stacking: fewer samples than predictors; use ridge or sparse mode");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(F);
  if (qr.rank() < p)
    throw numeric_error("fit_stacking: prediction matrix is rank deficient; "
                        "use ridge or sparse mode");
  Eigen::VectorXd alpha = qr.solve(y);
  const double gnorm = (F.transpose() * (y - F * alpha)).norm();
  const double bnorm = (F.transpose() * y).norm();
  if (bnorm > 0.0 && gnorm > 1e-8 * bnorm)
    throw numeric_error("fit_stacking: normal-equation residual above tolerance");
  return alpha;
}

Eigen::VectorXd fit_ridge(const Eigen::MatrixXd& F, const Eigen::VectorXd& y,
                          double lambda2) {
  Eigen::MatrixXd G = F.transpose() * F;
  G.diagonal().array() += lambda2;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw numeric_error("fit_stacking: ridge normal equations not solvable");
  return ldlt.solve(F.transpose() * y);
}

Eigen::VectorXd fit_sparse(const Eigen::MatrixXd& F, const Eigen::VectorXd& y,
                           double lambda1) {
  const Eigen::Index p = F.cols();
  const Eigen::MatrixXd G = F.transpose() * F;
  const Eigen::VectorXd b = F.transpose() * y;
  const double tol = 1e-8 * std::max(1.0, b.cwiseAbs().maxCoeff());

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd grad = b;  // b - G alpha
  const int max_sweeps = 100000;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (Eigen::Index i = 0; i < p; ++i) {
      if (G(i, i) <= 0.0) {
        alpha(i) = 0.0;
        continue;
      }
      const double rho = grad(i) + G(i, i) * alpha(i);
      const double updated = soft_threshold(rho, lambda1) / G(i, i);
      const double delta = updated - alpha(i);
      if (delta != 0.0) {
        alpha(i) = updated;
        grad -= delta * G.col(i);
      }
    }
    bool optimal = true;
    for (Eigen::Index i = 0; i < p; ++i) {
      const double g = grad(i);
      const bool ok = alpha(i) == 0.0
                          ? std::abs(g) <= lambda1 + tol
                          : std::abs(g - lambda1 * (alpha(i) > 0 ? 1.0 : -1.0)) <= tol;
      if (!ok) {
        optimal = false;
        break;
      }
    }
    if (optimal) return alpha;
  }
  throw numeric_error("fit_stacking: coordinate descent did not converge");
}

}  // namespace

Eigen::VectorXd fit_stacking(const Eigen::MatrixXd& F, const Eigen::VectorXd& y,
                             const StackingConfig& cfg) {
  cfg.validate();
  if (F.rows() != y.size())
    throw invalid_argument_error("fit_stacking: prediction/target size mismatch");
  if (F.cols() == 0) throw invalid_argument_error("fit_stacking: no predictors");
  switch (cfg.mode) {
    case StackingMode::plain: return fit_plain(F, y);
    case StackingMode::ridge: return fit_ridge(F, y, cfg.lambda2);
    case StackingMode::sparse: return fit_sparse(F, y, cfg.lambda1);
  }
  throw invalid_argument_error("fit_stacking: unknown mode");
}

}  // namespace rmk
