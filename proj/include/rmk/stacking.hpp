#pragma once

#include <Eigen/Dense>
#include <string>

#include "rmk/errors.hpp"

namespace rmk {

enum class StackingMode { plain, ridge, sparse };

std::string stacking_mode_name(StackingMode mode);
StackingMode parse_stacking_mode(const std::string& name);

// Combiner objective: 1/2 |y - F a|^2, plus lambda2 |a|^2 in ridge mode or
// lambda1 |a|_1 in sparse mode.
struct StackingConfig {
  StackingMode mode = StackingMode::plain;
  double lambda2 = 0.0;
  double lambda1 = 0.0;

  void validate() const;
};

// Combiner weights alpha for the N x P matrix of per-tap predictions F.
//   plain : least squares via column-pivoted QR; requires N >= P and full
//           column rank, certified by |F^T (y - F a)| < 1e-8 |F^T y|.
//   ridge : normal equations (F^T F + lambda2 I) a = F^T y.
//   sparse: cyclic coordinate descent with soft thresholding, stopped on the
//           subgradient optimality conditions at 1e-8.
Eigen::VectorXd fit_stacking(const Eigen::MatrixXd& F, const Eigen::VectorXd& y,
                             const StackingConfig& cfg);

}  // namespace rmk
