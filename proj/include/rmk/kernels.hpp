#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rmk/errors.hpp"

namespace rmk {

enum class KernelKind { rbf, linear, polynomial };

std::string kernel_kind_name(KernelKind kind);
KernelKind parse_kernel_kind(const std::string& name);

// Scalar base kernel acting on (time-delay embedded) input vectors.
// RBF uses exp(-|x-y|^2 / (2 sigma^2)); polynomial uses (x.y + offset)^degree.
struct BaseKernel {
  KernelKind kind = KernelKind::rbf;
  double width = 1.0;   // RBF bandwidth sigma
  int degree = 2;       // polynomial degree
  double offset = 1.0;  // polynomial additive constant

  static BaseKernel rbf(double sigma) { return {KernelKind::rbf, sigma, 2, 1.0}; }
  static BaseKernel linear() { return {KernelKind::linear, 1.0, 2, 1.0}; }
  static BaseKernel polynomial(int degree, double offset = 1.0) {
    return {KernelKind::polynomial, 1.0, degree, offset};
  }

  void validate() const;
};

double base_kernel_eval(const BaseKernel& k, std::span<const double> x,
                        std::span<const double> y);

// Embedding [x_t, x_{t-1}, ..., x_{t-window+1}]; indices before the series
// start are zero-padded.
std::vector<double> embed(std::span<const double> series, int window, int t);

// N x window matrix whose row t is the embedding at time t.
Eigen::MatrixXd embed_series(std::span<const double> series, int window);

// Gram matrix of the rows of X, exactly symmetric (lower triangle mirrored).
Eigen::MatrixXd base_gram(const BaseKernel& k, const Eigen::MatrixXd& X);

// kappa(row_t, q) for every row of X against one query embedding q.
Eigen::VectorXd base_kernel_column(const BaseKernel& k, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& q);

}  // namespace rmk
