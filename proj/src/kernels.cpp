#include "rmk/kernels.hpp"

#include <cmath>

namespace rmk {

std::string kernel_kind_name(KernelKind kind) {
  switch (kind) {
    case KernelKind::rbf: return "rbf";
    case KernelKind::linear: return "linear";
    case KernelKind::polynomial: return "polynomial";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(const std::string& name) {
  if (name == "rbf" || name == "gaussian") return KernelKind::rbf;
  if (name == "linear") return KernelKind::linear;
  if (name == "polynomial" || name == "poly") return KernelKind::polynomial;
  throw invalid_argument_error("unknown kernel kind: " + name);
}

void BaseKernel::validate() const {
  if (kind == KernelKind::rbf && !(width > 0.0))
    throw invalid_argument_error("RBF kernel requires width > 0");
  if (kind == KernelKind::polynomial) {
    if (degree < 1) throw invalid_argument_error("polynomial kernel requires degree >= 1");
    if (offset < 0.0)
      throw invalid_argument_error("polynomial kernel requires offset >= 0 to stay PSD");
  }
}

double base_kernel_eval(const BaseKernel& k, std::span<const double> x,
                        std::span<const double> y) {
  if (x.size() != y.size())
    throw invalid_argument_error("base_kernel_eval: dimension mismatch");
  if (x.empty()) throw invalid_argument_error("base_kernel_eval: empty input");
  switch (k.kind) {
    case KernelKind::rbf: {
      double d2 = 0.0;
      for (size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
      }
      return std::exp(-d2 / (2.0 * k.width * k.width));
    }
    case KernelKind::linear: {
      double dot = 0.0;
      for (size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelKind::polynomial: {
      double dot = 0.0;
      for (size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::pow(dot + k.offset, k.degree);
    }
  }
  throw invalid_argument_error("base_kernel_eval: unknown kernel kind");
}

std::vector<double> embed(std::span<const double> series, int window, int t) {
  if (window < 1) throw invalid_argument_error("embed: window must be >= 1");
  if (t < 0 || t >= static_cast<int>(series.size()))
    throw invalid_argument_error("embed: time index out of range");
  std::vector<double> v(window, 0.0);
  for (int j = 0; j < window; ++j) {
    const int idx = t - j;
    if (idx >= 0) v[j] = series[idx];
  }
  return v;
}

Eigen::MatrixXd embed_series(std::span<const double> series, int window) {
  if (window < 1) throw invalid_argument_error("embed_series: window must be >= 1");
  const int n = static_cast<int>(series.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, window);
  for (int t = 0; t < n; ++t)
    for (int j = 0; j < window && t - j >= 0; ++j) X(t, j) = series[t - j];
  return X;
}

namespace {

double transform_product(const BaseKernel& k, double dot, double sq_m, double sq_n) {
  switch (k.kind) {
    case KernelKind::rbf: {
      const double d2 = std::max(0.0, sq_m + sq_n - 2.0 * dot);
      return std::exp(-d2 / (2.0 * k.width * k.width));
    }
    case KernelKind::linear:
      return dot;
    case KernelKind::polynomial:
      return std::pow(dot + k.offset, k.degree);
  }
  return 0.0;
}

}  // namespace

Eigen::MatrixXd base_gram(const BaseKernel& k, const Eigen::MatrixXd& X) {
  k.validate();
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd dots = X * X.transpose();
  Eigen::MatrixXd G(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c; r < n; ++r) {
      G(r, c) = transform_product(k, dots(r, c), dots(r, r), dots(c, c));
      G(c, r) = G(r, c);
    }
  }
  return G;
}

Eigen::VectorXd base_kernel_column(const BaseKernel& k, const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& q) {
  if (X.cols() != q.size())
    throw invalid_argument_error("base_kernel_column: dimension mismatch");
  const Eigen::Index n = X.rows();
  const Eigen::VectorXd dots = X * q;
  const double qq = q.squaredNorm();
  Eigen::VectorXd col(n);
  for (Eigen::Index r = 0; r < n; ++r)
    col(r) = transform_product(k, dots(r), X.row(r).squaredNorm(), qq);
  return col;
}

}  // namespace rmk
