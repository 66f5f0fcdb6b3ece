#pragma once

#include <span>
#include <string>
#include <vector>

#include "rmk/datasets.hpp"
#include "rmk/krr.hpp"
#include "rmk/recursive.hpp"
#include "rmk/stacking.hpp"

namespace rmk {

// P kernel ridge regressors (one per tap) plus a learned linear combiner.
// The training inputs are kept so the tap kernels can be extended to query
// times; the recursion couples samples through the whole sequence.
struct StackedBatchModel {
  RecursiveKernelConfig kernel;
  double ridge_c = 0.0;
  std::vector<Eigen::VectorXd> beta;  // per-tap dual coefficients, length N
  Eigen::VectorXd alpha;              // combiner weights, length P
  std::vector<double> train_series;
  Eigen::MatrixXd train_predictions;  // F, N x P, as used for the combiner fit

  int train_size() const { return static_cast<int>(train_series.size()); }
};

struct BatchTrainOptions {
  StackingConfig stacking;
  bool leave_one_out = false;  // build F from leave-one-out predictions
};

StackedBatchModel train_batch(std::span<const double> x, std::span<const double> y,
                              const RecursiveKernelConfig& cfg, double ridge_c,
                              const BatchTrainOptions& opts = {});

// Combiner prediction sum_i alpha_i sum_m beta_i(m) kappa_i(m, query) from
// per-tap kernel columns covering at least the training indices.
double stacked_predict(const StackedBatchModel& model,
                       std::span<const Eigen::VectorXd> tap_columns);

// Predictions over [begin, end) of a series whose prefix is the training
// sequence. The range must lie entirely inside the training window or
// entirely after it; straddling the boundary is an error.
Eigen::VectorXd predict_series(const StackedBatchModel& model,
                               std::span<const double> full_series, int begin,
                               int end);

// Single-kernel ridge baseline over one derived Gram matrix: the base kernel
// on embedded inputs (taps = 1) or the composite average of the tap stack.
struct CompositeKrrModel {
  RecursiveKernelConfig kernel;
  double ridge_c = 0.0;
  Eigen::VectorXd beta;
  std::vector<double> train_series;

  int train_size() const { return static_cast<int>(train_series.size()); }
};

CompositeKrrModel train_composite(std::span<const double> x,
                                  std::span<const double> y,
                                  const RecursiveKernelConfig& cfg, double ridge_c);

Eigen::VectorXd predict_series(const CompositeKrrModel& model,
                               std::span<const double> full_series, int begin,
                               int end);

enum class BatchFamily {
  rbf_embedding,      // base kernel on embeddings, single KRR
  composite_average,  // KRR on the tap average
  stacking_plain,
  stacking_ridge,
  stacking_sparse,
};

std::string batch_family_name(BatchFamily family);
BatchFamily parse_batch_family(const std::string& name);

// Hyperparameter grid. Axes that a family does not use are ignored (the
// rbf_embedding family fixes taps = 1; lambda only feeds the regularized
// stacking modes).
struct GridAxes {
  std::vector<double> sigma{1.0};
  std::vector<double> mu{0.7};
  std::vector<int> taps{5};
  std::vector<double> ridge_c{1e-4};
  std::vector<int> embed{1};
  std::vector<double> lambda{0.0};
  KernelKind kind = KernelKind::rbf;
  int poly_degree = 2;
  double poly_offset = 1.0;
};

struct GridPoint {
  double sigma = 1.0;
  double mu = 1.0;
  int taps = 1;
  double ridge_c = 0.0;
  int embed = 1;
  double lambda = 0.0;

  RecursiveKernelConfig kernel_config(const GridAxes& axes) const;
  std::string describe() const;
};

struct GridSearchResult {
  GridPoint best;
  double best_nmse_db = 0.0;
  std::vector<std::pair<GridPoint, double>> evaluated;  // exhaustive table
};

// Exhaustive search minimizing validation nMSE; ties broken by smaller taps,
// then smaller embedding, then smaller ridge constant. Grid points whose
// solve fails (e.g. singular system at c = 0) score +infinity.
GridSearchResult grid_search(const SeriesDataset& ds, BatchFamily family,
                             const GridAxes& axes);

// Trains the family on the training split with the given point and returns
// predictions over [begin, end).
Eigen::VectorXd evaluate_grid_point(const SeriesDataset& ds, BatchFamily family,
                                    const GridAxes& axes, const GridPoint& point,
                                    int begin, int end);

}  // namespace rmk
