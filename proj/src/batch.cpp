#include "rmk/batch.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

namespace rmk {

namespace {

void check_query_range(int train_size, int series_size, int begin, int end) {
  if (begin < 0 || end > series_size || begin >= end)
    throw invalid_argument_error("predict_series: bad query range");
  const bool inside = end <= train_size;
  const bool after = begin >= train_size;
  if (!inside && !after)
    throw invalid_argument_error(
        "predict_series: query range straddles the training boundary");
}

}  // namespace

StackedBatchModel train_batch(std::span<const double> x, std::span<const double> y,
                              const RecursiveKernelConfig& cfg, double ridge_c,
                              const BatchTrainOptions& opts) {
  cfg.validate();
  opts.stacking.validate();
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(y.size()) != n)
    throw invalid_argument_error("train_batch: input/target length mismatch");
  if (n < cfg.taps + 1)
    throw invalid_argument_error("train_batch: need at least taps + 1 samples");

  const KernelStack stack = kernel_stack_fast(cfg, x);
  const Eigen::Map<const Eigen::VectorXd> yv(y.data(), n);

  StackedBatchModel model;
  model.kernel = cfg;
  model.ridge_c = ridge_c;
  model.train_series.assign(x.begin(), x.end());
  model.beta.reserve(cfg.taps);
  model.train_predictions.resize(n, cfg.taps);

  for (int i = 0; i < cfg.taps; ++i) {
    if (opts.leave_one_out) {
      if (!(ridge_c > 0.0))
        throw invalid_argument_error("train_batch: leave-one-out needs c > 0");
      const KrrSolution sol = krr_fit_detailed(stack.taps[i], yv, ridge_c);
      model.beta.push_back(sol.beta);
      // e_loo = e / (1 - H_nn) with 1 - H_nn = c * diag((K + cI)^{-1}).
      const Eigen::VectorXd fit = stack.taps[i] * sol.beta;
      for (int m = 0; m < n; ++m) {
        const double leverage = ridge_c * sol.inv_diag(m);
        if (leverage <= 0.0)
          throw numeric_error("train_batch: leave-one-out leverage underflow");
        model.train_predictions(m, i) = yv(m) - (yv(m) - fit(m)) / leverage;
      }
    } else {
      model.beta.push_back(krr_fit(stack.taps[i], yv, ridge_c));
      model.train_predictions.col(i) = stack.taps[i] * model.beta.back();
    }
  }

  model.alpha = fit_stacking(model.train_predictions, yv, opts.stacking);
  return model;
}

double stacked_predict(const StackedBatchModel& model,
                       std::span<const Eigen::VectorXd> tap_columns) {
  const int p = model.kernel.taps;
  if (static_cast<int>(tap_columns.size()) != p)
    throw invalid_argument_error("stacked_predict: tap count mismatch");
  const int n = model.train_size();
  double acc = 0.0;
  for (int i = 0; i < p; ++i) {
    if (tap_columns[i].size() < n)
      throw invalid_argument_error(
          "stacked_predict: column does not cover the training indices");
    acc += model.alpha(i) * model.beta[i].dot(tap_columns[i].head(n));
  }
  return acc;
}

Eigen::VectorXd predict_series(const StackedBatchModel& model,
                               std::span<const double> full_series, int begin,
                               int end) {
  const int n = model.train_size();
  check_query_range(n, static_cast<int>(full_series.size()), begin, end);
  const KernelStack stack =
      kernel_stack_fast(model.kernel, full_series.subspan(0, end));
  Eigen::VectorXd pred = Eigen::VectorXd::Zero(end - begin);
  for (int i = 0; i < model.kernel.taps; ++i)
    pred += model.alpha(i) *
            (stack.taps[i].block(0, begin, n, end - begin).transpose() *
             model.beta[i]);
  return pred;
}

CompositeKrrModel train_composite(std::span<const double> x,
                                  std::span<const double> y,
                                  const RecursiveKernelConfig& cfg, double ridge_c) {
  cfg.validate();
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(y.size()) != n)
    throw invalid_argument_error("train_composite: input/target length mismatch");
  const KernelStack stack = kernel_stack_fast(cfg, x);
  const Eigen::MatrixXd K = composite_average(stack);

  CompositeKrrModel model;
  model.kernel = cfg;
  model.ridge_c = ridge_c;
  model.train_series.assign(x.begin(), x.end());
  model.beta = krr_fit(K, Eigen::Map<const Eigen::VectorXd>(y.data(), n), ridge_c);
  return model;
}

Eigen::VectorXd predict_series(const CompositeKrrModel& model,
                               std::span<const double> full_series, int begin,
                               int end) {
  const int n = model.train_size();
  check_query_range(n, static_cast<int>(full_series.size()), begin, end);
  const KernelStack stack =
      kernel_stack_fast(model.kernel, full_series.subspan(0, end));
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(n, end - begin);
  for (const auto& tap : stack.taps) cross += tap.block(0, begin, n, end - begin);
  cross /= static_cast<double>(model.kernel.taps);
  return cross.transpose() * model.beta;
}

std::string batch_family_name(BatchFamily family) {
  switch (family) {
    case BatchFamily::rbf_embedding: return "rbf-embedding";
    case BatchFamily::composite_average: return "composite-average";
    case BatchFamily::stacking_plain: return "stacking";
    case BatchFamily::stacking_ridge: return "ridge-stacking";
    case BatchFamily::stacking_sparse: return "sparse-stacking";
  }
  return "unknown";
}

BatchFamily parse_batch_family(const std::string& name) {
  if (name == "rbf-embedding" || name == "rbf") return BatchFamily::rbf_embedding;
  if (name == "composite-average" || name == "composite")
    return BatchFamily::composite_average;
  if (name == "stacking") return BatchFamily::stacking_plain;
  if (name == "ridge-stacking") return BatchFamily::stacking_ridge;
  if (name == "sparse-stacking") return BatchFamily::stacking_sparse;
  throw invalid_argument_error("unknown batch model family: " + name);
}

RecursiveKernelConfig GridPoint::kernel_config(const GridAxes& axes) const {
  RecursiveKernelConfig cfg;
  cfg.base.kind = axes.kind;
  cfg.base.width = sigma;
  cfg.base.degree = axes.poly_degree;
  cfg.base.offset = axes.poly_offset;
  cfg.taps = taps;
  cfg.mu = mu;
  cfg.embed_len = embed;
  return cfg;
}

std::string GridPoint::describe() const {
  std::ostringstream os;
  os << "sigma=" << sigma << ";mu=" << mu << ";taps=" << taps
     << ";c=" << ridge_c << ";embed=" << embed << ";lambda=" << lambda;
  return os.str();
}

namespace {

bool family_uses_taps(BatchFamily family) {
  return family != BatchFamily::rbf_embedding;
}

bool family_uses_lambda(BatchFamily family) {
  return family == BatchFamily::stacking_ridge ||
         family == BatchFamily::stacking_sparse;
}

StackingConfig stacking_for(BatchFamily family, double lambda) {
  StackingConfig cfg;
  switch (family) {
    case BatchFamily::stacking_plain: cfg.mode = StackingMode::plain; break;
    case BatchFamily::stacking_ridge:
      cfg.mode = StackingMode::ridge;
      cfg.lambda2 = lambda;
      break;
    case BatchFamily::stacking_sparse:
      cfg.mode = StackingMode::sparse;
      cfg.lambda1 = lambda;
      break;
    default: break;
  }
  return cfg;
}

}  // namespace

Eigen::VectorXd evaluate_grid_point(const SeriesDataset& ds, BatchFamily family,
                                    const GridAxes& axes, const GridPoint& point,
                                    int begin, int end) {
  const RecursiveKernelConfig cfg = point.kernel_config(axes);
  std::span<const double> full{ds.x.data(), static_cast<size_t>(ds.size())};
  switch (family) {
    case BatchFamily::rbf_embedding:
    case BatchFamily::composite_average: {
      const CompositeKrrModel model =
          train_composite(ds.train_x(), ds.train_y(), cfg, point.ridge_c);
      return predict_series(model, full, begin, end);
    }
    default: {
      BatchTrainOptions opts;
      opts.stacking = stacking_for(family, point.lambda);
      const StackedBatchModel model =
          train_batch(ds.train_x(), ds.train_y(), cfg, point.ridge_c, opts);
      return predict_series(model, full, begin, end);
    }
  }
}

GridSearchResult grid_search(const SeriesDataset& ds, BatchFamily family,
                             const GridAxes& axes) {
  ds.validate();
  if (ds.val_end <= ds.train_end)
    throw invalid_argument_error("grid_search: dataset has no validation split");
  const bool taps_axis = family_uses_taps(family);
  const bool lambda_axis = family_uses_lambda(family);
  const std::vector<int> taps = taps_axis ? axes.taps : std::vector<int>{1};
  const std::vector<double> mu = taps_axis ? axes.mu : std::vector<double>{1.0};
  const std::vector<double> lambda =
      lambda_axis ? axes.lambda : std::vector<double>{0.0};
  if (axes.sigma.empty() || mu.empty() || taps.empty() || axes.ridge_c.empty() ||
      axes.embed.empty() || lambda.empty())
    throw invalid_argument_error("grid_search: empty grid axis");

  const std::span<const double> val_targets{ds.y.data() + ds.train_end,
                                            static_cast<size_t>(ds.val_end - ds.train_end)};

  GridSearchResult result;
  result.best_nmse_db = std::numeric_limits<double>::infinity();
  bool have_best = false;

  for (int t : taps)
    for (double m : mu)
      for (double s : axes.sigma)
        for (int e : axes.embed)
          for (double c : axes.ridge_c)
            for (double l : lambda) {
              GridPoint point{s, m, t, c, e, l};
              double score = std::numeric_limits<double>::infinity();
              try {
                const Eigen::VectorXd pred = evaluate_grid_point(
                    ds, family, axes, point, ds.train_end, ds.val_end);
                score = nmse_db({pred.data(), (size_t)pred.size()}, val_targets);
                if (std::isnan(score)) score = std::numeric_limits<double>::infinity();
              } catch (const numeric_error&) {
                // Infeasible corner of the grid (e.g. singular solve at c=0).
              }
              result.evaluated.emplace_back(point, score);
              const bool better =
                  !have_best || score < result.best_nmse_db ||
                  (score == result.best_nmse_db &&
                   std::make_tuple(point.taps, point.embed, point.ridge_c) <
                       std::make_tuple(result.best.taps, result.best.embed,
                                       result.best.ridge_c));
              if (better) {
                have_best = true;
                result.best = point;
                result.best_nmse_db = score;
              }
            }
  if (!have_best) throw invalid_argument_error("grid_search: empty grid");
  if (std::isinf(result.best_nmse_db))
    throw numeric_error("grid_search: every grid point failed to train");
  return result;
}

}  // namespace rmk
