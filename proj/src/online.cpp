#include "rmk/online.hpp"

#include <cmath>
#include <string>

namespace rmk {

OnlineFilter::OnlineFilter(const OnlineConfig& cfg)
    : cfg_(cfg), stream_(cfg.kernel, cfg.budget) {
  if (!(cfg_.eta > 0.0)) throw invalid_argument_error("OnlineFilter: eta must be > 0");
  if (!(cfg_.nu >= 0.0)) throw invalid_argument_error("OnlineFilter: nu must be >= 0");
  const int p = cfg_.kernel.taps;
  coeff_.resize(p);
  if (cfg_.alpha_init.empty()) {
    alpha_ = Eigen::VectorXd::Constant(p, 1.0 / p);
  } else {
    if (static_cast<int>(cfg_.alpha_init.size()) != p)
      throw invalid_argument_error("OnlineFilter: alpha_init size mismatch");
    alpha_ = Eigen::Map<const Eigen::VectorXd>(cfg_.alpha_init.data(), p);
  }
  last_outputs_ = Eigen::VectorXd::Zero(p);
}

double OnlineFilter::step(double x, double y) {
  const int p = cfg_.kernel.taps;
  const std::vector<Eigen::VectorXd> cols = stream_.push(x);
  const int n = stream_.size() - 1;  // index of the new sample

  Eigen::VectorXd pre(p), post(p);
  for (int i = 0; i < p; ++i) {
    double f = 0.0;
    for (int m = 0; m < n; ++m) f += coeff_[i][m] * cols[i](m);
    pre(i) = f;
    const double a_new = cfg_.eta * (y - f);
    coeff_[i].push_back(a_new);
    post(i) = f + a_new * cols[i](n);
  }
  last_outputs_ = cfg_.pre_update_outputs ? pre : post;

  const double reported = alpha_.dot(last_outputs_);
  const double err = y - alpha_.dot(post);
  alpha_ += cfg_.nu * err * post;

  const double sq = (y - reported) * (y - reported);
  if (!(sq <= kSquaredErrorGuard))
    throw numeric_error("OnlineFilter: diverged at step " + std::to_string(n) +
                        " (squared error " + std::to_string(sq) + ")");
  if (!(alpha_.norm() <= kAlphaNormGuard))
    throw numeric_error("OnlineFilter: combiner weights diverged at step " +
                        std::to_string(n));
  return reported;
}

OnlineReport assemble_online_report(std::vector<double> predictions,
                                    std::span<const double> targets) {
  const int n = static_cast<int>(predictions.size());
  if (n == 0) throw invalid_argument_error("online report: empty stream");
  if (static_cast<int>(targets.size()) != n)
    throw invalid_argument_error("online report: prediction/target length mismatch");

  OnlineReport report;
  report.predictions = std::move(predictions);
  report.squared_errors.resize(n);
  report.learning_curve.resize(n);
  double window_sum = 0.0;
  for (int t = 0; t < n; ++t) {
    const double e = report.predictions[t] - targets[t];
    report.squared_errors[t] = e * e;
    window_sum += report.squared_errors[t];
    if (t >= kLearningCurveWindow) window_sum -= report.squared_errors[t - kLearningCurveWindow];
    report.learning_curve[t] = window_sum / std::min(t + 1, kLearningCurveWindow);
  }

  report.eval_begin = std::max(0, n - std::max(1, n / 5));
  report.nmse_db =
      nmse_db({report.predictions.data() + report.eval_begin,
               static_cast<size_t>(n - report.eval_begin)},
              targets.subspan(report.eval_begin));
  return report;
}

OnlineReport run_online(const OnlineConfig& cfg, const SeriesDataset& ds) {
  if (ds.size() == 0) throw invalid_argument_error("run_online: empty stream");
  OnlineFilter filter(cfg);
  std::vector<double> predictions;
  predictions.reserve(ds.size());
  for (int t = 0; t < ds.size(); ++t)
    predictions.push_back(filter.step(ds.x[t], ds.y[t]));
  return assemble_online_report(std::move(predictions),
                                {ds.y.data(), static_cast<size_t>(ds.size())});
}

OnlineReport klms_baseline(const SeriesDataset& ds, const BaseKernel& kernel,
                           int embed_len, double eta, bool pre_update_outputs,
                           std::optional<int> budget) {
  kernel.validate();
  if (!(eta > 0.0)) throw invalid_argument_error("klms_baseline: eta must be > 0");
  if (ds.size() == 0) throw invalid_argument_error("klms_baseline: empty stream");
  const int window = embed_len > 0 ? embed_len : 1;

  std::vector<std::vector<double>> dict;
  std::vector<double> coeff;
  std::vector<double> predictions;
  predictions.reserve(ds.size());

  for (int t = 0; t < ds.size(); ++t) {
    if (budget && t >= *budget)
      throw capacity_error("klms_baseline: dictionary budget exhausted");
    const std::vector<double> u = embed(ds.x, window, t);
    double f = 0.0;
    for (size_t m = 0; m < dict.size(); ++m)
      f += coeff[m] * base_kernel_eval(kernel, dict[m], u);
    const double a_new = eta * (ds.y[t] - f);
    const double post = f + a_new * base_kernel_eval(kernel, u, u);
    dict.push_back(u);
    coeff.push_back(a_new);

    const double reported = pre_update_outputs ? f : post;
    predictions.push_back(reported);
    const double sq = (ds.y[t] - reported) * (ds.y[t] - reported);
    if (!(sq <= kSquaredErrorGuard))
      throw numeric_error("klms_baseline: diverged at step " + std::to_string(t));
  }
  return assemble_online_report(std::move(predictions),
                                {ds.y.data(), static_cast<size_t>(ds.size())});
}

}  // namespace rmk
