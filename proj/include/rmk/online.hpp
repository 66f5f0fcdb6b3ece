#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rmk/datasets.hpp"
#include "rmk/recursive.hpp"

namespace rmk {

// Bank of P KLMS filters over the recursive kernel taps with an adaptively
// learned linear combiner. The reported prediction for step n uses the
// combiner weights from step n-1 applied to the post-update tap outputs (the
// same quantity the combiner descent differentiates); set pre_update_outputs
// to score the tap outputs from before the coefficient append instead.
struct OnlineConfig {
  RecursiveKernelConfig kernel;
  double eta = 0.1;  // tap filter step size
  double nu = 0.01;  // combiner step size
  std::vector<double> alpha_init;  // empty = uniform 1/P
  bool pre_update_outputs = false;
  std::optional<int> budget;
};

class OnlineFilter {
 public:
  explicit OnlineFilter(const OnlineConfig& cfg);

  // Processes one sample pair and returns the reported prediction.
  double step(double x, double y);

  int steps() const { return stream_.size(); }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& last_tap_outputs() const { return last_outputs_; }
  const std::vector<std::vector<double>>& coefficients() const { return coeff_; }

 private:
  OnlineConfig cfg_;
  StreamKernelState stream_;
  std::vector<std::vector<double>> coeff_;  // a^i, one per tap
  Eigen::VectorXd alpha_;
  Eigen::VectorXd last_outputs_;
};

struct OnlineReport {
  std::vector<double> predictions;
  std::vector<double> squared_errors;
  std::vector<double> learning_curve;  // running MSE over a 50-sample window
  double nmse_db = 0.0;
  int eval_begin = 0;  // evaluation window start (final 20% of the stream)
};

// Streams the whole dataset through an OnlineFilter.
OnlineReport run_online(const OnlineConfig& cfg, const SeriesDataset& ds);

// Plain single-kernel KLMS on time-delay embeddings; written directly
// against the base kernel so it doubles as the reference for the taps = 1
// degeneration of the recursive bank.
OnlineReport klms_baseline(const SeriesDataset& ds, const BaseKernel& kernel,
                           int embed_len, double eta,
                           bool pre_update_outputs = false,
                           std::optional<int> budget = std::nullopt);

// Shared report assembly (smoothed curve + final-window nMSE).
OnlineReport assemble_online_report(std::vector<double> predictions,
                                    std::span<const double> targets);

constexpr int kLearningCurveWindow = 50;
constexpr double kAlphaNormGuard = 1e6;
constexpr double kSquaredErrorGuard = 1e12;

}  // namespace rmk
