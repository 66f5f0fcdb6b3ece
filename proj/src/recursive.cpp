#include "rmk/recursive.hpp"

#include <cmath>

namespace rmk {

void RecursiveKernelConfig::validate() const {
  base.validate();
  if (taps < 1) throw invalid_argument_error("RecursiveKernelConfig: taps must be >= 1");
  if (!(mu > 0.0 && mu <= 1.0))
    throw invalid_argument_error("RecursiveKernelConfig: mu must lie in (0, 1]");
  if (embed_len < 0)
    throw invalid_argument_error("RecursiveKernelConfig: embed_len must be >= 0");
}

KernelStack kernel_stack_naive(const RecursiveKernelConfig& cfg,
                               std::span<const double> series) {
  cfg.validate();
  const int n = static_cast<int>(series.size());
  if (n == 0) throw invalid_argument_error("kernel_stack_naive: empty series");

  const double mu = cfg.mu;
  const double mb = 1.0 - mu;   // mu_bar
  const double mu2 = mu * mu;
  const double mb2 = mb * mb;

  KernelStack stack;
  stack.taps.reserve(cfg.taps);
  stack.taps.push_back(base_gram(cfg.base, embed_series(series, cfg.window())));

  for (int i = 1; i < cfg.taps; ++i) {
    const Eigen::MatrixXd& prev = stack.taps[i - 1];
    Eigen::MatrixXd cur = Eigen::MatrixXd::Zero(n, n);
    // Lower triangle only; tap states at the first sample are zero, so row 0
    // and column 0 stay zero.
    for (int t = 1; t < n; ++t) {
      for (int s = t; s < n; ++s) {
        double v = mb2 * cur(s - 1, t - 1) + mu2 * prev(s - 1, t - 1);
        double w = mu2 * mb;
        for (int j = 2; j <= s; ++j) {  // leaky history of the row index
          v += w * prev(s - j, t - 1);
          w *= mb;
        }
        w = mu2 * mb;
        for (int j = 2; j <= t; ++j) {  // leaky history of the column index
          v += w * prev(t - j, s - 1);  // prev is symmetric; column read
          w *= mb;
        }
        cur(s, t) = v;
      }
    }
    cur.triangularView<Eigen::StrictlyUpper>() =
        cur.triangularView<Eigen::StrictlyLower>().transpose();
    stack.taps.push_back(std::move(cur));
  }
  return stack;
}

KernelStack kernel_stack_fast(const RecursiveKernelConfig& cfg,
                              std::span<const double> series) {
  cfg.validate();
  const int n = static_cast<int>(series.size());
  if (n == 0) throw invalid_argument_error("kernel_stack_fast: empty series");

  const double mu = cfg.mu;
  const double mb = 1.0 - mu;
  const double mu2 = mu * mu;
  const double mb2 = mb * mb;

  KernelStack stack;
  stack.taps.reserve(cfg.taps);
  stack.taps.push_back(base_gram(cfg.base, embed_series(series, cfg.window())));
  for (int i = 1; i < cfg.taps; ++i)
    stack.taps.push_back(Eigen::MatrixXd::Zero(n, n));

  // r[i](s) carries the geometric sum over past columns of tap i, consumed
  // when building tap i+1; advanced once per column.
  std::vector<Eigen::VectorXd> r(std::max(0, cfg.taps - 1),
                                 Eigen::VectorXd::Zero(n));

  for (int t = 1; t < n; ++t) {
    for (int i = 1; i < cfg.taps; ++i) {
      const Eigen::MatrixXd& prev = stack.taps[i - 1];
      Eigen::MatrixXd& cur = stack.taps[i];
      Eigen::VectorXd& rv = r[i - 1];
      if (t >= 2) {
        rv *= mb;
        rv.tail(n - 1) += (mb * mu2) * prev.col(t - 2).head(n - 1);
      }
      double c3 = 0.0;
      const auto prev_col = prev.col(t - 1);
      for (int s = 1; s < n; ++s) {
        if (s >= 2) c3 = mb * (c3 + mu2 * prev_col(s - 2));
        cur(s, t) = mb2 * cur(s - 1, t - 1) + mu2 * prev_col(s - 1) + c3 + rv(s);
      }
    }
  }
  return stack;
}

Eigen::MatrixXd composite_average(const KernelStack& stack) {
  if (stack.taps.empty())
    throw invalid_argument_error("composite_average: empty stack");
  Eigen::MatrixXd avg = stack.taps.front();
  for (size_t i = 1; i < stack.taps.size(); ++i) avg += stack.taps[i];
  avg /= static_cast<double>(stack.taps.size());
  return avg;
}

StreamKernelState::StreamKernelState(RecursiveKernelConfig cfg,
                                     std::optional<int> budget)
    : cfg_(std::move(cfg)), budget_(budget) {
  cfg_.validate();
  if (budget_ && *budget_ < 1)
    throw invalid_argument_error("StreamKernelState: budget must be >= 1");
  cols_.resize(cfg_.taps);
  r_.resize(std::max(0, cfg_.taps - 1));
}

double StreamKernelState::kernel_entry(int tap, int m, int t) const {
  if (m > t) std::swap(m, t);
  return cols_[tap][t][m];
}

Eigen::VectorXd StreamKernelState::tap_column(int tap, int t, int rows) const {
  if (tap < 0 || tap >= cfg_.taps || t < 0 || t >= n_ || rows < 0 || rows > n_)
    throw invalid_argument_error("tap_column: index out of range");
  Eigen::VectorXd v(rows);
  for (int m = 0; m < rows; ++m) v(m) = kernel_entry(tap, m, t);
  return v;
}

std::vector<Eigen::VectorXd> StreamKernelState::push(double x) {
  if (budget_ && n_ >= *budget_)
    throw capacity_error("StreamKernelState: dictionary budget of " +
                         std::to_string(*budget_) + " samples exhausted");
  const int n = n_;  // 0-based index of the new sample
  const double mu = cfg_.mu;
  const double mb = 1.0 - mu;
  const double mu2 = mu * mu;
  const double mb2 = mb * mb;

  raw_.push_back(x);
  const std::vector<double> emb = embed(raw_, cfg_.window(), n);
  samples_.push_back(Eigen::Map<const Eigen::VectorXd>(emb.data(), emb.size()));

  // Tap 0: plain base-kernel column against the stored samples.
  std::vector<double> col0(n + 1);
  for (int m = 0; m <= n; ++m)
    col0[m] = base_kernel_eval(cfg_.base,
                               {samples_[m].data(), (size_t)samples_[m].size()},
                               {samples_[n].data(), (size_t)samples_[n].size()});
  cols_[0].push_back(std::move(col0));

  for (int i = 1; i < cfg_.taps; ++i) {
    std::vector<double>& rv = r_[i - 1];
    // Advance r to the new time: r_n(m) = mb * (r_{n-1}(m) + mu^2 K(m-1, n-2)).
    for (int m = static_cast<int>(rv.size()) - 1; m >= 0; --m) {
      const double k = (n >= 2 && m >= 1) ? kernel_entry(i - 1, m - 1, n - 2) : 0.0;
      rv[m] = mb * (rv[m] + mu2 * k);
    }
    // The new row index enters with its geometric sum evaluated directly.
    double rn = 0.0, w = mu2 * mb;
    for (int j = 2; j <= n; ++j) {
      rn += w * kernel_entry(i - 1, n - 1, n - j);
      w *= mb;
    }
    rv.push_back(rn);

    std::vector<double> col(n + 1, 0.0);
    double c3 = 0.0;
    for (int s = 1; s <= n; ++s) {
      if (s >= 2) c3 = mb * (c3 + mu2 * kernel_entry(i - 1, s - 2, n - 1));
      col[s] = mb2 * kernel_entry(i, s - 1, n - 1) +
               mu2 * kernel_entry(i - 1, s - 1, n - 1) + c3 + rv[s];
    }
    cols_[i].push_back(std::move(col));
  }

  ++n_;
  std::vector<Eigen::VectorXd> out;
  out.reserve(cfg_.taps);
  for (int i = 0; i < cfg_.taps; ++i)
    out.push_back(Eigen::Map<const Eigen::VectorXd>(cols_[i][n].data(), n + 1));
  return out;
}

}  // namespace rmk
