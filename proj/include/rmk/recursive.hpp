#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rmk/kernels.hpp"

namespace rmk {

// Configuration of the recursive gamma-filter kernel: base kernel, tap count
// P, leak parameter mu in (0,1], embedding length L (0 = raw scalar input).
struct RecursiveKernelConfig {
  BaseKernel base;
  int taps = 1;       // P, filter length / memory depth
  double mu = 0.5;    // stability parameter, mu_bar = 1 - mu is the leak
  int embed_len = 0;  // L

  int window() const { return embed_len > 0 ? embed_len : 1; }
  void validate() const;
};

// P symmetric N x N tap Gram matrices over one time-indexed sequence.
// taps[0] is the base-kernel Gram matrix of the embedded inputs; taps[i] for
// i > 0 is the Gram matrix of the leaky tap states, zero at the first sample.
struct KernelStack {
  std::vector<Eigen::MatrixXd> taps;

  int tap_count() const { return static_cast<int>(taps.size()); }
  Eigen::Index size() const { return taps.empty() ? 0 : taps.front().rows(); }
};

// Reference evaluator: direct summation of the tap recursion for every
// entry. O(P N^3); kept simple on purpose, it is the oracle for the fast and
// streaming paths.
KernelStack kernel_stack_naive(const RecursiveKernelConfig& cfg,
                               std::span<const double> series);

// Column-recursive evaluator. The two slow summation terms are carried
// incrementally (a geometric running sum down each column and an r-vector
// updated across columns), giving O(P N^2) for the whole stack.
KernelStack kernel_stack_fast(const RecursiveKernelConfig& cfg,
                              std::span<const double> series);

// Entrywise mean of the tap matrices.
Eigen::MatrixXd composite_average(const KernelStack& stack);

// Streaming evaluator: one push per sample, producing the new kernel column
// of every tap. Columns reproduce the batch stack over the pushed prefix.
// Single-writer; an optional budget caps the dictionary size (push past the
// cap throws capacity_error, nothing is evicted).
class StreamKernelState {
 public:
  explicit StreamKernelState(RecursiveKernelConfig cfg,
                             std::optional<int> budget = std::nullopt);

  // Appends x as sample n (0-based) and returns columns kappa^i(0..n, n) for
  // every tap i.
  std::vector<Eigen::VectorXd> push(double x);

  int size() const { return n_; }
  const RecursiveKernelConfig& config() const { return cfg_; }
  std::optional<int> budget() const { return budget_; }

  // Symmetric entry lookup, 0-based indices < size().
  double kernel_entry(int tap, int m, int t) const;

  // First `rows` entries of column t for one tap (rows <= t + 1).
  Eigen::VectorXd tap_column(int tap, int t, int rows) const;

 private:
  RecursiveKernelConfig cfg_;
  std::optional<int> budget_;
  int n_ = 0;
  std::vector<double> raw_;                            // raw sample history
  std::vector<Eigen::VectorXd> samples_;               // embedded samples
  std::vector<std::vector<std::vector<double>>> cols_; // cols_[tap][t][m], m <= t
  std::vector<std::vector<double>> r_;                 // r_[tap][m], taps 0..P-2
};

}  // namespace rmk
