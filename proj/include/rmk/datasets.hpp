#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rmk/errors.hpp"

namespace rmk {

// One time-indexed regression task: input series x, target series y, and the
// train/validation/test split boundaries (0 <= train_end <= val_end <=
// size()). For h-step prediction tasks the y_n = x_{n+h} alignment is done at
// generation/loading time.
struct SeriesDataset {
  std::vector<double> x;
  std::vector<double> y;
  int train_end = 0;
  int val_end = 0;
  int horizon = 0;
  std::string name;

  int size() const { return static_cast<int>(x.size()); }
  void validate() const;

  std::span<const double> train_x() const { return {x.data(), (size_t)train_end}; }
  std::span<const double> train_y() const { return {y.data(), (size_t)train_end}; }
};

// Generator parameters. Split lengths apply to every task; the remaining
// fields are task specific and default to the benchmark values.
struct GeneratorSpec {
  std::string task;  // mg30 | narendra | wiener | channel
  std::uint64_t seed = 1;
  int train_len = 200;
  int val_len = 1000;
  int test_len = 1000;

  // mg30: delay-30 Mackey-Glass, one-step-ahead prediction
  double mg_delay = 30.0;
  double mg_dt = 0.1;
  int mg_discard = 1000;  // transient samples dropped
  double mg_history = 1.2;

  // narendra: target noise added to training targets only
  double narendra_noise_var = 0.1;

  // wiener: AR(1) drive, b coefficient, Gaussian drive variance
  double wiener_b = 0.8;
  double wiener_noise_var = 0.1;

  // channel: z_n = s_n + a1 s_{n-1}, r_n = z_n - nl z_n^2 + noise
  double channel_a1 = 0.5;
  double channel_nl = 0.9;
  double channel_noise_var = 0.01;
  int channel_delay = 2;  // decision delay D, target s_{n-D}

  int total_len() const { return train_len + val_len + test_len; }
  void validate() const;
};

SeriesDataset gen_mackey_glass(const GeneratorSpec& spec);
SeriesDataset gen_narendra(const GeneratorSpec& spec);
SeriesDataset gen_wiener(const GeneratorSpec& spec);
SeriesDataset gen_channel_equalization(const GeneratorSpec& spec);

// Dispatch on spec.task.
SeriesDataset generate_dataset(const GeneratorSpec& spec);

// Pure single-step pieces of the generators, exposed for direct testing.
double mackey_glass_derivative(double x, double x_delayed);
double narendra_nonlinearity(double e);
double wiener_ar_step(double prev, double drive, double b);
double wiener_output(std::span<const double> series, int t);
double channel_received(double s, double s_prev, double a1, double nl);

// Loads one numeric CSV column and builds the h-step-ahead task
// y_n = x_{n+h}. A single leading non-numeric row is treated as a header;
// any later parse failure is a hard error.
SeriesDataset load_csv_series(const std::string& path, int column, int horizon);

// Dataset file round trip used by the CLI: CSV with an "input,target" header.
void save_dataset_csv(const SeriesDataset& ds, const std::string& path);
SeriesDataset load_dataset_csv(const std::string& path);

// Normalized MSE in dB: 10 log10(mean squared error / population variance of
// the targets). Perfect predictions are floored at -300 dB.
double nmse_db(std::span<const double> predictions, std::span<const double> targets);

constexpr double kNmseFloorDb = -300.0;

}  // namespace rmk
