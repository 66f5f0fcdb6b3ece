#include "rmk/datasets.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

namespace rmk {

void SeriesDataset::validate() const {
  if (x.size() != y.size())
    throw invalid_argument_error("SeriesDataset: input/target length mismatch");
  if (!(train_end > 0 && train_end <= val_end && val_end <= size()))
    throw invalid_argument_error("SeriesDataset: invalid split boundaries");
}

void GeneratorSpec::validate() const {
  if (train_len < 1 || val_len < 0 || test_len < 0)
    throw invalid_argument_error("GeneratorSpec: split lengths must be positive");
  if (narendra_noise_var < 0 || wiener_noise_var < 0 || channel_noise_var < 0)
    throw invalid_argument_error("GeneratorSpec: noise variances must be >= 0");
  if (channel_delay < 0)
    throw invalid_argument_error("GeneratorSpec: decision delay must be >= 0");
  if (mg_dt <= 0 || mg_delay <= 0 || mg_discard < 0)
    throw invalid_argument_error("GeneratorSpec: invalid Mackey-Glass parameters");
}

double mackey_glass_derivative(double x, double x_delayed) {
  const double p10 = std::pow(x_delayed, 10.0);
  return 0.2 * x_delayed / (1.0 + p10) - 0.1 * x;
}

namespace {

// Integrates the delay equation with RK4 on a fine grid and samples at unit
// time intervals. The delayed term at half steps is linearly interpolated.
std::vector<double> mackey_glass_series(const GeneratorSpec& spec, int count) {
  const double dt = spec.mg_dt;
  const int lag = static_cast<int>(std::lround(spec.mg_delay / dt));
  const int stride = static_cast<int>(std::lround(1.0 / dt));
  if (lag < 1 || stride < 1 ||
      std::abs(lag * dt - spec.mg_delay) > 1e-9 ||
      std::abs(stride * dt - 1.0) > 1e-9)
    throw invalid_argument_error("mackey_glass: dt must divide the delay and the unit stride");

  std::vector<double> hist;
  hist.reserve(lag + 1 + (spec.mg_discard + count) * stride);
  for (int i = 0; i <= lag; ++i) hist.push_back(spec.mg_history);

  const int fine_steps = (spec.mg_discard + count - 1) * stride;
  for (int k = 0; k < fine_steps; ++k) {
    const size_t cur = hist.size() - 1;
    const double x = hist[cur];
    const double xd0 = hist[cur - lag];
    const double xd1 = hist[cur - lag + 1];
    const double xdh = 0.5 * (xd0 + xd1);
    const double k1 = mackey_glass_derivative(x, xd0);
    const double k2 = mackey_glass_derivative(x + 0.5 * dt * k1, xdh);
    const double k3 = mackey_glass_derivative(x + 0.5 * dt * k2, xdh);
    const double k4 = mackey_glass_derivative(x + dt * k3, xd1);
    hist.push_back(x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  }

  std::vector<double> out(count);
  for (int s = 0; s < count; ++s)
    out[s] = hist[lag + (spec.mg_discard + s) * stride];
  return out;
}

void apply_default_split(SeriesDataset& ds, const GeneratorSpec& spec) {
  ds.train_end = spec.train_len;
  ds.val_end = spec.train_len + spec.val_len;
  ds.validate();
}

}  // namespace

SeriesDataset gen_mackey_glass(const GeneratorSpec& spec) {
  spec.validate();
  const int n = spec.total_len();
  const int h = 1;  // one-step-ahead prediction
  const std::vector<double> s = mackey_glass_series(spec, n + h);

  SeriesDataset ds;
  ds.name = "mg30";
  ds.horizon = h;
  ds.x.assign(s.begin(), s.begin() + n);
  ds.y.assign(s.begin() + h, s.begin() + h + n);
  apply_default_split(ds, spec);
  return ds;
}

double narendra_nonlinearity(double e) {
  const double pi = std::acos(-1.0);
  return 0.6 * std::sin(pi * e) + 0.3 * std::sin(3.0 * pi * e) +
         0.1 * std::sin(5.0 * pi * e);
}

SeriesDataset gen_narendra(const GeneratorSpec& spec) {
  spec.validate();
  const int n = spec.total_len();
  std::mt19937_64 rng(spec.seed);
  const double a = std::uniform_real_distribution<double>(0.1, 2.9)(rng);
  const double w0 = 2.0 * std::acos(-1.0) / 250.0;

  SeriesDataset ds;
  ds.name = "narendra";
  ds.horizon = 0;
  ds.x.resize(n);
  ds.y.resize(n);
  double y1 = 1.0, y2 = 1.0;  // y_0 = y_{-1} = 1
  for (int t = 0; t < n; ++t) {
    const double e = std::sin((1.0 + a) * w0 * (t + 1));
    const double y = 0.3 * y1 + 0.6 * y2 + narendra_nonlinearity(e);
    ds.x[t] = e;
    ds.y[t] = y;
    y2 = y1;
    y1 = y;
  }
  // Measurement noise on the desired output, training segment only.
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.narendra_noise_var));
  if (spec.narendra_noise_var > 0.0)
    for (int t = 0; t < spec.train_len && t < n; ++t) ds.y[t] += noise(rng);
  apply_default_split(ds, spec);
  return ds;
}

double wiener_ar_step(double prev, double drive, double b) {
  return b * prev + std::sqrt(1.0 - b * b) * drive;
}

double wiener_output(std::span<const double> series, int t) {
  static constexpr std::array<double, 8> coeff = {0.20, 0.17, 0.14, 0.12,
                                                  0.10, 0.09, 0.09, 0.09};
  double acc = 0.0;
  for (int j = 0; j < static_cast<int>(coeff.size()); ++j)
    if (t - j >= 0) acc += coeff[j] * series[t - j];
  return std::tanh(acc);
}

SeriesDataset gen_wiener(const GeneratorSpec& spec) {
  spec.validate();
  const int n = spec.total_len();
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> start(0.0, 1.0);
  std::normal_distribution<double> drive(0.0, std::sqrt(spec.wiener_noise_var));

  SeriesDataset ds;
  ds.name = "wiener";
  ds.horizon = 0;
  ds.x.resize(n);
  ds.y.resize(n);
  double x = start(rng);
  for (int t = 0; t < n; ++t) {
    if (t > 0) x = wiener_ar_step(x, drive(rng), spec.wiener_b);
    ds.x[t] = x;
    ds.y[t] = wiener_output(ds.x, t);
  }
  apply_default_split(ds, spec);
  return ds;
}

double channel_received(double s, double s_prev, double a1, double nl) {
  const double z = s + a1 * s_prev;
  return z - nl * z * z;
}

SeriesDataset gen_channel_equalization(const GeneratorSpec& spec) {
  spec.validate();
  const int n = spec.total_len();
  const int off = std::max(spec.channel_delay, 1);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution coin(0.5);
  std::normal_distribution<double> noise(0.0, std::sqrt(spec.channel_noise_var));

  std::vector<double> sym(n + off);
  for (auto& s : sym) s = coin(rng) ? 1.0 : -1.0;

  SeriesDataset ds;
  ds.name = "channel";
  ds.horizon = 0;
  ds.x.resize(n);
  ds.y.resize(n);
  for (int t = 0; t < n; ++t) {
    const double r = channel_received(sym[t + off], sym[t + off - 1],
                                      spec.channel_a1, spec.channel_nl);
    ds.x[t] = r + (spec.channel_noise_var > 0.0 ? noise(rng) : 0.0);
    ds.y[t] = sym[t + off - spec.channel_delay];
  }
  apply_default_split(ds, spec);
  return ds;
}

SeriesDataset generate_dataset(const GeneratorSpec& spec) {
  if (spec.task == "mg30") return gen_mackey_glass(spec);
  if (spec.task == "narendra") return gen_narendra(spec);
  if (spec.task == "wiener") return gen_wiener(spec);
  if (spec.task == "channel") return gen_channel_equalization(spec);
  throw invalid_argument_error("unknown dataset task: " + spec.task);
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  const char* begin = text.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end)) && *end != '\r') return false;
    ++end;
  }
  return true;
}

}  // namespace

SeriesDataset load_csv_series(const std::string& path, int column, int horizon) {
  if (horizon < 1) throw invalid_argument_error("load_csv_series: horizon must be >= 1");
  std::ifstream in(path);
  if (!in) throw data_error("load_csv_series: cannot open file: " + path);

  std::vector<double> values;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_row(line);
    if (column < 0 || column >= static_cast<int>(cells.size()))
      throw data_error("load_csv_series: column " + std::to_string(column) +
                       " missing at row " + std::to_string(row));
    double v = 0.0;
    if (!parse_double(cells[column], v)) {
      if (row == 1) continue;  // single header line
      throw data_error("load_csv_series: non-numeric cell at row " +
                       std::to_string(row));
    }
    values.push_back(v);
  }
  const int len = static_cast<int>(values.size());
  if (len < horizon + 2)
    throw data_error("load_csv_series: need at least horizon + 2 numeric rows, got " +
                     std::to_string(len));

  SeriesDataset ds;
  ds.name = path;
  ds.horizon = horizon;
  const int n = len - horizon;
  ds.x.assign(values.begin(), values.begin() + n);
  ds.y.assign(values.begin() + horizon, values.begin() + horizon + n);
  // Proportional 60/20/20 split; callers with explicit boundaries override.
  ds.train_end = std::max(1, (n * 6) / 10);
  ds.val_end = std::max(ds.train_end, (n * 8) / 10);
  ds.validate();
  return ds;
}

void save_dataset_csv(const SeriesDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("save_dataset_csv: cannot write file: " + path);
  out << "input,target\n";
  char buf[64];
  for (int t = 0; t < ds.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", ds.x[t], ds.y[t]);
    out << buf;
  }
  if (!out) throw data_error("save_dataset_csv: write failed: " + path);
}

SeriesDataset load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("load_dataset_csv: cannot open file: " + path);
  SeriesDataset ds;
  ds.name = path;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_row(line);
    if (cells.size() < 2)
      throw data_error("load_dataset_csv: expected two columns at row " +
                       std::to_string(row));
    double xv = 0.0, yv = 0.0;
    if (!parse_double(cells[0], xv) || !parse_double(cells[1], yv)) {
      if (row == 1) continue;
      throw data_error("load_dataset_csv: non-numeric cell at row " +
                       std::to_string(row));
    }
    ds.x.push_back(xv);
    ds.y.push_back(yv);
  }
  if (ds.x.empty()) throw data_error("load_dataset_csv: no samples in " + path);
  ds.train_end = std::max(1, (ds.size() * 6) / 10);
  ds.val_end = std::max(ds.train_end, (ds.size() * 8) / 10);
  ds.validate();
  return ds;
}

double nmse_db(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.size() != targets.size())
    throw invalid_argument_error("nmse_db: length mismatch");
  const size_t n = targets.size();
  if (n < 2) throw invalid_argument_error("nmse_db: need at least two samples");

  double mean = 0.0;
  for (double t : targets) mean += t;
  mean /= static_cast<double>(n);
  double var = 0.0, mse = 0.0;
  for (size_t i = 0; i < n; ++i) {
    var += (targets[i] - mean) * (targets[i] - mean);
    const double e = predictions[i] - targets[i];
    mse += e * e;
  }
  var /= static_cast<double>(n);
  mse /= static_cast<double>(n);

  if (var <= 0.0)
    throw data_error("nmse_db: degenerate target variance (all targets identical)");
  if (mse == 0.0) return kNmseFloorDb;
  return std::max(kNmseFloorDb, 10.0 * std::log10(mse / var));
}

}  // namespace rmk
