#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rmk/batch.hpp"
#include "rmk/datasets.hpp"
#include "rmk/online.hpp"

namespace rmk::harness {

// Dataset source: exactly one of a generator task or a CSV file.
struct DatasetConfig {
  GeneratorSpec gen;       // gen.task empty means file mode
  std::string file;
  int column = 0;
  int horizon = 1;

  bool file_mode() const { return gen.task.empty(); }
};

struct OnlineParams {
  double eta = 0.2;
  double nu = 0.05;
  bool pre_update = false;
  std::optional<int> budget;
};

struct BenchParams {
  std::vector<int> sizes{128, 256, 512};
  int taps = 5;
  double mu = 0.5;
  int reps = 5;
};

struct ExperimentConfig {
  DatasetConfig data;
  std::vector<std::string> models;
  GridAxes axes;            // axes for grid mode, kernel kind always read
  bool grid_enabled = false;
  GridPoint point;          // fixed hyperparameters when grid is off
  OnlineParams online;
  BenchParams bench;
  std::string out_dir = "out";
};

// Reads a JSON config file (schema documented in the README). Unknown keys
// are rejected so typos fail loudly.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig config_from_json_text(const std::string& text);

void apply_seed_override(ExperimentConfig& cfg, std::optional<std::uint64_t> seed);
void apply_out_override(ExperimentConfig& cfg, const std::optional<std::string>& out);

SeriesDataset resolve_dataset(const DatasetConfig& cfg);

struct ResultRow {
  std::string dataset;
  std::string model;
  double nmse_db = 0.0;
  std::string hyperparameters;
  double seconds = 0.0;
};

struct ResultTable {
  std::vector<ResultRow> rows;
};

// generate: dataset CSV plus a JSON sidecar (seed, spec echo, splits).
void run_generate(const DatasetConfig& cfg, const std::string& out_stem);

// batch: per-model nMSE table + per-sample test predictions + config echo.
ResultTable run_batch_experiment(const ExperimentConfig& cfg);

// online: per-model nMSE table + smoothed learning curves + config echo.
ResultTable run_online_experiment(const ExperimentConfig& cfg);

struct BenchRow {
  int n = 0;
  double naive_seconds = 0.0;
  double fast_seconds = 0.0;
  double max_abs_diff = 0.0;
};

// bench-kernel: naive vs fast wall-clock (median of reps, one warm-up run
// discarded) with an equality check per size.
std::vector<BenchRow> run_bench_kernel(const std::vector<int>& sizes, int taps,
                                       double mu, int reps,
                                       const std::string& out_csv);

// Grid axes from the documented default search procedure.
GridAxes default_grid_axes();

}  // namespace rmk::harness
