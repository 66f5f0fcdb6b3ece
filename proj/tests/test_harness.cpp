#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rmk/harness.hpp"

using namespace rmk;
using namespace rmk::harness;

namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("fixed-point config") {
    const auto cfg = config_from_json_text(R"({
      "dataset": {"task": "narendra", "seed": 4, "train": 50, "val": 50, "test": 40},
      "models": ["stacking", "rbf-embedding"],
      "kernel": {"kind": "rbf", "sigma": 0.7, "mu": 0.9, "taps": 4, "embed": 2},
      "ridge_c": 1e-3,
      "online": {"eta": 0.3, "nu": 0.02},
      "out": "somewhere"
    })");
    CHECK(cfg.data.gen.task == "narendra");
    CHECK(cfg.data.gen.seed == 4);
    CHECK(cfg.models.size() == 2);
    CHECK(cfg.point.sigma == 0.7);
    CHECK(cfg.point.taps == 4);
    CHECK(cfg.point.ridge_c == 1e-3);
    CHECK(cfg.online.eta == 0.3);
    CHECK(cfg.out_dir == "somewhere");
    CHECK_FALSE(cfg.grid_enabled);
  }

  SUBCASE("grid block enables the search and fills defaults") {
    const auto cfg = config_from_json_text(R"({
      "dataset": {"task": "mg30"},
      "grid": {"sigma": [0.5, 1.0], "taps": [2, 3]}
    })");
    CHECK(cfg.grid_enabled);
    CHECK(cfg.axes.sigma == std::vector<double>{0.5, 1.0});
    CHECK(cfg.axes.taps == std::vector<int>{2, 3});
    CHECK(cfg.axes.mu == default_grid_axes().mu);
  }

  SUBCASE("unknown keys are rejected") {
    CHECK_THROWS_AS(config_from_json_text(R"({"dataset": {"task": "mg30"}, "bogus": 1})"),
                    invalid_argument_error);
    CHECK_THROWS_AS(config_from_json_text(R"({"dataset": {"task": "mg30", "sigma": 1}})"),
                    invalid_argument_error);
  }

  SUBCASE("dataset source must be unique") {
    CHECK_THROWS_AS(config_from_json_text(R"({"dataset": {}})"),
                    invalid_argument_error);
    CHECK_THROWS_AS(
        config_from_json_text(R"({"dataset": {"task": "mg30", "file": "x.csv"}})"),
        invalid_argument_error);
  }

  SUBCASE("malformed JSON") {
    CHECK_THROWS_AS(config_from_json_text("{nope"), invalid_argument_error);
  }

  SUBCASE("seed and out overrides") {
    auto cfg = config_from_json_text(R"({"dataset": {"task": "mg30", "seed": 1}})");
    apply_seed_override(cfg, 99);
    apply_out_override(cfg, std::string("elsewhere"));
    CHECK(cfg.data.gen.seed == 99);
    CHECK(cfg.out_dir == "elsewhere");
    apply_seed_override(cfg, std::nullopt);
    CHECK(cfg.data.gen.seed == 99);
  }
}

TEST_CASE("generate writes a loadable dataset with a sidecar") {
  const std::string dir = temp_dir("rmk_harness_gen");
  DatasetConfig data;
  data.gen.task = "narendra";
  data.gen.seed = 31;
  data.gen.train_len = 40;
  data.gen.val_len = 20;
  data.gen.test_len = 20;

  const std::string stem = dir + "/narendra";
  run_generate(data, stem);

  const SeriesDataset ds = resolve_dataset(data);
  const SeriesDataset back = load_dataset_csv(stem + ".csv");
  CHECK(back.x == ds.x);
  CHECK(back.y == ds.y);

  const std::string meta = read_file(stem + ".meta.json");
  CHECK(meta.find("\"seed\": 31") != std::string::npos);
  CHECK(meta.find("\"train_end\": 40") != std::string::npos);

  // Same seed twice gives byte-identical files.
  run_generate(data, stem + "_again");
  CHECK(read_file(stem + ".csv") == read_file(stem + "_again.csv"));
}

TEST_CASE("batch experiment writes the result table and predictions") {
  const std::string dir = temp_dir("rmk_harness_batch");
  ExperimentConfig cfg;
  cfg.data.gen.task = "narendra";
  cfg.data.gen.seed = 7;
  cfg.data.gen.train_len = 60;
  cfg.data.gen.val_len = 40;
  cfg.data.gen.test_len = 40;
  cfg.models = {"rbf-embedding", "composite-average", "stacking",
                "ridge-stacking", "sparse-stacking"};
  cfg.point = GridPoint{0.6, 0.7, 3, 1e-3, 1, 1e-3};
  cfg.out_dir = dir;

  const ResultTable table = run_batch_experiment(cfg);
  REQUIRE(table.rows.size() == 5);
  for (const auto& row : table.rows) {
    CHECK(row.dataset == "narendra");
    CHECK(std::isfinite(row.nmse_db));
    CHECK(row.nmse_db < 0.0);  // anything sane beats the mean predictor here
  }

  const std::string results = read_file(dir + "/results.csv");
  CHECK(results.rfind("dataset,model,nmse_db,hyperparameters,seconds\n", 0) == 0);
  CHECK(count_lines(results) == 6);

  const std::string preds = read_file(dir + "/predictions_stacking.csv");
  CHECK(preds.rfind("index,target,prediction\n", 0) == 0);
  CHECK(count_lines(preds) == 41);  // header + one row per test sample

  const std::string echo = read_file(dir + "/config_echo.json");
  const auto reparsed = config_from_json_text(echo);
  CHECK(reparsed.data.gen.seed == 7);
  CHECK(reparsed.models.size() == 5);
  CHECK(reparsed.point.sigma == 0.6);

  SUBCASE("online model names are rejected in batch runs") {
    ExperimentConfig bad = cfg;
    bad.models = {"klms"};
    CHECK_THROWS_AS(run_batch_experiment(bad), invalid_argument_error);
  }
}

TEST_CASE("batch experiment with a small grid picks the tabled argmin") {
  const std::string dir = temp_dir("rmk_harness_grid");
  ExperimentConfig cfg;
  cfg.data.gen.task = "narendra";
  cfg.data.gen.seed = 13;
  cfg.data.gen.train_len = 60;
  cfg.data.gen.val_len = 40;
  cfg.data.gen.test_len = 40;
  cfg.models = {"stacking"};
  cfg.grid_enabled = true;
  cfg.axes.sigma = {0.3, 1.0};
  cfg.axes.mu = {0.7};
  cfg.axes.taps = {3};
  cfg.axes.ridge_c = {1e-4, 1e-2};
  cfg.axes.embed = {1};
  cfg.axes.lambda = {0.0};
  cfg.out_dir = dir;

  const ResultTable table = run_batch_experiment(cfg);
  REQUIRE(table.rows.size() == 1);
  CHECK(std::isfinite(table.rows[0].nmse_db));
  // The echoed grid survives a config round trip.
  const auto reparsed = config_from_json_text(read_file(dir + "/config_echo.json"));
  CHECK(reparsed.grid_enabled);
  CHECK(reparsed.axes.sigma == cfg.axes.sigma);
}

TEST_CASE("online experiment writes curves and final scores") {
  const std::string dir = temp_dir("rmk_harness_online");
  ExperimentConfig cfg;
  cfg.data.gen.task = "narendra";
  cfg.data.gen.seed = 2;
  cfg.data.gen.train_len = 150;
  cfg.data.gen.val_len = 0;
  cfg.data.gen.test_len = 150;
  cfg.models = {"klms", "rmk-klms"};
  cfg.point = GridPoint{0.8, 0.9, 4, 0.0, 2, 0.0};
  cfg.online.eta = 0.3;
  cfg.online.nu = 0.05;
  cfg.out_dir = dir;

  const ResultTable table = run_online_experiment(cfg);
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].model == "klms");
  CHECK(table.rows[1].model == "rmk-klms");
  for (const auto& row : table.rows) CHECK(std::isfinite(row.nmse_db));

  const std::string curve = read_file(dir + "/curve_rmk-klms.csv");
  CHECK(curve.rfind("step,running_mse\n", 0) == 0);
  CHECK(count_lines(curve) == 301);

  SUBCASE("batch model names are rejected in online runs") {
    ExperimentConfig bad = cfg;
    bad.models = {"stacking"};
    CHECK_THROWS_AS(run_online_experiment(bad), invalid_argument_error);
  }
}

TEST_CASE("bench kernel timing harness") {
  const std::string dir = temp_dir("rmk_harness_bench");
  const std::string csv = dir + "/bench.csv";
  const auto rows = run_bench_kernel({16, 32}, 3, 0.5, 1, csv);
  REQUIRE(rows.size() == 2);
  for (const auto& row : rows) {
    CHECK(row.max_abs_diff < 1e-9);
    CHECK(row.naive_seconds >= 0.0);
    CHECK(row.fast_seconds >= 0.0);
  }
  const std::string text = read_file(csv);
  CHECK(text.rfind("n,taps,mu,reps,naive_seconds,fast_seconds,ratio,max_abs_diff\n", 0) == 0);
  CHECK(count_lines(text) == 3);

  CHECK_THROWS_AS(run_bench_kernel({32, 16}, 3, 0.5, 1, ""),
                  invalid_argument_error);
  CHECK_THROWS_AS(run_bench_kernel({}, 3, 0.5, 1, ""), invalid_argument_error);
  CHECK_THROWS_AS(run_bench_kernel({16}, 3, 0.5, 0, ""), invalid_argument_error);
}

TEST_CASE("file-mode dataset with explicit split lengths") {
  const std::string dir = temp_dir("rmk_harness_file");
  const std::string path = dir + "/series.csv";
  {
    std::ofstream out(path);
    out << "v\n";
    for (int i = 0; i < 120; ++i) out << (std::sin(0.1 * i) + 2.0) << "\n";
  }
  DatasetConfig data;
  data.file = path;
  data.column = 0;
  data.horizon = 2;
  data.gen.train_len = 40;
  data.gen.val_len = 30;
  data.gen.test_len = 30;

  const SeriesDataset ds = resolve_dataset(data);
  CHECK(ds.size() == 100);
  CHECK(ds.train_end == 40);
  CHECK(ds.val_end == 70);
  CHECK(ds.horizon == 2);

  data.gen.train_len = 200;  // does not fit
  CHECK_THROWS_AS(resolve_dataset(data), data_error);
}
