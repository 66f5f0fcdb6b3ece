#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "rmk/datasets.hpp"

namespace {

namespace fs = std::filesystem;

std::string temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

int run(const std::string& args) {
  const std::string cmd = std::string(RMKFILTER_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("generate then load round trip") {
  const std::string dir = temp_dir("rmk_cli_gen");
  const std::string stem = dir + "/wiener";
  REQUIRE(run("generate --task wiener --seed 5 --split 40 20 20 --out " + stem) == 0);

  const rmk::SeriesDataset back = rmk::load_dataset_csv(stem + ".csv");
  rmk::GeneratorSpec spec;
  spec.task = "wiener";
  spec.seed = 5;
  spec.train_len = 40;
  spec.val_len = 20;
  spec.test_len = 20;
  const rmk::SeriesDataset ds = rmk::gen_wiener(spec);
  CHECK(back.x == ds.x);
  CHECK(back.y == ds.y);

  // Same seed twice: byte-identical output.
  REQUIRE(run("generate --task wiener --seed 5 --split 40 20 20 --out " + stem +
              "_b") == 0);
  std::ifstream a(stem + ".csv"), b(stem + "_b.csv");
  const std::string ta((std::istreambuf_iterator<char>(a)), {});
  const std::string tb((std::istreambuf_iterator<char>(b)), {});
  CHECK(ta == tb);
}

TEST_CASE("usage errors exit with the usage code") {
  CHECK(run("generate --task not-a-task --out /tmp/rmk_cli_bad") == 2);
  CHECK(run("no-such-subcommand") == 2);
  CHECK(run("bench-kernel --sizes 64 --sizes 32") == 2);  // not ascending
}

TEST_CASE("data errors exit with the data code") {
  const std::string dir = temp_dir("rmk_cli_data");
  const std::string cfg = dir + "/cfg.json";
  write_file(cfg, R"({"dataset": {"file": ")" + dir +
                      R"(/missing.csv"}, "models": ["stacking"], "out": ")" + dir +
                      R"("})");
  CHECK(run("batch --config " + cfg) == 3);
}

TEST_CASE("batch subcommand runs from a config file") {
  const std::string dir = temp_dir("rmk_cli_batch");
  const std::string cfg = dir + "/cfg.json";
  write_file(cfg, R"({
    "dataset": {"task": "narendra", "seed": 6, "train": 50, "val": 30, "test": 30},
    "models": ["stacking"],
    "kernel": {"sigma": 0.6, "mu": 0.7, "taps": 3, "embed": 1},
    "ridge_c": 1e-3,
    "out": ")" + dir + R"("})");
  REQUIRE(run("batch --config " + cfg) == 0);
  CHECK(fs::exists(dir + "/results.csv"));
  CHECK(fs::exists(dir + "/predictions_stacking.csv"));
  CHECK(fs::exists(dir + "/config_echo.json"));
}

TEST_CASE("online subcommand with seed override") {
  const std::string dir = temp_dir("rmk_cli_online");
  const std::string cfg = dir + "/cfg.json";
  write_file(cfg, R"({
    "dataset": {"task": "channel", "seed": 1, "train": 100, "val": 0, "test": 100},
    "models": ["klms"],
    "kernel": {"sigma": 0.5, "embed": 3},
    "online": {"eta": 0.4},
    "out": ")" + dir + R"("})");
  REQUIRE(run("online --config " + cfg + " --seed 9") == 0);
  CHECK(fs::exists(dir + "/curve_klms.csv"));
  std::ifstream echo(dir + "/config_echo.json");
  const std::string text((std::istreambuf_iterator<char>(echo)), {});
  CHECK(text.find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("bench-kernel subcommand writes the timing table") {
  const std::string dir = temp_dir("rmk_cli_bench");
  const std::string out = dir + "/bench.csv";
  REQUIRE(run("bench-kernel --sizes 16 32 --taps 3 --reps 1 --out " + out) == 0);
  CHECK(fs::exists(out));
}
