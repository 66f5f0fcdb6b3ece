#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rmk/harness.hpp"

namespace {

// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--seed", args.seed, "override the dataset seed");
  cmd->add_option("--out", args.out, "override the output directory / path stem");
}

rmk::harness::ExperimentConfig resolve_config(const CommonArgs& args) {
  rmk::harness::ExperimentConfig cfg;
  if (!args.config_path.empty())
    cfg = rmk::harness::load_config(args.config_path);
  rmk::harness::apply_seed_override(cfg, args.seed);
  rmk::harness::apply_out_override(cfg, args.out);
  return cfg;
}

void print_table(const rmk::harness::ResultTable& table) {
  for (const auto& row : table.rows)
    std::printf("%-10s %-18s %9.3f dB  [%s]  %.2fs\n", row.dataset.c_str(),
                row.model.c_str(), row.nmse_db, row.hyperparameters.c_str(),
                row.seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recursive multikernel filtering toolkit"};
  app.require_subcommand(1);

  CommonArgs gen_args, batch_args, online_args, bench_args;

  auto* gen = app.add_subcommand("generate", "generate a benchmark dataset");
  add_common(gen, gen_args);
  std::string gen_task;
  std::vector<int> gen_split;
  gen->add_option("--task", gen_task, "mg30 | narendra | wiener | channel");
  gen->add_option("--split", gen_split, "train val test lengths")->expected(3);

  auto* batch = app.add_subcommand("batch", "run batch experiments");
  add_common(batch, batch_args);
  std::vector<std::string> batch_models;
  batch->add_option("--model", batch_models, "model family (repeatable)");

  auto* online = app.add_subcommand("online", "run online experiments");
  add_common(online, online_args);
  std::vector<std::string> online_models;
  online->add_option("--model", online_models, "klms | rmk-klms (repeatable)");

  auto* bench = app.add_subcommand("bench-kernel", "time naive vs fast kernels");
  add_common(bench, bench_args);
  std::vector<int> bench_sizes;
  int bench_taps = 0, bench_reps = 0;
  double bench_mu = 0.0;
  bench->add_option("--sizes", bench_sizes, "ascending matrix sizes");
  bench->add_option("--taps", bench_taps, "tap count (default 5)");
  bench->add_option("--mu", bench_mu, "stability parameter (default 0.5)");
  bench->add_option("--reps", bench_reps, "timing repetitions (median, default 5)");

  try {
    app.parse(argc, argv);

    if (gen->parsed()) {
      auto cfg = resolve_config(gen_args);
      if (!gen_task.empty()) cfg.data.gen.task = gen_task;
      if (!gen_split.empty()) {
        cfg.data.gen.train_len = gen_split[0];
        cfg.data.gen.val_len = gen_split[1];
        cfg.data.gen.test_len = gen_split[2];
      }
      const std::string stem = cfg.out_dir.empty() ? "dataset" : cfg.out_dir;
      rmk::harness::run_generate(cfg.data, stem);
      std::printf("wrote %s.csv and %s.meta.json\n", stem.c_str(), stem.c_str());
    } else if (batch->parsed()) {
      auto cfg = resolve_config(batch_args);
      if (!batch_models.empty()) cfg.models = batch_models;
      print_table(rmk::harness::run_batch_experiment(cfg));
    } else if (online->parsed()) {
      auto cfg = resolve_config(online_args);
      if (!online_models.empty()) cfg.models = online_models;
      print_table(rmk::harness::run_online_experiment(cfg));
    } else if (bench->parsed()) {
      auto cfg = resolve_config(bench_args);
      if (!bench_sizes.empty()) cfg.bench.sizes = bench_sizes;
      if (bench_taps > 0) cfg.bench.taps = bench_taps;
      if (bench_mu > 0.0) cfg.bench.mu = bench_mu;
      if (bench_reps > 0) cfg.bench.reps = bench_reps;
      const std::string out =
          bench_args.out ? *bench_args.out
                         : (bench_args.config_path.empty() ? "bench.csv"
                                                           : cfg.out_dir);
      const auto rows = rmk::harness::run_bench_kernel(
          cfg.bench.sizes, cfg.bench.taps, cfg.bench.mu, cfg.bench.reps, out);
      for (const auto& row : rows)
        std::printf("N=%-6d naive %9.4fs  fast %9.4fs  ratio %.5f  maxdiff %.2e\n",
                    row.n, row.naive_seconds, row.fast_seconds,
                    row.fast_seconds / row.naive_seconds, row.max_abs_diff);
      std::printf("wrote %s\n", out.c_str());
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const rmk::invalid_argument_error& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const rmk::data_error& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return kExitData;
  } catch (const rmk::numeric_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const rmk::capacity_error& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
