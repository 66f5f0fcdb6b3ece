#include "rmk/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace rmk::harness {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw invalid_argument_error(std::string("config: unknown key '") + key +
                                   "' in " + where);
  }
}

template <typename T>
void read_if(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

DatasetConfig parse_dataset(const json& obj) {
  reject_unknown_keys(obj, "dataset",
                      {"task", "file", "column", "horizon", "seed", "train", "val",
                       "test", "mg_discard", "mg_dt", "mg_delay", "mg_history",
                       "narendra_noise_var", "wiener_b", "wiener_noise_var",
                       "channel_a1", "channel_nl", "channel_noise_var",
                       "channel_delay"});
  DatasetConfig cfg;
  read_if(obj, "task", cfg.gen.task);
  read_if(obj, "file", cfg.file);
  if (cfg.gen.task.empty() == cfg.file.empty())
    throw invalid_argument_error(
        "config: dataset needs exactly one of 'task' or 'file'");
  read_if(obj, "column", cfg.column);
  read_if(obj, "horizon", cfg.horizon);
  read_if(obj, "seed", cfg.gen.seed);
  bool split_given = obj.contains("train") || obj.contains("val") || obj.contains("test");
  read_if(obj, "train", cfg.gen.train_len);
  read_if(obj, "val", cfg.gen.val_len);
  read_if(obj, "test", cfg.gen.test_len);
  if (cfg.file_mode() && !split_given) {
    // Loader's proportional split applies; flag with train_len = 0.
    cfg.gen.train_len = 0;
  }
  read_if(obj, "mg_discard", cfg.gen.mg_discard);
  read_if(obj, "mg_dt", cfg.gen.mg_dt);
  read_if(obj, "mg_delay", cfg.gen.mg_delay);
  read_if(obj, "mg_history", cfg.gen.mg_history);
  read_if(obj, "narendra_noise_var", cfg.gen.narendra_noise_var);
  read_if(obj, "wiener_b", cfg.gen.wiener_b);
  read_if(obj, "wiener_noise_var", cfg.gen.wiener_noise_var);
  read_if(obj, "channel_a1", cfg.gen.channel_a1);
  read_if(obj, "channel_nl", cfg.gen.channel_nl);
  read_if(obj, "channel_noise_var", cfg.gen.channel_noise_var);
  read_if(obj, "channel_delay", cfg.gen.channel_delay);
  return cfg;
}

json dataset_to_json(const DatasetConfig& cfg) {
  json obj;
  if (cfg.file_mode()) {
    obj["file"] = cfg.file;
    obj["column"] = cfg.column;
    obj["horizon"] = cfg.horizon;
  } else {
    obj["task"] = cfg.gen.task;
  }
  obj["seed"] = cfg.gen.seed;
  if (!cfg.file_mode() || cfg.gen.train_len > 0) {
    obj["train"] = cfg.gen.train_len;
    obj["val"] = cfg.gen.val_len;
    obj["test"] = cfg.gen.test_len;
  }
  if (cfg.gen.task == "mg30") {
    obj["mg_discard"] = cfg.gen.mg_discard;
    obj["mg_dt"] = cfg.gen.mg_dt;
    obj["mg_delay"] = cfg.gen.mg_delay;
    obj["mg_history"] = cfg.gen.mg_history;
  } else if (cfg.gen.task == "narendra") {
    obj["narendra_noise_var"] = cfg.gen.narendra_noise_var;
  } else if (cfg.gen.task == "wiener") {
    obj["wiener_b"] = cfg.gen.wiener_b;
    obj["wiener_noise_var"] = cfg.gen.wiener_noise_var;
  } else if (cfg.gen.task == "channel") {
    obj["channel_a1"] = cfg.gen.channel_a1;
    obj["channel_nl"] = cfg.gen.channel_nl;
    obj["channel_noise_var"] = cfg.gen.channel_noise_var;
    obj["channel_delay"] = cfg.gen.channel_delay;
  }
  return obj;
}

json config_to_json(const ExperimentConfig& cfg) {
  json obj;
  obj["dataset"] = dataset_to_json(cfg.data);
  obj["models"] = cfg.models;
  obj["kernel"] = {{"kind", kernel_kind_name(cfg.axes.kind)},
                   {"sigma", cfg.point.sigma},
                   {"mu", cfg.point.mu},
                   {"taps", cfg.point.taps},
                   {"embed", cfg.point.embed},
                   {"degree", cfg.axes.poly_degree},
                   {"offset", cfg.axes.poly_offset}};
  obj["ridge_c"] = cfg.point.ridge_c;
  obj["lambda"] = cfg.point.lambda;
  if (cfg.grid_enabled)
    obj["grid"] = {{"sigma", cfg.axes.sigma},   {"mu", cfg.axes.mu},
                   {"taps", cfg.axes.taps},     {"c", cfg.axes.ridge_c},
                   {"embed", cfg.axes.embed},   {"lambda", cfg.axes.lambda}};
  obj["online"] = {{"eta", cfg.online.eta},
                   {"nu", cfg.online.nu},
                   {"pre_update", cfg.online.pre_update}};
  if (cfg.online.budget) obj["online"]["budget"] = *cfg.online.budget;
  obj["bench"] = {{"sizes", cfg.bench.sizes},
                  {"taps", cfg.bench.taps},
                  {"mu", cfg.bench.mu},
                  {"reps", cfg.bench.reps}};
  obj["out"] = cfg.out_dir;
  return obj;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write file: " + path);
  out << text;
  if (!out) throw data_error("write failed: " + path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw data_error("cannot create output directory: " + dir);
}

void write_result_table(const ResultTable& table, const std::string& path) {
  std::ostringstream os;
  os << "dataset,model,nmse_db,hyperparameters,seconds\n";
  for (const auto& row : table.rows) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", row.nmse_db);
    os << row.dataset << "," << row.model << "," << buf << ","
       << row.hyperparameters << ",";
    std::snprintf(buf, sizeof(buf), "%.6f", row.seconds);
    os << buf << "\n";
  }
  write_text(path, os.str());
}

double elapsed_seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

bool is_online_model(const std::string& name) {
  return name == "klms" || name == "rmk-klms";
}

}  // namespace

GridAxes default_grid_axes() {
  GridAxes axes;
  axes.sigma.clear();
  for (int i = 0; i <= 6; ++i) axes.sigma.push_back(std::pow(10.0, -1.0 + i / 3.0));
  axes.mu = {0.3, 0.5, 0.7, 0.9, 1.0};
  axes.taps = {2, 3, 4, 5, 6, 7, 8};
  axes.ridge_c.clear();
  for (int i = 0; i <= 5; ++i) axes.ridge_c.push_back(std::pow(10.0, -6.0 + i));
  axes.embed = {1, 4, 8};
  axes.lambda = {1e-4, 1e-3, 1e-2, 1e-1};
  return axes;
}

ExperimentConfig config_from_json_text(const std::string& text) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw invalid_argument_error(std::string("config: JSON parse error: ") + e.what());
  }
  reject_unknown_keys(obj, "config root",
                      {"dataset", "models", "kernel", "ridge_c", "lambda", "grid",
                       "online", "bench", "out"});
  ExperimentConfig cfg;
  if (!obj.contains("dataset"))
    throw invalid_argument_error("config: missing 'dataset'");
  cfg.data = parse_dataset(obj.at("dataset"));
  read_if(obj, "models", cfg.models);
  read_if(obj, "out", cfg.out_dir);

  if (obj.contains("kernel")) {
    const json& k = obj.at("kernel");
    reject_unknown_keys(k, "kernel",
                        {"kind", "sigma", "mu", "taps", "embed", "degree", "offset"});
    std::string kind = "rbf";
    read_if(k, "kind", kind);
    cfg.axes.kind = parse_kernel_kind(kind);
    read_if(k, "sigma", cfg.point.sigma);
    read_if(k, "mu", cfg.point.mu);
    read_if(k, "taps", cfg.point.taps);
    read_if(k, "embed", cfg.point.embed);
    read_if(k, "degree", cfg.axes.poly_degree);
    read_if(k, "offset", cfg.axes.poly_offset);
  }
  read_if(obj, "ridge_c", cfg.point.ridge_c);
  read_if(obj, "lambda", cfg.point.lambda);

  if (obj.contains("grid")) {
    const json& g = obj.at("grid");
    reject_unknown_keys(g, "grid", {"sigma", "mu", "taps", "c", "embed", "lambda"});
    const GridAxes defaults = default_grid_axes();
    cfg.axes.sigma = defaults.sigma;
    cfg.axes.mu = defaults.mu;
    cfg.axes.taps = defaults.taps;
    cfg.axes.ridge_c = defaults.ridge_c;
    cfg.axes.embed = defaults.embed;
    cfg.axes.lambda = defaults.lambda;
    read_if(g, "sigma", cfg.axes.sigma);
    read_if(g, "mu", cfg.axes.mu);
    read_if(g, "taps", cfg.axes.taps);
    read_if(g, "c", cfg.axes.ridge_c);
    read_if(g, "embed", cfg.axes.embed);
    read_if(g, "lambda", cfg.axes.lambda);
    cfg.grid_enabled = true;
  } else {
    cfg.axes.sigma = {cfg.point.sigma};
    cfg.axes.mu = {cfg.point.mu};
    cfg.axes.taps = {cfg.point.taps};
    cfg.axes.ridge_c = {cfg.point.ridge_c};
    cfg.axes.embed = {cfg.point.embed};
    cfg.axes.lambda = {cfg.point.lambda};
  }

  if (obj.contains("online")) {
    const json& o = obj.at("online");
    reject_unknown_keys(o, "online", {"eta", "nu", "pre_update", "budget"});
    read_if(o, "eta", cfg.online.eta);
    read_if(o, "nu", cfg.online.nu);
    read_if(o, "pre_update", cfg.online.pre_update);
    if (o.contains("budget")) cfg.online.budget = o.at("budget").get<int>();
  }

  if (obj.contains("bench")) {
    const json& b = obj.at("bench");
    reject_unknown_keys(b, "bench", {"sizes", "taps", "mu", "reps"});
    read_if(b, "sizes", cfg.bench.sizes);
    read_if(b, "taps", cfg.bench.taps);
    read_if(b, "mu", cfg.bench.mu);
    read_if(b, "reps", cfg.bench.reps);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

void apply_seed_override(ExperimentConfig& cfg, std::optional<std::uint64_t> seed) {
  if (seed) cfg.data.gen.seed = *seed;
}

void apply_out_override(ExperimentConfig& cfg, const std::optional<std::string>& out) {
  if (out) cfg.out_dir = *out;
}

SeriesDataset resolve_dataset(const DatasetConfig& cfg) {
  if (!cfg.file_mode()) return generate_dataset(cfg.gen);
  SeriesDataset ds = load_csv_series(cfg.file, cfg.column, cfg.horizon);
  if (cfg.gen.train_len > 0) {
    const int total = cfg.gen.total_len();
    if (total > ds.size())
      throw data_error("dataset file has " + std::to_string(ds.size()) +
                       " usable samples, split needs " + std::to_string(total));
    ds.x.resize(total);
    ds.y.resize(total);
    ds.train_end = cfg.gen.train_len;
    ds.val_end = cfg.gen.train_len + cfg.gen.val_len;
    ds.validate();
  }
  return ds;
}

void run_generate(const DatasetConfig& cfg, const std::string& out_stem) {
  if (cfg.file_mode())
    throw invalid_argument_error("generate: dataset must name a generator task");
  const SeriesDataset ds = resolve_dataset(cfg);
  const fs::path stem(out_stem);
  if (stem.has_parent_path()) ensure_out_dir(stem.parent_path().string());
  save_dataset_csv(ds, out_stem + ".csv");
  json meta;
  meta["spec"] = dataset_to_json(cfg);
  meta["name"] = ds.name;
  meta["seed"] = cfg.gen.seed;
  meta["train_end"] = ds.train_end;
  meta["val_end"] = ds.val_end;
  meta["size"] = ds.size();
  meta["horizon"] = ds.horizon;
  write_text(out_stem + ".meta.json", meta.dump(2) + "\n");
}

ResultTable run_batch_experiment(const ExperimentConfig& cfg) {
  if (cfg.models.empty())
    throw invalid_argument_error("batch: no models configured");
  const SeriesDataset ds = resolve_dataset(cfg.data);
  if (ds.val_end >= ds.size())
    throw invalid_argument_error("batch: dataset has no test split");
  ensure_out_dir(cfg.out_dir);
  write_text(cfg.out_dir + "/config_echo.json", config_to_json(cfg).dump(2) + "\n");

  const std::span<const double> test_targets{
      ds.y.data() + ds.val_end, static_cast<size_t>(ds.size() - ds.val_end)};

  ResultTable table;
  for (const std::string& name : cfg.models) {
    if (is_online_model(name))
      throw invalid_argument_error("batch: '" + name + "' is an online model");
    const BatchFamily family = parse_batch_family(name);
    const auto t0 = std::chrono::steady_clock::now();
    GridPoint point = cfg.point;
    if (cfg.grid_enabled) point = grid_search(ds, family, cfg.axes).best;
    const Eigen::VectorXd pred =
        evaluate_grid_point(ds, family, cfg.axes, point, ds.val_end, ds.size());
    const double score =
        nmse_db({pred.data(), (size_t)pred.size()}, test_targets);
    table.rows.push_back({ds.name, batch_family_name(family), score,
                          point.describe(), elapsed_seconds(t0)});

    std::ostringstream os;
    os << "index,target,prediction\n";
    char buf[96];
    for (int t = ds.val_end; t < ds.size(); ++t) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", t, ds.y[t],
                    pred(t - ds.val_end));
      os << buf;
    }
    write_text(cfg.out_dir + "/predictions_" + batch_family_name(family) + ".csv",
               os.str());
  }
  write_result_table(table, cfg.out_dir + "/results.csv");
  return table;
}

ResultTable run_online_experiment(const ExperimentConfig& cfg) {
  if (cfg.models.empty())
    throw invalid_argument_error("online: no models configured");
  const SeriesDataset ds = resolve_dataset(cfg.data);
  ensure_out_dir(cfg.out_dir);
  write_text(cfg.out_dir + "/config_echo.json", config_to_json(cfg).dump(2) + "\n");

  ResultTable table;
  for (const std::string& name : cfg.models) {
    if (!is_online_model(name))
      throw invalid_argument_error("online: '" + name + "' is a batch model");
    const auto t0 = std::chrono::steady_clock::now();
    OnlineReport report;
    std::string hyper;
    if (name == "klms") {
      BaseKernel kernel;
      kernel.kind = cfg.axes.kind;
      kernel.width = cfg.point.sigma;
      kernel.degree = cfg.axes.poly_degree;
      kernel.offset = cfg.axes.poly_offset;
      report = klms_baseline(ds, kernel, cfg.point.embed, cfg.online.eta,
                             cfg.online.pre_update, cfg.online.budget);
      std::ostringstream os;
      os << "sigma=" << cfg.point.sigma << ";embed=" << cfg.point.embed
         << ";eta=" << cfg.online.eta;
      hyper = os.str();
    } else {
      OnlineConfig ocfg;
      ocfg.kernel = cfg.point.kernel_config(cfg.axes);
      ocfg.eta = cfg.online.eta;
      ocfg.nu = cfg.online.nu;
      ocfg.pre_update_outputs = cfg.online.pre_update;
      ocfg.budget = cfg.online.budget;
      report = run_online(ocfg, ds);
      std::ostringstream os;
      os << cfg.point.describe() << ";eta=" << cfg.online.eta
         << ";nu=" << cfg.online.nu;
      hyper = os.str();
    }
    table.rows.push_back(
        {ds.name, name, report.nmse_db, hyper, elapsed_seconds(t0)});

    std::ostringstream os;
    os << "step,running_mse\n";
    char buf[64];
    for (size_t t = 0; t < report.learning_curve.size(); ++t) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", t, report.learning_curve[t]);
      os << buf;
    }
    write_text(cfg.out_dir + "/curve_" + name + ".csv", os.str());
  }
  write_result_table(table, cfg.out_dir + "/results.csv");
  return table;
}

std::vector<BenchRow> run_bench_kernel(const std::vector<int>& sizes, int taps,
                                       double mu, int reps,
                                       const std::string& out_csv) {
  if (sizes.empty()) throw invalid_argument_error("bench-kernel: no sizes given");
  for (size_t i = 1; i < sizes.size(); ++i)
    if (sizes[i] <= sizes[i - 1])
      throw invalid_argument_error("bench-kernel: sizes must be ascending");
  if (reps < 1) throw invalid_argument_error("bench-kernel: reps must be >= 1");

  RecursiveKernelConfig cfg;
  cfg.base = BaseKernel::rbf(1.0);
  cfg.taps = taps;
  cfg.mu = mu;
  cfg.embed_len = 1;

  std::vector<BenchRow> rows;
  for (int n : sizes) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(n));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> series(n);
    for (double& v : series) v = unit(rng);

    // Warm-up pass, discarded; skipped above 512 where a spare naive run
    // would dominate the whole benchmark.
    if (n <= 512) {
      (void)kernel_stack_naive(cfg, series);
      (void)kernel_stack_fast(cfg, series);
    }

    std::vector<double> naive_times, fast_times;
    KernelStack naive_stack, fast_stack;
    for (int k = 0; k < reps; ++k) {
      auto t0 = std::chrono::steady_clock::now();
      naive_stack = kernel_stack_naive(cfg, series);
      naive_times.push_back(elapsed_seconds(t0));
      t0 = std::chrono::steady_clock::now();
      fast_stack = kernel_stack_fast(cfg, series);
      fast_times.push_back(elapsed_seconds(t0));
    }
    double diff = 0.0;
    for (int i = 0; i < taps; ++i)
      diff = std::max(diff,
                      (naive_stack.taps[i] - fast_stack.taps[i]).cwiseAbs().maxCoeff());
    if (diff >= 1e-9)
      throw numeric_error("bench-kernel: fast/naive mismatch " + std::to_string(diff) +
                          " at N=" + std::to_string(n));

    auto median = [](std::vector<double>& v) {
      std::sort(v.begin(), v.end());
      return v[v.size() / 2];
    };
    rows.push_back({n, median(naive_times), median(fast_times), diff});
  }

  std::ostringstream os;
  os << "n,taps,mu,reps,naive_seconds,fast_seconds,ratio,max_abs_diff\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%g,%d,%.6f,%.6f,%.9f,%.3g\n", row.n,
                  taps, mu, reps, row.naive_seconds, row.fast_seconds,
                  row.fast_seconds / row.naive_seconds, row.max_abs_diff);
    os << buf;
  }
  if (!out_csv.empty()) {
    const fs::path p(out_csv);
    if (p.has_parent_path()) ensure_out_dir(p.parent_path().string());
    write_text(out_csv, os.str());
  }
  return rows;
}

}  // namespace rmk::harness
