// hoplite command-line front end. Talks to the core exclusively through the
// C API in hoplite.h; config parsing, hashing and artifact layout live here.
//
// Exit codes: 0 success, 1 runtime failure, 2 input/format error.
// Logging goes to stderr; stdout carries one JSON document per result.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hoplite.h"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RuntimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(hoplite_status status, const std::string& what) {
  if (status == HOPLITE_OK) return;
  const std::string message = what + ": " + hoplite_last_error();
  if (status == HOPLITE_ERR_INPUT) throw InputError(message);
  throw RuntimeError(message);
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

// ---- hashing ------------------------------------------------------------

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string hash_json(const json& j) {
  const std::string s = j.dump();  // object keys are stored sorted, so stable
  return hex16(fnv1a(s.data(), s.size()));
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::uint64_t h = 1469598103934665603ull;
  std::vector<char> buf(1 << 20);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    h = fnv1a(buf.data(), static_cast<std::size_t>(in.gcount()), h);
  }
  return hex16(h);
}

// ---- config file ----------------------------------------------------------

template <typename T>
T take(json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  T value = it->template get<T>();
  j.erase(it);
  return value;
}

void reject_unknown(const json& j, const std::string& where) {
  if (!j.empty())
    throw InputError("config " + where + ": unknown key \"" + j.begin().key() + "\"");
}

struct DatasetPaths {
  std::string edges, features, labels, train_split, val_split, test_split;
};

struct RunConfig {
  DatasetPaths dataset;
  std::vector<std::uint32_t> policy{1, 2, 4};
  std::string output_dir = "runs";
  std::string context_cache;  // empty: derived from output_dir + policy
  json train = json::object();
  json grid = json::object();
  json eval_classify = json::object();
  json eval_cluster = json::object();
  json eval_linkpred = json::object();
  json ablate = json::object();
  std::uint64_t seed = 0;
  bool deterministic = true;
  int jobs = 1;
};

std::string resolve_data_path(const std::string& p) {
  if (p.empty()) return p;
  const char* root = std::getenv("HOPLITE_DATA_ROOT");
  if (root && *root && fs::path(p).is_relative()) return (fs::path(root) / p).string();
  return p;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("config " + path + ": " + e.what());
  }
  if (!j.is_object()) throw InputError("config " + path + ": expected a JSON object");

  try {
    RunConfig config;
    json d = take<json>(j, "dataset", json::object());
    if (!d.is_object()) throw InputError("config dataset: expected an object");
    config.dataset.edges = resolve_data_path(take<std::string>(d, "edges", ""));
    config.dataset.features = resolve_data_path(take<std::string>(d, "features", ""));
    config.dataset.labels = resolve_data_path(take<std::string>(d, "labels", ""));
    config.dataset.train_split = resolve_data_path(take<std::string>(d, "train_split", ""));
    config.dataset.val_split = resolve_data_path(take<std::string>(d, "val_split", ""));
    config.dataset.test_split = resolve_data_path(take<std::string>(d, "test_split", ""));
    reject_unknown(d, "dataset");
    if (config.dataset.edges.empty() || config.dataset.features.empty())
      throw InputError("config dataset: \"edges\" and \"features\" are required");

    config.policy = take<std::vector<std::uint32_t>>(j, "policy", config.policy);
    config.output_dir = take<std::string>(j, "output_dir", config.output_dir);
    config.context_cache = take<std::string>(j, "context_cache", config.context_cache);
    config.train = take<json>(j, "train", json::object());
    if (!config.train.is_object()) throw InputError("config train: expected an object");
    config.grid = take<json>(config.train, "grid", json::object());

    json e = take<json>(j, "eval", json::object());
    if (!e.is_object()) throw InputError("config eval: expected an object");
    config.eval_classify = take<json>(e, "classify", json::object());
    config.eval_cluster = take<json>(e, "cluster", json::object());
    config.eval_linkpred = take<json>(e, "linkpred", json::object());
    reject_unknown(e, "eval");

    config.ablate = take<json>(j, "ablate", json::object());
    config.seed = take<std::uint64_t>(j, "seed", config.seed);
    config.deterministic = take<bool>(j, "deterministic", config.deterministic);
    config.jobs = take<int>(j, "jobs", config.jobs);
    reject_unknown(j, "(top level)");

    // Validate sections eagerly so schema problems surface before any work,
    // not in the middle of a long run.
    {
      json t = config.train;
      (void)take<std::uint32_t>(t, "embedding_dim", 512);
      (void)take<std::uint32_t>(t, "num_layers", 1);
      (void)take<std::uint32_t>(t, "epochs", 100);
      (void)take<double>(t, "lr", 0.001);
      (void)take<std::uint32_t>(t, "targets_per_batch", 256);
      (void)take<std::uint32_t>(t, "pairs_per_category_per_target", 4);
      (void)take<bool>(t, "far_includes_unreachable", false);
      (void)take<std::uint32_t>(t, "batches_per_epoch", 0);
      (void)take<double>(t, "divergence_threshold", 1e6);
      reject_unknown(t, "train");
      json g = config.grid;
      (void)take<std::vector<double>>(g, "lr", {});
      (void)take<std::vector<std::uint32_t>>(g, "epochs", {});
      reject_unknown(g, "train.grid");
      json a = config.ablate;
      (void)take<std::vector<std::vector<std::uint32_t>>>(a, "policies", {});
      (void)take<bool>(a, "check_trend", false);
      reject_unknown(a, "ablate");
    }
    return config;
  } catch (const json::exception& e) {
    throw InputError(std::string("config ") + path + ": " + e.what());
  }
}

// ---- handles --------------------------------------------------------------

struct DatasetHandle {
  hoplite_dataset* p = nullptr;
  ~DatasetHandle() { hoplite_dataset_close(p); }
};
struct ContextHandle {
  hoplite_context* p = nullptr;
  ~ContextHandle() { hoplite_context_close(p); }
};
struct ModelHandle {
  hoplite_model* p = nullptr;
  ~ModelHandle() { hoplite_model_close(p); }
};
struct CString {
  char* p = nullptr;
  ~CString() { hoplite_free(p); }
  std::string str() const { return p ? p : ""; }
};

void open_dataset(const RunConfig& config, DatasetHandle& d) {
  const auto& ds = config.dataset;
  auto c_or_null = [](const std::string& s) { return s.empty() ? nullptr : s.c_str(); };
  check(hoplite_dataset_open(ds.edges.c_str(), ds.features.c_str(), c_or_null(ds.labels),
                             c_or_null(ds.train_split), c_or_null(ds.val_split),
                             c_or_null(ds.test_split), &d.p),
        "opening dataset");
  log_line("dataset: " + std::to_string(hoplite_dataset_num_nodes(d.p)) + " nodes, " +
           std::to_string(hoplite_dataset_num_edges(d.p)) + " edges, " +
           std::to_string(hoplite_dataset_feature_dim(d.p)) + " features");
}

std::string input_hash(const RunConfig& config) {
  json files = json::array();
  for (const std::string& p :
       {config.dataset.edges, config.dataset.features, config.dataset.labels,
        config.dataset.train_split, config.dataset.val_split, config.dataset.test_split})
    if (!p.empty()) files.push_back(hash_file(p));
  return hash_json(files);
}

std::string context_cache_path(const RunConfig& config) {
  if (!config.context_cache.empty()) return config.context_cache;
  std::string name = "context";
  for (std::uint32_t b : config.policy) name += "-" + std::to_string(b);
  return (fs::path(config.output_dir) / (name + ".s2cx")).string();
}

// Composed per-cell trainer config handed to the C API; its hash names the
// cell's artifact directory.
json cell_config(const RunConfig& config, double lr, std::uint32_t epochs) {
  json cell = config.train;
  cell.erase("grid");
  cell["policy"] = config.policy;
  cell["lr"] = lr;
  cell["epochs"] = epochs;
  cell["seed"] = config.seed;
  cell["deterministic"] = config.deterministic;
  return cell;
}

json default_cell(const RunConfig& config) {
  const double lr = config.train.value("lr", 0.001);
  const std::uint32_t epochs = config.train.value("epochs", 100u);
  return cell_config(config, lr, epochs);
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out.good()) throw InputError("write failed: " + path.string());
}

void emit(const json& j) { std::cout << j.dump() << std::endl; }

// ---- prepare --------------------------------------------------------------

int cmd_prepare(const RunConfig& config) {
  DatasetHandle dataset;
  open_dataset(config, dataset);
  const std::string cache = context_cache_path(config);
  const std::string inputs = input_hash(config);

  json out{{"task", "prepare"},
           {"cache", cache},
           {"policy", config.policy},
           {"inputs_hash", inputs},
           {"seed", config.seed}};

  ContextHandle context;
  if (fs::exists(cache) &&
      hoplite_context_load(dataset.p, cache.c_str(), &context.p) == HOPLITE_OK &&
      hoplite_context_cap(context.p) == config.policy.back()) {
    log_line("prepare: cache " + cache + " already present and compatible; nothing to do");
    out["cached"] = true;
  } else {
    hoplite_context_close(context.p);
    context.p = nullptr;
    check(hoplite_context_build(dataset.p, config.policy.data(),
                                static_cast<uint32_t>(config.policy.size()), 0, &context.p),
          "building context");
    fs::create_directories(fs::path(cache).parent_path().empty() ? "." : fs::path(cache).parent_path());
    check(hoplite_context_save(context.p, cache.c_str()), "saving context cache");
    out["cached"] = false;
  }

  const uint32_t cap = hoplite_context_cap(context.p);
  std::vector<uint64_t> totals(cap);
  check(hoplite_context_bucket_totals(context.p, totals.data(), totals.size()), "bucket totals");
  out["bucket_totals"] = totals;
  for (uint32_t k = 0; k < cap; ++k)
    log_line("  hop " + std::to_string(k + 1) + ": " + std::to_string(totals[k]) + " entries");
  out["config_hash"] = hash_json(json{{"dataset", inputs}, {"policy", config.policy}});
  emit(out);
  return 0;
}

// ---- train ----------------------------------------------------------------

struct CellResult {
  json cell;
  std::string hash;
  json report;
  bool cached = false;
};

std::mutex g_log_mutex;

CellResult run_cell(const hoplite_dataset* dataset, const hoplite_context* context,
                    const RunConfig& config, const json& cell, const std::string& inputs) {
  CellResult result;
  result.cell = cell;
  result.hash = hash_json(cell);
  const fs::path dir = fs::path(config.output_dir) / result.hash;
  const fs::path report_path = dir / "report.json";

  if (fs::exists(report_path)) {
    std::ifstream in(report_path);
    json existing;
    in >> existing;
    if (existing.value("inputs_hash", "") == inputs) {
      std::lock_guard<std::mutex> lock(g_log_mutex);
      log_line("train " + result.hash + ": report already present; skipping");
      result.report = existing;
      result.cached = true;
      return result;
    }
  }
  fs::create_directories(dir);

  json request = cell;
  request["checkpoint_path"] = (dir / "checkpoint.bin").string();
  request["embeddings_path"] = (dir / "embeddings.txt").string();

  struct ProgressCtx {
    std::string tag;
    uint32_t epochs;
  } ctx{result.hash.substr(0, 8), cell.value("epochs", 100u)};
  auto progress = [](uint32_t epoch, double loss, double seconds, void* user) {
    const auto* c = static_cast<ProgressCtx*>(user);
    std::lock_guard<std::mutex> lock(g_log_mutex);
    std::fprintf(stderr, "[%s] epoch %u/%u loss %.4f (%.1fs)\n", c->tag.c_str(), epoch,
                 c->epochs, loss, seconds);
  };

  CString report_json;
  ModelHandle model;
  check(hoplite_train(dataset, context, request.dump().c_str(), progress, &ctx, &report_json.p,
                      &model.p),
        "training cell " + result.hash);

  result.report = json{{"task", "train"},
                       {"config_hash", result.hash},
                       {"inputs_hash", inputs},
                       {"seed", config.seed},
                       {"config", cell},
                       {"report", json::parse(report_json.str())}};
  write_json_file(report_path, result.report);
  return result;
}

int cmd_train(const RunConfig& config, bool grid_mode) {
  DatasetHandle dataset;
  open_dataset(config, dataset);
  const std::string cache = context_cache_path(config);
  ContextHandle context;
  if (hoplite_context_load(dataset.p, cache.c_str(), &context.p) != HOPLITE_OK)
    throw InputError("context cache " + cache +
                     " missing or invalid; run `hoplite prepare --config ...` first (" +
                     hoplite_last_error() + ")");
  if (hoplite_context_cap(context.p) != config.policy.back())
    throw InputError("context cache " + cache + " was built for a different policy cap; rerun prepare");
  const std::string inputs = input_hash(config);

  std::vector<json> cells;
  if (grid_mode) {
    const auto lrs = config.grid.value("lr", std::vector<double>{0.001, 0.003, 0.005, 0.007, 0.009});
    const auto epoch_grid =
        config.grid.value("epochs", std::vector<std::uint32_t>{100, 200, 300});
    if (lrs.empty() || epoch_grid.empty())
      throw InputError("grid mode: train.grid.lr and train.grid.epochs must be nonempty");
    for (double lr : lrs)
      for (std::uint32_t epochs : epoch_grid) cells.push_back(cell_config(config, lr, epochs));
  } else {
    cells.push_back(default_cell(config));
  }

  std::vector<CellResult> results(cells.size());
  const int jobs = std::max(1, config.jobs);
  std::size_t next = 0;
  std::mutex next_mutex;
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(cells.size());
  for (int w = 0; w < std::min<std::size_t>(jobs, cells.size()); ++w)
    workers.emplace_back([&] {
      for (;;) {
        std::size_t mine;
        {
          std::lock_guard<std::mutex> lock(next_mutex);
          if (next >= cells.size()) return;
          mine = next++;
        }
        try {
          results[mine] = run_cell(dataset.p, context.p, config, cells[mine], inputs);
        } catch (...) {
          errors[mine] = std::current_exception();
        }
      }
    });
  for (auto& t : workers) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const CellResult& r : results) {
    json out = r.report;
    out["cached"] = r.cached;
    emit(out);
  }
  return 0;
}

// ---- eval -------------------------------------------------------------------

int cmd_eval(const RunConfig& config, const std::string& task) {
  if (task.empty())
    throw InputError("eval: --task is required (classify, cluster or linkpred)");
  if (task != "classify" && task != "cluster" && task != "linkpred")
    throw InputError("eval: unknown task \"" + task + "\"");

  DatasetHandle dataset;
  open_dataset(config, dataset);
  const std::string inputs = input_hash(config);
  const json cell = default_cell(config);
  const std::string cell_hash = hash_json(cell);
  const fs::path dir = fs::path(config.output_dir) / cell_hash;

  json eval_config;
  ModelHandle model;
  if (task == "linkpred") {
    eval_config = config.eval_linkpred;
    json train = cell;
    train.erase("checkpoint_path");
    train.erase("embeddings_path");
    eval_config["train"] = train;
    if (!eval_config.contains("seed")) eval_config["seed"] = config.seed;
  } else {
    const fs::path checkpoint = dir / "checkpoint.bin";
    if (!fs::exists(checkpoint))
      throw InputError("eval: checkpoint " + checkpoint.string() +
                       " not found; run `hoplite train --config ...` first");
    check(hoplite_model_load(checkpoint.string().c_str(), &model.p), "loading checkpoint");
    eval_config = task == "classify" ? config.eval_classify : config.eval_cluster;
    if (!eval_config.contains("seed")) eval_config["seed"] = config.seed;
  }

  const std::string metrics_hash = hash_json(json{{"cell", cell}, {"eval", eval_config}});
  const fs::path metrics_path =
      task == "linkpred" ? fs::path(config.output_dir) / ("linkpred_" + metrics_hash + ".json")
                         : dir / ("metrics_" + task + "_" + metrics_hash + ".json");
  if (fs::exists(metrics_path)) {
    std::ifstream in(metrics_path);
    json existing;
    in >> existing;
    if (existing.value("inputs_hash", "") == inputs) {
      log_line("eval: metrics already present at " + metrics_path.string());
      emit(existing);
      return 0;
    }
  }

  CString metrics_json;
  check(hoplite_eval(dataset.p, model.p, task.c_str(), eval_config.dump().c_str(),
                     &metrics_json.p),
        "eval " + task);
  json out = json::parse(metrics_json.str());
  out["dataset"] = config.dataset.edges;
  out["config_hash"] = metrics_hash;
  out["inputs_hash"] = inputs;
  out["seed"] = config.seed;
  fs::create_directories(metrics_path.parent_path());
  write_json_file(metrics_path, out);
  emit(out);
  return 0;
}

// ---- ablate -----------------------------------------------------------------

int cmd_ablate(const RunConfig& config, bool check_trend_flag) {
  DatasetHandle dataset;
  open_dataset(config, dataset);
  const std::string inputs = input_hash(config);

  std::vector<std::vector<std::uint32_t>> policies = config.ablate.value(
      "policies", std::vector<std::vector<std::uint32_t>>{
                      {1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4}, {1, 2, 3, 4, 5}});
  const bool check_trend = check_trend_flag || config.ablate.value("check_trend", false);

  json rows = json::array();
  double acc_alpha2 = -1.0, acc_alpha4 = -1.0;
  for (const auto& boundaries : policies) {
    RunConfig variant = config;
    variant.policy = boundaries;
    variant.context_cache.clear();

    const std::string cache = context_cache_path(variant);
    ContextHandle context;
    if (hoplite_context_load(dataset.p, cache.c_str(), &context.p) != HOPLITE_OK ||
        hoplite_context_cap(context.p) != boundaries.back()) {
      hoplite_context_close(context.p);
      context.p = nullptr;
      check(hoplite_context_build(dataset.p, boundaries.data(),
                                  static_cast<uint32_t>(boundaries.size()), 0, &context.p),
            "building context");
      fs::create_directories(config.output_dir);
      check(hoplite_context_save(context.p, cache.c_str()), "saving context cache");
    }

    const json cell = default_cell(variant);
    CellResult trained = run_cell(dataset.p, context.p, variant, cell, inputs);

    const fs::path dir = fs::path(config.output_dir) / trained.hash;
    ModelHandle model;
    check(hoplite_model_load((dir / "checkpoint.bin").string().c_str(), &model.p),
          "loading checkpoint");
    json eval_config = config.eval_classify;
    if (!eval_config.contains("seed")) eval_config["seed"] = config.seed;
    CString metrics_json;
    check(hoplite_eval(dataset.p, model.p, "classify", eval_config.dump().c_str(),
                       &metrics_json.p),
          "eval classify");
    const json metrics = json::parse(metrics_json.str());

    const std::uint32_t alpha = static_cast<std::uint32_t>(boundaries.size()) + 1;
    json row{{"policy", boundaries},
             {"alpha", alpha},
             {"config_hash", trained.hash},
             {"accuracy_mean", metrics["mean"]},
             {"accuracy_std", metrics["std"]},
             {"runs", metrics["runs"]}};
    rows.push_back(row);
    {
      std::ostringstream line;
      line << "ablate: alpha=" << alpha << " policy=[";
      for (std::size_t i = 0; i < boundaries.size(); ++i)
        line << (i ? "," : "") << boundaries[i];
      line << "] accuracy=" << metrics["mean"].get<double>();
      log_line(line.str());
    }
    if (boundaries == std::vector<std::uint32_t>{1}) acc_alpha2 = metrics["mean"].get<double>();
    if (alpha == 4) acc_alpha4 = metrics["mean"].get<double>();
  }

  json out{{"task", "ablate"},
           {"rows", rows},
           {"inputs_hash", inputs},
           {"seed", config.seed},
           {"config_hash", hash_json(json{{"policies", policies}, {"train", config.train}})}};
  if (check_trend && acc_alpha2 >= 0.0 && acc_alpha4 >= 0.0)
    out["trend_alpha4_ge_alpha2"] = acc_alpha4 >= acc_alpha2;
  fs::create_directories(config.output_dir);
  write_json_file(fs::path(config.output_dir) / ("ablate_" + out["config_hash"].get<std::string>() + ".json"),
                  out);
  emit(out);
  if (check_trend && acc_alpha2 >= 0.0 && acc_alpha4 >= 0.0 && acc_alpha4 < acc_alpha2) {
    log_line("ablate: trend check failed (alpha=4 accuracy below alpha=2)");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hoplite: self-supervised graph embeddings via hop-category prediction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hoplite ") + hoplite_version());

  std::string config_path, task;
  bool grid = false, deterministic = false, check_trend = false;
  int jobs = 0;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "run config JSON")->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_flag("--deterministic", deterministic, "force deterministic mode");
    sub->add_option("--jobs", jobs, "parallel workers for grid/ablation cells");
  };
  CLI::App* prepare = app.add_subcommand("prepare", "build the hop-context cache");
  add_common(prepare);
  CLI::App* train = app.add_subcommand("train", "train embeddings");
  add_common(train);
  train->add_flag("--grid", grid, "train every (lr, epochs) grid cell");
  CLI::App* eval = app.add_subcommand("eval", "evaluate frozen embeddings");
  add_common(eval);
  eval->add_option("--task", task, "classify | cluster | linkpred");
  CLI::App* ablate = app.add_subcommand("ablate", "compare merge policies");
  add_common(ablate);
  ablate->add_flag("--check-trend", check_trend, "exit 1 unless alpha=4 beats alpha=2");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    if (deterministic) config.deterministic = true;
    if (jobs > 0) config.jobs = jobs;
    fs::create_directories(config.output_dir);

    if (prepare->parsed()) return cmd_prepare(config);
    if (train->parsed()) return cmd_train(config, grid);
    if (eval->parsed()) return cmd_eval(config, task);
    if (ablate->parsed()) return cmd_ablate(config, check_trend);
    throw InputError("no subcommand");
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const RuntimeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
