#include "hoplite.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "hoplite/context.hpp"
#include "hoplite/eval.hpp"
#include "hoplite/graph.hpp"
#include "hoplite/model.hpp"
#include "hoplite/trainer.hpp"

using nlohmann::json;

struct hoplite_dataset {
  hoplite::Dataset data;
};
struct hoplite_context {
  hoplite::ContextIndex index;
};
struct hoplite_model {
  hoplite::Checkpoint ck;
};

namespace {

thread_local std::string t_last_error;

template <typename F>
hoplite_status guarded(F&& body) noexcept {
  try {
    body();
    t_last_error.clear();
    return HOPLITE_OK;
  } catch (const hoplite::IoError& e) {
    t_last_error = e.what();
  } catch (const hoplite::ParseError& e) {
    t_last_error = e.what();
  } catch (const hoplite::FormatError& e) {
    t_last_error = e.what();
  } catch (const hoplite::DimensionError& e) {
    t_last_error = e.what();
  } catch (const hoplite::InvalidArgument& e) {
    t_last_error = e.what();
  } catch (const json::exception& e) {
    t_last_error = std::string("config: ") + e.what();
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return HOPLITE_ERR_RUNTIME;
  } catch (...) {
    t_last_error = "unknown error";
    return HOPLITE_ERR_RUNTIME;
  }
  return HOPLITE_ERR_INPUT;
}

hoplite_status fail_input(const std::string& message) {
  t_last_error = message;
  return HOPLITE_ERR_INPUT;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::string opt_path(const char* p) { return p ? std::string(p) : std::string(); }

json parse_object(const char* config_json, const char* what) {
  if (config_json == nullptr || *config_json == '\0') return json::object();
  json j = json::parse(config_json);
  if (!j.is_object())
    throw hoplite::InvalidArgument(std::string(what) + ": config must be a JSON object");
  return j;
}

template <typename T>
T take(json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  T value = it->template get<T>();
  j.erase(it);
  return value;
}

void reject_unknown(const json& j, const char* what) {
  if (j.empty()) return;
  throw hoplite::InvalidArgument(std::string(what) + ": unknown config key \"" +
                                 j.begin().key() + "\"");
}

hoplite::TrainConfig train_config_from_json(json j, const char* what) {
  hoplite::TrainConfig config;
  const auto boundaries =
      take<std::vector<std::uint32_t>>(j, "policy", config.policy.boundaries);
  config.policy = hoplite::MergePolicy{boundaries};
  config.embedding_dim = take<std::uint32_t>(j, "embedding_dim", config.embedding_dim);
  config.num_layers = take<std::uint32_t>(j, "num_layers", config.num_layers);
  config.epochs = take<std::uint32_t>(j, "epochs", config.epochs);
  config.lr = take<double>(j, "lr", config.lr);
  config.sampler.targets_per_batch =
      take<std::uint32_t>(j, "targets_per_batch", config.sampler.targets_per_batch);
  config.sampler.pairs_per_category_per_target = take<std::uint32_t>(
      j, "pairs_per_category_per_target", config.sampler.pairs_per_category_per_target);
  config.sampler.far_includes_unreachable =
      take<bool>(j, "far_includes_unreachable", config.sampler.far_includes_unreachable);
  config.batches_per_epoch = take<std::uint32_t>(j, "batches_per_epoch", config.batches_per_epoch);
  config.seed = take<std::uint64_t>(j, "seed", config.seed);
  config.deterministic = take<bool>(j, "deterministic", config.deterministic);
  config.divergence_threshold = take<double>(j, "divergence_threshold", config.divergence_threshold);
  config.checkpoint_path = take<std::string>(j, "checkpoint_path", config.checkpoint_path);
  config.embeddings_path = take<std::string>(j, "embeddings_path", config.embeddings_path);
  reject_unknown(j, what);
  config.validate();
  return config;
}

// Stream tag separating split generation from the classifier's run streams.
constexpr std::uint64_t kSplitStreamTag = 0x53504C4954ull;

hoplite::EvalSplit classification_split(const hoplite::Dataset& data, json& j) {
  const auto& labels = *data.labels;
  const auto per_class = take<std::uint32_t>(j, "train_per_class", 20u);
  const auto val_count = take<std::uint32_t>(j, "val_count", 500u);
  const auto test_count = take<std::uint32_t>(j, "test_count", 1000u);
  if (!labels.train.empty() && !labels.test.empty()) {
    hoplite::EvalSplit split;
    split.train = labels.train;
    split.validation = labels.val;
    split.test = labels.test;
    return split;
  }
  const auto seed = j.contains("seed") ? j.at("seed").get<std::uint64_t>() : 0u;
  hoplite::Rng rng = hoplite::Rng::substream(seed, kSplitStreamTag);
  return hoplite::stratified_split(labels.labels, labels.num_classes, per_class, val_count,
                                   test_count, rng);
}

}  // namespace

extern "C" {

const char* hoplite_version(void) { return "0.1.0"; }

const char* hoplite_last_error(void) { return t_last_error.c_str(); }

void hoplite_free(char* s) { std::free(s); }

hoplite_status hoplite_dataset_open(const char* edges_path, const char* features_path,
                                    const char* labels_path, const char* train_split_path,
                                    const char* val_split_path, const char* test_split_path,
                                    hoplite_dataset** out) {
  if (!out) return fail_input("dataset_open: out is null");
  *out = nullptr;
  if (!edges_path || !features_path)
    return fail_input("dataset_open: edges_path and features_path are required");
  return guarded([&] {
    auto d = std::make_unique<hoplite_dataset>();
    d->data = hoplite::load_dataset(edges_path, features_path, opt_path(labels_path),
                                    opt_path(train_split_path), opt_path(val_split_path),
                                    opt_path(test_split_path));
    *out = d.release();
  });
}

void hoplite_dataset_close(hoplite_dataset* d) { delete d; }

uint32_t hoplite_dataset_num_nodes(const hoplite_dataset* d) {
  return d ? d->data.graph.num_nodes : 0;
}

uint64_t hoplite_dataset_num_edges(const hoplite_dataset* d) {
  return d ? d->data.graph.num_edges : 0;
}

uint32_t hoplite_dataset_feature_dim(const hoplite_dataset* d) {
  return d ? static_cast<uint32_t>(d->data.features.cols()) : 0;
}

uint32_t hoplite_dataset_num_classes(const hoplite_dataset* d) {
  return d && d->data.labels ? d->data.labels->num_classes : 0;
}

hoplite_status hoplite_context_build(const hoplite_dataset* d, const uint32_t* boundaries,
                                     uint32_t num_boundaries, int num_threads,
                                     hoplite_context** out) {
  if (!out) return fail_input("context_build: out is null");
  *out = nullptr;
  if (!d) return fail_input("context_build: dataset is null");
  if (!boundaries || num_boundaries == 0)
    return fail_input("context_build: at least one merge boundary is required");
  return guarded([&] {
    hoplite::MergePolicy policy{{boundaries, boundaries + num_boundaries}};
    auto c = std::make_unique<hoplite_context>();
    c->index = hoplite::build_context(d->data.graph, policy, num_threads);
    *out = c.release();
  });
}

hoplite_status hoplite_context_save(const hoplite_context* c, const char* path) {
  if (!c) return fail_input("context_save: context is null");
  if (!path) return fail_input("context_save: path is null");
  return guarded([&] { c->index.save(path); });
}

hoplite_status hoplite_context_load(const hoplite_dataset* d, const char* path,
                                    hoplite_context** out) {
  if (!out) return fail_input("context_load: out is null");
  *out = nullptr;
  if (!d) return fail_input("context_load: dataset is null");
  if (!path) return fail_input("context_load: path is null");
  return guarded([&] {
    auto c = std::make_unique<hoplite_context>();
    c->index = hoplite::ContextIndex::load(path, d->data.graph);
    *out = c.release();
  });
}

void hoplite_context_close(hoplite_context* c) { delete c; }

uint32_t hoplite_context_cap(const hoplite_context* c) { return c ? c->index.cap() : 0; }

hoplite_status hoplite_context_bucket_totals(const hoplite_context* c, uint64_t* totals,
                                             size_t len) {
  if (!c) return fail_input("bucket_totals: context is null");
  if (!totals) return fail_input("bucket_totals: totals is null");
  if (len != c->index.cap()) return fail_input("bucket_totals: len must equal the context cap");
  return guarded([&] {
    const auto t = c->index.bucket_totals();
    std::copy(t.begin(), t.end(), totals);
  });
}

hoplite_status hoplite_train(const hoplite_dataset* d, const hoplite_context* c,
                             const char* config_json, hoplite_progress_fn progress, void* user,
                             char** report_json, hoplite_model** out_model) {
  if (report_json) *report_json = nullptr;
  if (out_model) *out_model = nullptr;
  if (!d) return fail_input("train: dataset is null");
  if (!c) return fail_input("train: context is null");
  return guarded([&] {
    hoplite::TrainConfig config =
        train_config_from_json(parse_object(config_json, "train"), "train");
    if (progress)
      config.on_epoch = [progress, user](std::uint32_t epoch, double loss, double secs) {
        progress(epoch, loss, secs, user);
      };
    hoplite::TrainResult result = hoplite::train(d->data.graph, d->data.features, c->index, config);
    if (report_json) {
      json report{{"epochs", result.report.epoch_losses.size()},
                  {"final_loss", result.report.final_loss},
                  {"wall_seconds", result.report.wall_seconds},
                  {"steps", result.report.steps},
                  {"epoch_losses", result.report.epoch_losses},
                  {"checkpoint_path", result.report.checkpoint_path},
                  {"embeddings_path", result.report.embeddings_path}};
      *report_json = dup_string(report.dump());
    }
    if (out_model) {
      auto m = std::make_unique<hoplite_model>();
      m->ck.params = std::move(result.params);
      m->ck.adam = std::move(result.adam);
      m->ck.embeddings = std::move(result.embeddings);
      *out_model = m.release();
    }
  });
}

hoplite_status hoplite_model_save(const hoplite_model* m, const char* path) {
  if (!m) return fail_input("model_save: model is null");
  if (!path) return fail_input("model_save: path is null");
  return guarded(
      [&] { hoplite::save_checkpoint(path, m->ck.params, m->ck.adam, m->ck.embeddings); });
}

hoplite_status hoplite_model_load(const char* path, hoplite_model** out) {
  if (!out) return fail_input("model_load: out is null");
  *out = nullptr;
  if (!path) return fail_input("model_load: path is null");
  return guarded([&] {
    auto m = std::make_unique<hoplite_model>();
    m->ck = hoplite::load_checkpoint(path);
    *out = m.release();
  });
}

void hoplite_model_close(hoplite_model* m) { delete m; }

uint32_t hoplite_model_embedding_dim(const hoplite_model* m) {
  return m ? m->ck.params.embedding_dim() : 0;
}

hoplite_status hoplite_model_export_embeddings(const hoplite_model* m, const hoplite_dataset* d,
                                               const char* path) {
  if (!m) return fail_input("export_embeddings: model is null");
  if (!d) return fail_input("export_embeddings: dataset is null");
  if (!path) return fail_input("export_embeddings: path is null");
  return guarded(
      [&] { hoplite::export_embeddings(m->ck.embeddings, path, d->data.graph.original_ids); });
}

hoplite_status hoplite_eval(const hoplite_dataset* d, const hoplite_model* m, const char* task,
                            const char* config_json, char** metrics_json) {
  if (metrics_json) *metrics_json = nullptr;
  if (!d) return fail_input("eval: dataset is null");
  if (!task) return fail_input("eval: task is null");
  const std::string task_name = task;
  return guarded([&] {
    json j = parse_object(config_json, "eval");
    json out;
    if (task_name == "classify") {
      if (!m) throw hoplite::InvalidArgument("eval classify: a trained model is required");
      if (!d->data.labels) throw hoplite::InvalidArgument("eval classify: dataset has no labels");
      hoplite::LogRegOptions opts;
      opts.runs = take<std::uint32_t>(j, "runs", opts.runs);
      opts.l2 = take<double>(j, "l2", opts.l2);
      opts.step = take<double>(j, "step", opts.step);
      opts.max_iters = take<std::uint32_t>(j, "max_iters", opts.max_iters);
      opts.tol = take<double>(j, "tol", opts.tol);
      opts.row_normalize = take<bool>(j, "row_normalize", opts.row_normalize);
      const hoplite::EvalSplit split = classification_split(d->data, j);
      opts.seed = take<std::uint64_t>(j, "seed", opts.seed);
      reject_unknown(j, "eval classify");
      const hoplite::Metrics metrics =
          hoplite::logreg_classify(m->ck.embeddings, d->data.labels->labels,
                                   d->data.labels->num_classes, split, opts);
      out = {{"task", "classify"}, {"mean", metrics.mean},     {"std", metrics.stddev},
             {"micro_f1", metrics.micro_f1}, {"runs", metrics.runs}};
      if (!metrics.warning.empty()) out["warning"] = metrics.warning;
    } else if (task_name == "cluster") {
      if (!m) throw hoplite::InvalidArgument("eval cluster: a trained model is required");
      if (!d->data.labels) throw hoplite::InvalidArgument("eval cluster: dataset has no labels");
      hoplite::KMeansOptions opts;
      const auto k = take<std::uint32_t>(j, "k", d->data.labels->num_classes);
      opts.runs = take<std::uint32_t>(j, "runs", opts.runs);
      opts.restarts = take<std::uint32_t>(j, "restarts", opts.restarts);
      opts.max_iters = take<std::uint32_t>(j, "max_iters", opts.max_iters);
      opts.row_normalize = take<bool>(j, "row_normalize", opts.row_normalize);
      opts.seed = take<std::uint64_t>(j, "seed", opts.seed);
      reject_unknown(j, "eval cluster");
      const hoplite::Metrics metrics =
          hoplite::kmeans_nmi(m->ck.embeddings, k, d->data.labels->labels, opts);
      out = {{"task", "cluster"},
             {"k", k},
             {"mean", metrics.mean},
             {"std", metrics.stddev},
             {"runs", metrics.runs}};
    } else if (task_name == "linkpred") {
      const double ratio = take<double>(j, "ratio", 0.2);
      const auto runs = take<std::uint32_t>(j, "runs", 10u);
      const auto seed = take<std::uint64_t>(j, "seed", 0u);
      const std::string scorer = take<std::string>(j, "scorer", "hop_classifier");
      hoplite::LinkScoreKind kind;
      if (scorer == "hop_classifier")
        kind = hoplite::LinkScoreKind::kHopClassifier;
      else if (scorer == "inner_product")
        kind = hoplite::LinkScoreKind::kInnerProduct;
      else
        throw hoplite::InvalidArgument("eval linkpred: unknown scorer \"" + scorer + "\"");
      json train_json = take<json>(j, "train", json::object());
      reject_unknown(j, "eval linkpred");
      hoplite::TrainConfig cell = train_config_from_json(train_json, "eval linkpred train");
      cell.checkpoint_path.clear();
      cell.embeddings_path.clear();
      const hoplite::Mat& features = d->data.features;
      const auto retrain = [&](const hoplite::Graph& damaged) {
        const hoplite::ContextIndex index = hoplite::build_context(damaged, cell.policy);
        return hoplite::train(damaged, features, index, cell);
      };
      const hoplite::Metrics metrics =
          hoplite::link_prediction(d->data.graph, ratio, retrain, kind, runs, seed);
      out = {{"task", "linkpred"}, {"ratio", ratio},        {"scorer", scorer},
             {"mean", metrics.mean}, {"std", metrics.stddev}, {"runs", metrics.runs}};
    } else {
      throw hoplite::InvalidArgument("eval: unknown task \"" + task_name +
                                     "\" (expected classify, cluster or linkpred)");
    }
    if (metrics_json) *metrics_json = dup_string(out.dump());
  });
}

}  // extern "C"
