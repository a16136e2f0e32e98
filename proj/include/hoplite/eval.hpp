#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/graph.hpp"
#include "hoplite/model.hpp"
#include "hoplite/trainer.hpp"

namespace hoplite {

// Node index lists for classification.
struct EvalSplit {
  std::vector<NodeId> train;
  std::vector<NodeId> test;
  std::vector<NodeId> validation;  // optional, unused by the evaluators
};

struct Metrics {
  double mean = 0.0;    // accuracy / NMI / AUC depending on the task
  double stddev = 0.0;  // over runs
  double micro_f1 = 0.0;
  std::uint32_t runs = 0;
  std::string warning;  // nonempty on degenerate-but-tolerated inputs
};

// When split files are absent: `train_per_class` nodes per class, then
// `val_count` and `test_count` from the shuffled remainder.
EvalSplit stratified_split(const std::vector<std::int32_t>& labels, std::uint32_t num_classes,
                           std::uint32_t train_per_class, std::uint32_t val_count,
                           std::uint32_t test_count, Rng& rng);

struct LogRegOptions {
  std::uint32_t runs = 50;
  double l2 = 1e-4;
  double step = 0.1;
  std::uint32_t max_iters = 2000;
  double tol = 1e-7;
  // L2-normalize embedding rows first; softmax regression on raw relu
  // activations is scale-sensitive, normalized rows are not.
  bool row_normalize = true;
  std::uint64_t seed = 0;
};

// Multinomial logistic regression on frozen embeddings, full-batch gradient
// descent, averaged over `runs` re-initializations. labels[i] < 0 means
// unlabeled; split nodes must be labeled. For single-label prediction the
// micro-F1 equals the accuracy, and Metrics reports it as such.
Metrics logreg_classify(const Mat& z, const std::vector<std::int32_t>& labels,
                        std::uint32_t num_classes, const EvalSplit& split,
                        const LogRegOptions& opts);

// Multi-label variant: y01 is an n x k 0/1 matrix; k independent one-vs-rest
// sigmoid classifiers, prediction threshold 0.5, micro-F1 over the test rows.
Metrics logreg_classify_multilabel(const Mat& z, const Mat& y01, const EvalSplit& split,
                                   const LogRegOptions& opts);

struct KMeansOptions {
  std::uint32_t runs = 10;
  std::uint32_t restarts = 10;  // k-means++ restarts per run, best inertia kept
  std::uint32_t max_iters = 300;
  bool row_normalize = true;
  std::uint64_t seed = 0;
};

// K-means on the embedding rows; Metrics.mean is the NMI against `labels`
// (nodes with label < 0 excluded from the score), averaged over runs.
Metrics kmeans_nmi(const Mat& z, std::uint32_t k, const std::vector<std::int32_t>& labels,
                   const KMeansOptions& opts);

// Normalized mutual information with arithmetic-mean normalization:
// 2 I(a;b) / (H(a) + H(b)).
double nmi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);

// Mann-Whitney rank statistic with tie correction (ties count 0.5),
// O(N log N). Throws unless both label values are present.
double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels);

// One materialized link-prediction instance: `removed` fraction of the
// undirected edges held out as positives, equally many verified non-edges
// (with respect to the ORIGINAL graph) as negatives, and the damaged graph
// rebuilt from the kept edges over the same node set.
struct LinkSplit {
  Graph damaged;
  std::vector<std::pair<NodeId, NodeId>> positives;
  std::vector<std::pair<NodeId, NodeId>> negatives;
};
LinkSplit make_link_split(const Graph& g, double removal_ratio, Rng& rng);

enum class LinkScoreKind {
  kHopClassifier,  // softmax probability of the 1-hop category (default)
  kInnerProduct,
};

// Retrains on each damaged graph via the callback and scores held-out pairs.
// Metrics.mean is the AUC averaged over `runs` independent removals.
using RetrainFn = std::function<TrainResult(const Graph& damaged)>;
Metrics link_prediction(const Graph& g, double removal_ratio, const RetrainFn& retrain,
                        LinkScoreKind kind, std::uint32_t runs, std::uint64_t seed);

// Pair scores used by link_prediction, exposed for tests.
std::vector<double> score_pairs(const std::vector<std::pair<NodeId, NodeId>>& pairs,
                                const Mat& z, const ModelParams& params, LinkScoreKind kind);

}  // namespace hoplite
