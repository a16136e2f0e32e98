#include "hoplite/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace hoplite {
namespace {

Mat rows_of(const Mat& z, const std::vector<NodeId>& idx) {
  Mat out(static_cast<Eigen::Index>(idx.size()), z.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= z.rows()) throw InvalidArgument("eval: split node id out of range");
    out.row(static_cast<Eigen::Index>(i)) = z.row(idx[i]);
  }
  return out;
}

void normalize_rows(Mat& x) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double n = x.row(i).norm();
    if (n > 0.0) x.row(i) /= n;
  }
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v, double mean) {
  double acc = 0.0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

std::vector<std::int32_t> split_labels(const std::vector<std::int32_t>& labels,
                                       const std::vector<NodeId>& idx, std::uint32_t num_classes,
                                       const char* which) {
  std::vector<std::int32_t> out;
  out.reserve(idx.size());
  for (NodeId i : idx) {
    if (i >= labels.size()) throw InvalidArgument("eval: split node id out of range");
    if (labels[i] < 0 || labels[i] >= static_cast<std::int32_t>(num_classes))
      throw InvalidArgument(std::string("eval: unlabeled node in ") + which + " split");
    out.push_back(labels[i]);
  }
  return out;
}

}  // namespace

EvalSplit stratified_split(const std::vector<std::int32_t>& labels, std::uint32_t num_classes,
                           std::uint32_t train_per_class, std::uint32_t val_count,
                           std::uint32_t test_count, Rng& rng) {
  if (num_classes < 2) throw InvalidArgument("stratified_split: need at least two classes");
  std::vector<std::vector<NodeId>> by_class(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0 && labels[i] < static_cast<std::int32_t>(num_classes))
      by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<NodeId>(i));

  EvalSplit split;
  std::vector<NodeId> rest;
  for (std::uint32_t c = 0; c < num_classes; ++c) {
    auto& pool = by_class[c];
    if (pool.size() < train_per_class)
      throw InvalidArgument("stratified_split: class " + std::to_string(c) +
                            " has only " + std::to_string(pool.size()) + " labeled nodes");
    for (std::size_t i = 0; i + 1 < pool.size(); ++i)
      std::swap(pool[i], pool[i + rng.uniform_below(pool.size() - i)]);
    split.train.insert(split.train.end(), pool.begin(), pool.begin() + train_per_class);
    rest.insert(rest.end(), pool.begin() + train_per_class, pool.end());
  }
  if (rest.size() < static_cast<std::size_t>(val_count) + test_count)
    throw InvalidArgument("stratified_split: not enough labeled nodes for val+test");
  for (std::size_t i = 0; i + 1 < rest.size(); ++i)
    std::swap(rest[i], rest[i + rng.uniform_below(rest.size() - i)]);
  split.validation.assign(rest.begin(), rest.begin() + val_count);
  split.test.assign(rest.begin() + val_count, rest.begin() + val_count + test_count);
  return split;
}

Metrics logreg_classify(const Mat& z, const std::vector<std::int32_t>& labels,
                        std::uint32_t num_classes, const EvalSplit& split,
                        const LogRegOptions& opts) {
  if (num_classes < 2) throw InvalidArgument("logreg: need at least two classes");
  if (split.train.empty() || split.test.empty())
    throw InvalidArgument("logreg: empty train or test split");
  if (opts.runs < 1) throw InvalidArgument("logreg: runs must be >= 1");
  const auto ytr = split_labels(labels, split.train, num_classes, "train");
  const auto yte = split_labels(labels, split.test, num_classes, "test");

  Metrics metrics;
  std::vector<bool> seen(num_classes, false);
  for (std::int32_t y : ytr) seen[static_cast<std::size_t>(y)] = true;
  for (std::uint32_t c = 0; c < num_classes; ++c)
    if (!seen[c]) metrics.warning = "class " + std::to_string(c) + " absent from train split";

  Mat xtr = rows_of(z, split.train);
  Mat xte = rows_of(z, split.test);
  if (opts.row_normalize) {
    normalize_rows(xtr);
    normalize_rows(xte);
  }
  const Eigen::Index ntr = xtr.rows();
  const Eigen::Index q = xtr.cols();

  std::vector<double> accs;
  accs.reserve(opts.runs);
  for (std::uint32_t run = 0; run < opts.runs; ++run) {
    Rng rng = Rng::substream(opts.seed, run);
    Mat w = glorot_init(q, num_classes, rng);
    Vec b = Vec::Zero(num_classes);
    Mat logits(ntr, num_classes), probs(ntr, num_classes);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t iter = 0; iter < opts.max_iters; ++iter) {
      logits.noalias() = xtr * w;
      logits.rowwise() += b.transpose();
      double loss = 0.0;
      for (Eigen::Index i = 0; i < ntr; ++i) {
        const double mx = logits.row(i).maxCoeff();
        probs.row(i) = (logits.row(i).array() - mx).exp();
        const double denom = probs.row(i).sum();
        probs.row(i) /= denom;
        loss += std::log(denom) + mx - logits(i, ytr[static_cast<std::size_t>(i)]);
      }
      loss = loss / static_cast<double>(ntr) + 0.5 * opts.l2 * w.squaredNorm();
      if (std::abs(prev - loss) < opts.tol) break;
      prev = loss;
      for (Eigen::Index i = 0; i < ntr; ++i) probs(i, ytr[static_cast<std::size_t>(i)]) -= 1.0;
      probs /= static_cast<double>(ntr);
      w -= opts.step * (xtr.transpose() * probs + opts.l2 * w);
      b -= opts.step * probs.colwise().sum().transpose();
    }
    Mat te_logits = xte * w;
    te_logits.rowwise() += b.transpose();
    std::size_t correct = 0;
    for (Eigen::Index i = 0; i < te_logits.rows(); ++i) {
      Eigen::Index pred;
      te_logits.row(i).maxCoeff(&pred);
      if (pred == yte[static_cast<std::size_t>(i)]) ++correct;
    }
    accs.push_back(static_cast<double>(correct) / static_cast<double>(te_logits.rows()));
  }
  metrics.mean = mean_of(accs);
  metrics.stddev = stddev_of(accs, metrics.mean);
  // One predicted and one true label per node make micro-P = micro-R = accuracy.
  metrics.micro_f1 = metrics.mean;
  metrics.runs = opts.runs;
  return metrics;
}

Metrics logreg_classify_multilabel(const Mat& z, const Mat& y01, const EvalSplit& split,
                                   const LogRegOptions& opts) {
  if (y01.rows() != z.rows()) throw DimensionError("logreg: label matrix rows != embedding rows");
  if (split.train.empty() || split.test.empty())
    throw InvalidArgument("logreg: empty train or test split");
  const Eigen::Index k = y01.cols();
  Mat xtr = rows_of(z, split.train);
  Mat xte = rows_of(z, split.test);
  if (opts.row_normalize) {
    normalize_rows(xtr);
    normalize_rows(xte);
  }
  Mat ytr(static_cast<Eigen::Index>(split.train.size()), k);
  for (std::size_t i = 0; i < split.train.size(); ++i) ytr.row(i) = y01.row(split.train[i]);
  Mat yte(static_cast<Eigen::Index>(split.test.size()), k);
  for (std::size_t i = 0; i < split.test.size(); ++i) yte.row(i) = y01.row(split.test[i]);
  const Eigen::Index ntr = xtr.rows();
  const Eigen::Index q = xtr.cols();

  std::vector<double> f1s;
  f1s.reserve(opts.runs);
  for (std::uint32_t run = 0; run < opts.runs; ++run) {
    Rng rng = Rng::substream(opts.seed, run);
    Mat w = glorot_init(q, k, rng);
    Vec b = Vec::Zero(k);
    Mat logits(ntr, k);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t iter = 0; iter < opts.max_iters; ++iter) {
      logits.noalias() = xtr * w;
      logits.rowwise() += b.transpose();
      // Binary cross-entropy via softplus, mean over samples.
      const double loss =
          ((logits.array().abs() * -1.0).exp().log1p() + logits.array().cwiseMax(0.0) -
           ytr.array() * logits.array())
              .rowwise()
              .sum()
              .mean() +
          0.5 * opts.l2 * w.squaredNorm();
      if (std::abs(prev - loss) < opts.tol) break;
      prev = loss;
      Mat d = ((logits.array() * -1.0).exp() + 1.0).inverse().matrix() - ytr;  // sigmoid - y
      d /= static_cast<double>(ntr);
      w -= opts.step * (xtr.transpose() * d + opts.l2 * w);
      b -= opts.step * d.colwise().sum().transpose();
    }
    Mat te = xte * w;
    te.rowwise() += b.transpose();
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < te.rows(); ++i)
      for (Eigen::Index j = 0; j < k; ++j) {
        const bool pred = te(i, j) >= 0.0;  // sigmoid(x) >= 0.5 iff x >= 0
        const bool truth = yte(i, j) != 0.0;
        tp += pred && truth;
        fp += pred && !truth;
        fn += !pred && truth;
      }
    f1s.push_back(tp == 0 ? 0.0
                          : 2.0 * static_cast<double>(tp) /
                                static_cast<double>(2 * tp + fp + fn));
  }
  Metrics metrics;
  metrics.mean = mean_of(f1s);
  metrics.stddev = stddev_of(f1s, metrics.mean);
  metrics.micro_f1 = metrics.mean;
  metrics.runs = opts.runs;
  return metrics;
}

double nmi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a.size() != b.size())
    throw DimensionError("nmi: label vectors differ in length (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
  if (a.empty()) throw InvalidArgument("nmi: label vectors are empty");
  const std::uint32_t ka = 1 + *std::max_element(a.begin(), a.end());
  const std::uint32_t kb = 1 + *std::max_element(b.begin(), b.end());
  std::vector<std::uint64_t> joint(static_cast<std::size_t>(ka) * kb, 0);
  std::vector<std::uint64_t> ma(ka, 0), mb(kb, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[static_cast<std::size_t>(a[i]) * kb + b[i]]++;
    ma[a[i]]++;
    mb[b[i]]++;
  }
  const double n = static_cast<double>(a.size());
  auto entropy = [n](const std::vector<std::uint64_t>& counts) {
    double h = 0.0;
    for (std::uint64_t c : counts)
      if (c > 0) h -= (c / n) * std::log(c / n);
    return h;
  };
  const double ha = entropy(ma), hb = entropy(mb);
  double mi = 0.0;
  for (std::uint32_t i = 0; i < ka; ++i)
    for (std::uint32_t j = 0; j < kb; ++j) {
      const std::uint64_t c = joint[static_cast<std::size_t>(i) * kb + j];
      if (c > 0) mi += (c / n) * std::log(c * n / (static_cast<double>(ma[i]) * mb[j]));
    }
  if (ha + hb == 0.0) return 1.0;  // both partitions trivial, hence identical
  return std::max(0.0, 2.0 * mi / (ha + hb));
}

namespace {

struct KMeansRun {
  std::vector<std::uint32_t> assignment;
  double inertia = 0.0;
};

KMeansRun kmeans_once(const Mat& x, std::uint32_t k, std::uint32_t max_iters, Rng& rng) {
  const Eigen::Index n = x.rows();
  Mat centroids(k, x.cols());
  // k-means++ seeding.
  Vec d2 = Vec::Zero(n);
  centroids.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_below(n)));
  for (Eigen::Index i = 0; i < n; ++i) d2(i) = (x.row(i) - centroids.row(0)).squaredNorm();
  for (std::uint32_t c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total > 0.0) {
      double target = rng.uniform_real() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        target -= d2(i);
        if (target <= 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.uniform_below(n));
    }
    centroids.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2(i) = std::min(d2(i), (x.row(i) - centroids.row(c)).squaredNorm());
  }

  KMeansRun run;
  run.assignment.assign(n, 0);
  std::vector<std::uint32_t> prev(n, k);  // impossible value forces first update
  Vec mindist(n);
  const Vec xsq = x.rowwise().squaredNorm();
  Mat dots(n, k);
  for (std::uint32_t iter = 0; iter < max_iters; ++iter) {
    dots.noalias() = x * centroids.transpose();
    const Vec csq = centroids.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      std::uint32_t arg = 0;
      for (std::uint32_t c = 0; c < k; ++c) {
        const double d = xsq(i) + csq(c) - 2.0 * dots(i, c);
        if (d < best) {
          best = d;
          arg = c;
        }
      }
      run.assignment[static_cast<std::size_t>(i)] = arg;
      mindist(i) = std::max(0.0, best);
    }
    // Reseed any empty cluster from the point farthest from its centroid.
    for (std::uint32_t c = 0; c < k; ++c) {
      if (std::find(run.assignment.begin(), run.assignment.end(), c) != run.assignment.end())
        continue;
      Eigen::Index far = 0;
      mindist.maxCoeff(&far);
      centroids.row(c) = x.row(far);
      run.assignment[static_cast<std::size_t>(far)] = c;
      mindist(far) = 0.0;
    }
    if (run.assignment == prev) break;
    prev = run.assignment;
    centroids.setZero();
    std::vector<std::uint64_t> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      centroids.row(run.assignment[static_cast<std::size_t>(i)]) += x.row(i);
      counts[run.assignment[static_cast<std::size_t>(i)]]++;
    }
    for (std::uint32_t c = 0; c < k; ++c)
      if (counts[c] > 0) centroids.row(c) /= static_cast<double>(counts[c]);
  }
  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    run.inertia += (x.row(i) - centroids.row(run.assignment[static_cast<std::size_t>(i)]))
                       .squaredNorm();
  return run;
}

}  // namespace

Metrics kmeans_nmi(const Mat& z, std::uint32_t k, const std::vector<std::int32_t>& labels,
                   const KMeansOptions& opts) {
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (z.rows() < static_cast<Eigen::Index>(k))
    throw InvalidArgument("kmeans: fewer points than clusters");
  if (labels.size() != static_cast<std::size_t>(z.rows()))
    throw DimensionError("kmeans: label length != embedding rows");
  if (opts.runs < 1 || opts.restarts < 1)
    throw InvalidArgument("kmeans: runs and restarts must be >= 1");

  Mat x = z;
  if (opts.row_normalize) normalize_rows(x);

  std::vector<std::size_t> labeled;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] >= 0) labeled.push_back(i);
  if (labeled.empty()) throw InvalidArgument("kmeans: no labeled nodes to score against");
  std::vector<std::uint32_t> truth(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i)
    truth[i] = static_cast<std::uint32_t>(labels[labeled[i]]);

  std::vector<double> scores;
  scores.reserve(opts.runs);
  for (std::uint32_t run = 0; run < opts.runs; ++run) {
    KMeansRun best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::uint32_t s = 0; s < opts.restarts; ++s) {
      Rng rng = Rng::substream(opts.seed, static_cast<std::uint64_t>(run) * opts.restarts + s);
      KMeansRun candidate = kmeans_once(x, k, opts.max_iters, rng);
      if (candidate.inertia < best.inertia) best = std::move(candidate);
    }
    std::vector<std::uint32_t> pred(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) pred[i] = best.assignment[labeled[i]];
    scores.push_back(nmi(pred, truth));
  }
  Metrics metrics;
  metrics.mean = mean_of(scores);
  metrics.stddev = stddev_of(scores, metrics.mean);
  metrics.runs = opts.runs;
  return metrics;
}

double auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& labels) {
  if (scores.size() != labels.size())
    throw DimensionError("auc: scores and labels differ in length (" +
                         std::to_string(scores.size()) + " vs " + std::to_string(labels.size()) +
                         ")");
  if (scores.empty()) throw InvalidArgument("auc: scores are empty");
  for (double s : scores)
    if (!std::isfinite(s)) throw NumericError("auc: non-finite score");
  std::uint64_t pos = 0;
  for (std::uint8_t y : labels) {
    if (y > 1) throw InvalidArgument("auc: labels must be 0 or 1");
    pos += y;
  }
  const std::uint64_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0)
    throw InvalidArgument("auc: both label values must be present");

  std::vector<std::uint32_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (std::size_t t = i; t <= j; ++t)
      if (labels[order[t]]) rank_sum_pos += avg_rank;
    i = j + 1;
  }
  return (rank_sum_pos - 0.5 * static_cast<double>(pos) * static_cast<double>(pos + 1)) /
         (static_cast<double>(pos) * static_cast<double>(neg));
}

LinkSplit make_link_split(const Graph& g, double removal_ratio, Rng& rng) {
  if (!(removal_ratio > 0.0 && removal_ratio < 1.0))
    throw InvalidArgument("link split: removal ratio must be in (0, 1)");
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(g.num_edges);
  for (NodeId u = 0; u < g.num_nodes; ++u)
    for (NodeId v : g.neighbors_of(u))
      if (u < v) edges.emplace_back(u, v);
  const std::size_t m = edges.size();
  const std::size_t remove = static_cast<std::size_t>(std::llround(removal_ratio * m));
  if (m < 2 || remove == 0 || remove >= m)
    throw InvalidArgument("link split: ratio leaves no edges to remove or none to keep");

  for (std::size_t i = 0; i < remove; ++i)
    std::swap(edges[i], edges[i + rng.uniform_below(m - i)]);

  LinkSplit split;
  split.positives.assign(edges.begin(), edges.begin() + remove);
  std::vector<std::pair<NodeId, NodeId>> kept(edges.begin() + remove, edges.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> kept64;
  kept64.reserve(kept.size());
  for (auto [u, v] : kept) kept64.emplace_back(u, v);
  split.damaged = Graph::from_edges(kept64, g.num_nodes);

  // Negatives: distinct uniform non-edges of the ORIGINAL graph.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(remove * 2);
  int dry = 0;
  while (split.negatives.size() < remove) {
    if (++dry > 1000)
      throw SamplingError("link split: could not find enough non-edges (graph too dense?)");
    NodeId u = static_cast<NodeId>(rng.uniform_below(g.num_nodes));
    NodeId v = static_cast<NodeId>(rng.uniform_below(g.num_nodes));
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (g.has_edge(u, v)) continue;
    const std::uint64_t key = (static_cast<std::uint64_t>(u) << 32) | v;
    if (!chosen.insert(key).second) continue;
    split.negatives.emplace_back(u, v);
    dry = 0;
  }
  return split;
}

std::vector<double> score_pairs(const std::vector<std::pair<NodeId, NodeId>>& pairs, const Mat& z,
                                const ModelParams& params, LinkScoreKind kind) {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (auto [u, v] : pairs) {
    if (static_cast<Eigen::Index>(u) >= z.rows() || static_cast<Eigen::Index>(v) >= z.rows())
      throw InvalidArgument("score_pairs: node id out of range");
    if (kind == LinkScoreKind::kInnerProduct) {
      scores.push_back(z.row(u).dot(z.row(v)));
    } else {
      const Vec interaction = (z.row(u) - z.row(v)).cwiseAbs().transpose();
      Vec logits = params.classifier_weight.transpose() * interaction + params.classifier_bias;
      const double mx = logits.maxCoeff();
      const Vec e = (logits.array() - mx).exp();
      scores.push_back(e(0) / e.sum());
    }
  }
  return scores;
}

Metrics link_prediction(const Graph& g, double removal_ratio, const RetrainFn& retrain,
                        LinkScoreKind kind, std::uint32_t runs, std::uint64_t seed) {
  if (runs < 1) throw InvalidArgument("link_prediction: runs must be >= 1");
  if (!retrain) throw InvalidArgument("link_prediction: retrain callback required");
  std::vector<double> aucs;
  aucs.reserve(runs);
  for (std::uint32_t run = 0; run < runs; ++run) {
    Rng rng = Rng::substream(seed, run);
    LinkSplit split = make_link_split(g, removal_ratio, rng);
    const TrainResult trained = retrain(split.damaged);
    std::vector<double> scores = score_pairs(split.positives, trained.embeddings, trained.params, kind);
    const std::vector<double> neg =
        score_pairs(split.negatives, trained.embeddings, trained.params, kind);
    scores.insert(scores.end(), neg.begin(), neg.end());
    std::vector<std::uint8_t> labels(split.positives.size(), 1);
    labels.resize(scores.size(), 0);
    aucs.push_back(auc(scores, labels));
  }
  Metrics metrics;
  metrics.mean = mean_of(aucs);
  metrics.stddev = stddev_of(aucs, metrics.mean);
  metrics.runs = runs;
  return metrics;
}

}  // namespace hoplite
