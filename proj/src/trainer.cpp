#include "hoplite/trainer.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hoplite/binio.hpp"

namespace hoplite {
namespace {

constexpr char kCheckpointMagic[4] = {'S', '2', 'C', 'K'};
constexpr std::uint32_t kCheckpointVersion = 1;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_mat(BinWriter& w, const Mat& m) {
  w.u64(static_cast<std::uint64_t>(m.rows()));
  w.u64(static_cast<std::uint64_t>(m.cols()));
  w.f64_array(m.data(), static_cast<std::size_t>(m.size()));
}

Mat read_mat(BinReader& r) {
  const std::uint64_t rows = r.u64();
  const std::uint64_t cols = r.u64();
  if (rows > (1ull << 32) || cols > (1ull << 32) || (rows != 0 && cols > (1ull << 40) / rows))
    throw FormatError("checkpoint: implausible matrix shape");
  Mat m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  r.f64_array(m.data(), static_cast<std::size_t>(m.size()));
  return m;
}

void write_vec(BinWriter& w, const Vec& v) {
  w.u64(static_cast<std::uint64_t>(v.size()));
  w.f64_array(v.data(), static_cast<std::size_t>(v.size()));
}

Vec read_vec(BinReader& r) {
  const std::uint64_t n = r.u64();
  if (n > (1ull << 32)) throw FormatError("checkpoint: implausible vector length");
  Vec v(static_cast<Eigen::Index>(n));
  r.f64_array(v.data(), static_cast<std::size_t>(n));
  return v;
}

}  // namespace

void TrainConfig::validate() const {
  policy.validate();
  sampler.validate();
  if (embedding_dim < 1) throw InvalidArgument("train: embedding_dim must be >= 1");
  if (num_layers != 1 && num_layers != 2) throw InvalidArgument("train: num_layers must be 1 or 2");
  if (epochs < 1) throw InvalidArgument("train: epochs must be >= 1");
  if (!(lr > 0.0)) throw InvalidArgument("train: lr must be positive");
  if (!(divergence_threshold > 0.0))
    throw InvalidArgument("train: divergence_threshold must be positive");
}

TrainResult train(const Graph& g, const Mat& features, const ContextIndex& index,
                  const TrainConfig& config) {
  config.validate();
  if (features.rows() != static_cast<Eigen::Index>(g.num_nodes))
    throw DimensionError("train: feature rows != graph nodes");
  if (index.num_nodes() != g.num_nodes)
    throw DimensionError("train: context index does not match graph");

  const auto t0 = std::chrono::steady_clock::now();
  const NormalizedAdjacency adj = normalized_adjacency(g);
  const Mat propagated = spmm(adj, features, /*parallel=*/!config.deterministic);

  ModelConfig mc;
  mc.input_dim = static_cast<std::uint32_t>(features.cols());
  mc.embedding_dim = config.embedding_dim;
  mc.num_layers = config.num_layers;
  mc.num_categories = config.policy.alpha();
  Rng init_rng(config.seed);
  ModelParams params = init_params(mc, init_rng);
  AdamState adam = AdamState::create(params, config.lr);

  SamplerConfig sampler_config = config.sampler;
  sampler_config.seed = config.seed;
  PairSampler sampler(index, config.policy, sampler_config);

  const std::uint32_t batches =
      config.batches_per_epoch > 0
          ? config.batches_per_epoch
          : static_cast<std::uint32_t>((g.num_nodes + sampler_config.targets_per_batch - 1) /
                                       sampler_config.targets_per_batch);

  TrainResult result;
  result.report.epoch_losses.reserve(config.epochs);

  // Last-completed-epoch snapshot, written out if a later step diverges.
  ModelParams last_good_params = params;
  AdamState last_good_adam = adam;

  ForwardCache cache;
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::uint32_t b = 0; b < batches; ++b) {
      const PairBatch batch = sampler.next_batch();
      double loss;
      try {
        loss = forward_loss_cached(batch, propagated, adj, params, cache);
        if (loss > config.divergence_threshold)
          throw NumericError("train: loss " + std::to_string(loss) + " above divergence threshold");
      } catch (const NumericError& e) {
        if (!config.checkpoint_path.empty()) {
          const Mat z = encode(adj, features, last_good_params);
          save_checkpoint(config.checkpoint_path, last_good_params, last_good_adam, z);
        }
        throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch + 1) + ", step " +
                           std::to_string(result.report.steps) +
                           "; last completed epoch checkpointed)");
      }
      const Gradients grads = backward(cache, batch, adj, params);
      adam_step(params, grads, adam);
      epoch_loss += loss;
      ++result.report.steps;
    }
    epoch_loss /= batches;
    result.report.epoch_losses.push_back(epoch_loss);
    last_good_params = params;
    last_good_adam = adam;
    if (config.on_epoch) config.on_epoch(epoch + 1, epoch_loss, seconds_since(t0));
  }

  result.params = std::move(params);
  result.adam = std::move(adam);
  result.embeddings = encode(adj, features, result.params);
  result.report.final_loss = result.report.epoch_losses.back();

  if (!config.checkpoint_path.empty()) {
    save_checkpoint(config.checkpoint_path, result.params, result.adam, result.embeddings);
    result.report.checkpoint_path = config.checkpoint_path;
  }
  if (!config.embeddings_path.empty()) {
    export_embeddings(result.embeddings, config.embeddings_path, g.original_ids);
    result.report.embeddings_path = config.embeddings_path;
  }
  result.report.wall_seconds = seconds_since(t0);
  return result;
}

void export_embeddings(const Mat& z, const std::string& path,
                       const std::vector<std::uint64_t>& original_ids) {
  if (!z.allFinite()) throw NumericError("export_embeddings: non-finite values");
  if (static_cast<std::size_t>(z.rows()) != original_ids.size())
    throw DimensionError("export_embeddings: id map length != embedding rows");
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  std::string line;
  char buf[32];
  line.reserve(32 * (z.cols() + 1));
  out << "# " << z.rows() << ' ' << z.cols() << '\n';
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    line.clear();
    std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(original_ids[i]));
    line += buf;
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      std::snprintf(buf, sizeof buf, " %.17g", z(i, j));
      line += buf;
    }
    line += '\n';
    out << line;
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

std::pair<Mat, std::vector<std::uint64_t>> import_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string header;
  std::getline(in, header);
  std::uint64_t n = 0, q = 0;
  if (std::sscanf(header.c_str(), "# %llu %llu", reinterpret_cast<unsigned long long*>(&n),
                  reinterpret_cast<unsigned long long*>(&q)) != 2)
    throw FormatError(path + ": expected '# n q' header");
  if (n > (1ull << 32) || q > (1ull << 24)) throw FormatError(path + ": implausible header");
  Mat z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
  std::vector<std::uint64_t> ids(n);
  std::string line;
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw FormatError(path + ": expected " + std::to_string(n) + " rows");
    const char* p = line.c_str();
    const char* end = p + line.size();
    auto skip_ws = [&] { while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p; };
    skip_ws();
    auto idr = std::from_chars(p, end, ids[i]);
    if (idr.ec != std::errc{}) throw ParseError(path + ": bad node id on row " + std::to_string(i));
    p = idr.ptr;
    for (std::uint64_t j = 0; j < q; ++j) {
      skip_ws();
      double v;
      auto r = std::from_chars(p, end, v);
      if (r.ec != std::errc{}) throw ParseError(path + ": bad value on row " + std::to_string(i));
      p = r.ptr;
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
    skip_ws();
    if (p != end) throw FormatError(path + ": trailing tokens on row " + std::to_string(i));
  }
  return {std::move(z), std::move(ids)};
}

void save_checkpoint(const std::string& path, const ModelParams& params, const AdamState& adam,
                     const Mat& embeddings) {
  params.validate();
  adam.validate(params);
  BinWriter w(path);
  w.raw(kCheckpointMagic, 4);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(params.encoder_weights.size()));
  for (const Mat& m : params.encoder_weights) write_mat(w, m);
  write_mat(w, params.classifier_weight);
  write_vec(w, params.classifier_bias);
  w.f64(adam.lr);
  w.f64(adam.beta1);
  w.f64(adam.beta2);
  w.f64(adam.eps);
  w.u64(adam.t);
  for (std::size_t l = 0; l < params.encoder_weights.size(); ++l) {
    write_mat(w, adam.m_encoder[l]);
    write_mat(w, adam.v_encoder[l]);
  }
  write_mat(w, adam.m_classifier);
  write_mat(w, adam.v_classifier);
  write_vec(w, adam.m_bias);
  write_vec(w, adam.v_bias);
  write_mat(w, embeddings);
  w.finish();
}

Checkpoint load_checkpoint(const std::string& path) {
  BinReader r(path);
  char magic[4];
  r.raw(magic, 4);
  if (std::memcmp(magic, kCheckpointMagic, 4) != 0)
    throw FormatError(path + ": not a checkpoint file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));
  const std::uint32_t layers = r.u32();
  if (layers < 1 || layers > 2) throw FormatError(path + ": invalid layer count");
  Checkpoint ck;
  for (std::uint32_t l = 0; l < layers; ++l) ck.params.encoder_weights.push_back(read_mat(r));
  ck.params.classifier_weight = read_mat(r);
  ck.params.classifier_bias = read_vec(r);
  ck.adam.lr = r.f64();
  ck.adam.beta1 = r.f64();
  ck.adam.beta2 = r.f64();
  ck.adam.eps = r.f64();
  ck.adam.t = r.u64();
  for (std::uint32_t l = 0; l < layers; ++l) {
    ck.adam.m_encoder.push_back(read_mat(r));
    ck.adam.v_encoder.push_back(read_mat(r));
  }
  ck.adam.m_classifier = read_mat(r);
  ck.adam.v_classifier = read_mat(r);
  ck.adam.m_bias = read_vec(r);
  ck.adam.v_bias = read_vec(r);
  ck.embeddings = read_mat(r);
  r.expect_eof();
  ck.params.validate();
  ck.adam.validate(ck.params);
  return ck;
}

}  // namespace hoplite
