#include "hoplite/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace hoplite {
namespace {

// Splits a line into tokens on whitespace and commas; '#' starts a comment.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ','))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != ',')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_u64(std::string_view tok, const std::string& path, std::size_t lineno) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size())
    throw ParseError(path + ":" + std::to_string(lineno) + ": expected integer, got '" +
                     std::string(tok) + "'");
  return v;
}

double parse_real(std::string_view tok, const std::string& path, std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(std::string(tok), &used);
    if (used != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw ParseError(path + ":" + std::to_string(lineno) + ": expected number, got '" +
                     std::string(tok) + "'");
  }
}

std::ifstream open_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors_of(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::from_edges(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges,
                        std::uint64_t min_nodes) {
  std::vector<std::uint64_t> ids;
  ids.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  // Dense ids stay as they are; sparse ids are compacted in sorted order.
  // A declared node count that covers every id also keeps the ids as-is, so
  // nodes absent from the edge list (isolated) keep their positions.
  bool dense = ids.empty() || (ids.back() + 1 == ids.size() && ids.front() == 0);
  if (!dense && min_nodes > 0 && ids.back() < min_nodes) dense = true;
  std::uint64_t n = ids.size();
  if (!dense && min_nodes > n)
    throw InvalidArgument("isolated nodes require dense 0-based ids in the edge file");
  n = std::max<std::uint64_t>(n, min_nodes);
  if (n > 0xFFFFFFFFull) throw InvalidArgument("graph too large for 32-bit node ids");

  std::unordered_map<std::uint64_t, NodeId> remap;
  Graph g;
  g.num_nodes = static_cast<std::uint32_t>(n);
  g.original_ids.resize(n);
  if (dense) {
    for (std::uint64_t i = 0; i < n; ++i) g.original_ids[i] = i;
  } else {
    remap.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      remap[ids[i]] = static_cast<NodeId>(i);
      g.original_ids[i] = ids[i];
    }
  }
  auto map_id = [&](std::uint64_t v) -> NodeId {
    if (dense) return static_cast<NodeId>(v);
    return remap.at(v);
  };

  // Symmetrize as (min, max) pairs, dedup, drop self-loops.
  std::vector<std::pair<NodeId, NodeId>> und;
  und.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) continue;
    NodeId a = map_id(u), b = map_id(v);
    und.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(und.begin(), und.end());
  und.erase(std::unique(und.begin(), und.end()), und.end());

  g.num_edges = und.size();
  g.offsets.assign(n + 1, 0);
  for (auto [a, b] : und) {
    ++g.offsets[a + 1];
    ++g.offsets[b + 1];
  }
  for (std::uint64_t i = 0; i < n; ++i) g.offsets[i + 1] += g.offsets[i];
  g.neighbors.resize(2 * g.num_edges);
  std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (auto [a, b] : und) {
    g.neighbors[cursor[a]++] = b;
    g.neighbors[cursor[b]++] = a;
  }
  for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
    auto* beg = g.neighbors.data() + g.offsets[i];
    auto* end = g.neighbors.data() + g.offsets[i + 1];
    std::sort(beg, end);
  }
  return g;
}

void Graph::validate() const {
  if (offsets.size() != num_nodes + 1u) throw FormatError("graph: offsets size mismatch");
  if (offsets.front() != 0 || offsets.back() != 2 * num_edges)
    throw FormatError("graph: offsets endpoints wrong");
  for (std::uint32_t i = 0; i < num_nodes; ++i) {
    if (offsets[i] > offsets[i + 1]) throw FormatError("graph: offsets not nondecreasing");
    auto nb = neighbors_of(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] >= num_nodes) throw FormatError("graph: neighbor id out of range");
      if (nb[k] == i) throw FormatError("graph: self-loop stored");
      if (k > 0 && nb[k] <= nb[k - 1])
        throw FormatError("graph: neighbor list not strictly increasing");
      if (!has_edge(nb[k], i)) throw FormatError("graph: adjacency not symmetric");
    }
  }
}

Graph::Components Graph::components() const {
  Components c;
  c.comp.assign(num_nodes, 0xFFFFFFFFu);
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < num_nodes; ++s) {
    if (c.comp[s] != 0xFFFFFFFFu) continue;
    const auto id = static_cast<std::uint32_t>(c.sizes.size());
    c.sizes.push_back(0);
    stack.push_back(s);
    c.comp[s] = id;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      ++c.sizes[id];
      for (NodeId v : neighbors_of(u)) {
        if (c.comp[v] == 0xFFFFFFFFu) {
          c.comp[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  return c;
}

void LabelSet::validate(std::uint32_t num_nodes) const {
  if (labels.size() != num_nodes) throw DimensionError("labels: row count != node count");
  for (auto l : labels)
    if (l >= 0 && static_cast<std::uint32_t>(l) >= num_classes)
      throw FormatError("labels: label out of range");
  std::vector<std::uint8_t> seen(num_nodes, 0);
  for (const auto* split : {&train, &val, &test}) {
    for (NodeId v : *split) {
      if (v >= num_nodes) throw FormatError("splits: node id out of range");
      if (seen[v]) throw FormatError("splits: index lists overlap");
      seen[v] = 1;
    }
  }
}

NormalizedAdjacency normalized_adjacency(const Graph& g, bool add_self_loops) {
  NormalizedAdjacency a;
  a.num_nodes = g.num_nodes;
  a.offsets.assign(g.num_nodes + 1, 0);
  const std::uint64_t extra = add_self_loops ? 1 : 0;
  for (std::uint32_t i = 0; i < g.num_nodes; ++i)
    a.offsets[i + 1] = a.offsets[i] + g.degree(i) + extra;
  a.cols.resize(a.offsets.back());
  a.vals.resize(a.offsets.back());

  std::vector<double> inv_sqrt_deg(g.num_nodes);
  for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
    const double d = static_cast<double>(g.degree(i)) + (add_self_loops ? 1.0 : 0.0);
    inv_sqrt_deg[i] = d > 0 ? 1.0 / std::sqrt(d) : 0.0;
  }
  for (std::uint32_t i = 0; i < g.num_nodes; ++i) {
    std::uint64_t w = a.offsets[i];
    auto nb = g.neighbors_of(i);
    std::size_t k = 0;
    if (add_self_loops) {
      // Keep columns sorted: insert the diagonal entry in order.
      while (k < nb.size() && nb[k] < i) {
        a.cols[w] = nb[k];
        a.vals[w] = inv_sqrt_deg[i] * inv_sqrt_deg[nb[k]];
        ++w, ++k;
      }
      a.cols[w] = i;
      a.vals[w] = inv_sqrt_deg[i] * inv_sqrt_deg[i];
      ++w;
    }
    for (; k < nb.size(); ++k) {
      a.cols[w] = nb[k];
      a.vals[w] = inv_sqrt_deg[i] * inv_sqrt_deg[nb[k]];
      ++w;
    }
  }
  return a;
}

Mat spmm(const NormalizedAdjacency& a, const Mat& dense, bool parallel) {
  if (static_cast<std::uint32_t>(dense.rows()) != a.num_nodes)
    throw DimensionError("spmm: adjacency is " + std::to_string(a.num_nodes) + "x" +
                         std::to_string(a.num_nodes) + " but dense has " +
                         std::to_string(dense.rows()) + " rows");
  Mat out = Mat::Zero(dense.rows(), dense.cols());
  const auto n = static_cast<std::int64_t>(a.num_nodes);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (std::uint64_t k = a.offsets[i]; k < a.offsets[i + 1]; ++k)
      row += a.vals[k] * dense.row(a.cols[k]);
  }
  return out;
}

double avg_shortest_path_largest_component(const Graph& g) {
  if (g.num_nodes == 0) throw InvalidArgument("empty graph");
  const auto comps = g.components();
  const std::uint32_t big = static_cast<std::uint32_t>(
      std::max_element(comps.sizes.begin(), comps.sizes.end()) - comps.sizes.begin());
  const std::uint64_t size = comps.sizes[big];
  if (size < 2) return 0.0;

  std::uint64_t total = 0;
  std::vector<std::uint32_t> dist(g.num_nodes);
  std::vector<NodeId> frontier, next;
  for (NodeId s = 0; s < g.num_nodes; ++s) {
    if (comps.comp[s] != big) continue;
    std::fill(dist.begin(), dist.end(), 0xFFFFFFFFu);
    dist[s] = 0;
    frontier.assign(1, s);
    std::uint32_t depth = 0;
    while (!frontier.empty()) {
      ++depth;
      next.clear();
      for (NodeId u : frontier) {
        for (NodeId v : g.neighbors_of(u)) {
          if (dist[v] == 0xFFFFFFFFu) {
            dist[v] = depth;
            total += depth;
            next.push_back(v);
          }
        }
      }
      frontier.swap(next);
    }
  }
  return static_cast<double>(total) / (static_cast<double>(size) * (size - 1));
}

Graph load_edge_list_graph(const std::string& edge_path, std::uint64_t min_nodes) {
  auto in = open_text(edge_path);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError(edge_path + ":" + std::to_string(lineno) + ": expected 'u v', got " +
                       std::to_string(toks.size()) + " fields");
    edges.emplace_back(parse_u64(toks[0], edge_path, lineno), parse_u64(toks[1], edge_path, lineno));
  }
  return Graph::from_edges(std::move(edges), min_nodes);
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  for (NodeId i = 0; i < g.num_nodes; ++i)
    for (NodeId j : g.neighbors_of(i))
      if (i < j) out << i << ' ' << j << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::uint64_t peek_feature_rows(const std::string& path) {
  auto in = open_text(path);
  std::string line;
  std::size_t lineno = 0;
  std::uint64_t rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# shape", 0) == 0) {
      auto toks = tokenize(line.substr(7));
      if (toks.size() < 2) throw ParseError(path + ":1: malformed '# shape R C' header");
      return parse_u64(toks[0], path, lineno);
    }
    if (!tokenize(line).empty()) ++rows;
  }
  return rows;
}

Mat load_features(const std::string& path, const Graph& g) {
  auto in = open_text(path);
  std::string line;
  std::size_t lineno = 0;

  std::unordered_map<std::uint64_t, NodeId> remap;
  remap.reserve(g.num_nodes);
  for (NodeId i = 0; i < g.num_nodes; ++i) remap[g.original_ids[i]] = i;

  // Peek the first line to decide between triplets and a dense table.
  if (!std::getline(in, line)) throw ParseError(path + ": empty feature file");
  ++lineno;
  if (line.rfind("# shape", 0) == 0) {
    auto hdr = tokenize(line.substr(7));
    if (hdr.size() < 2) throw ParseError(path + ":1: malformed '# shape R C' header");
    const std::uint64_t rows = parse_u64(hdr[0], path, 1);
    const std::uint64_t cols = parse_u64(hdr[1], path, 1);
    if (rows != g.num_nodes)
      throw DimensionError(path + ": feature rows (" + std::to_string(rows) +
                           ") != node count (" + std::to_string(g.num_nodes) + ")");
    Mat x = Mat::Zero(rows, cols);
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = tokenize(line);
      if (toks.empty()) continue;
      if (toks.size() != 3)
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'row col value'");
      const std::uint64_t r = parse_u64(toks[0], path, lineno);
      const std::uint64_t c = parse_u64(toks[1], path, lineno);
      const double v = parse_real(toks[2], path, lineno);
      auto it = remap.find(r);
      if (it == remap.end())
        throw ParseError(path + ":" + std::to_string(lineno) + ": unknown node id " +
                         std::to_string(r));
      if (c >= cols)
        throw ParseError(path + ":" + std::to_string(lineno) + ": column out of range");
      if (!std::isfinite(v))
        throw ParseError(path + ":" + std::to_string(lineno) + ": non-finite value");
      x(it->second, c) = v;
    }
    return x;
  }

  // Dense table: one row per node in original-id order.
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  auto take = [&](const std::string& l, std::size_t no) {
    auto toks = tokenize(l);
    if (toks.empty()) return;
    std::vector<double> row;
    row.reserve(toks.size());
    for (auto t : toks) {
      double v = parse_real(t, path, no);
      if (!std::isfinite(v)) throw ParseError(path + ":" + std::to_string(no) + ": non-finite value");
      row.push_back(v);
    }
    if (width == 0)
      width = row.size();
    else if (row.size() != width)
      throw ParseError(path + ":" + std::to_string(no) + ": ragged row (" +
                       std::to_string(row.size()) + " vs " + std::to_string(width) + " columns)");
    rows.push_back(std::move(row));
  };
  take(line, lineno);
  while (std::getline(in, line)) {
    ++lineno;
    take(line, lineno);
  }
  if (rows.size() != g.num_nodes)
    throw DimensionError(path + ": feature rows (" + std::to_string(rows.size()) +
                         ") != node count (" + std::to_string(g.num_nodes) + ")");
  Mat x(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = remap.find(i);
    if (it == remap.end())
      throw ParseError(path + ": dense feature tables require dense 0-based node ids");
    for (std::size_t j = 0; j < width; ++j) x(it->second, j) = rows[i][j];
  }
  return x;
}

namespace {

std::vector<NodeId> load_split(const std::string& path,
                               const std::unordered_map<std::uint64_t, NodeId>& remap) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<NodeId> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected one id per line");
    auto id = parse_u64(toks[0], path, lineno);
    auto it = remap.find(id);
    if (it == remap.end())
      throw ParseError(path + ":" + std::to_string(lineno) + ": unknown node id " +
                       std::to_string(id));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

LabelSet load_labels(const std::string& label_path, const Graph& g, const std::string& train_path,
                     const std::string& val_path, const std::string& test_path) {
  auto in = open_text(label_path);
  std::unordered_map<std::uint64_t, NodeId> remap;
  remap.reserve(g.num_nodes);
  for (NodeId i = 0; i < g.num_nodes; ++i) remap[g.original_ids[i]] = i;

  LabelSet ls;
  ls.labels.assign(g.num_nodes, -1);
  std::string line;
  std::size_t lineno = 0;
  std::int64_t max_label = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (toks.size() != 2)
      throw ParseError(label_path + ":" + std::to_string(lineno) + ": expected 'node label'");
    auto id = parse_u64(toks[0], label_path, lineno);
    auto lab = parse_u64(toks[1], label_path, lineno);
    auto it = remap.find(id);
    if (it == remap.end())
      throw ParseError(label_path + ":" + std::to_string(lineno) + ": unknown node id " +
                       std::to_string(id));
    ls.labels[it->second] = static_cast<std::int32_t>(lab);
    max_label = std::max<std::int64_t>(max_label, static_cast<std::int64_t>(lab));
  }
  ls.num_classes = static_cast<std::uint32_t>(max_label + 1);
  if (!train_path.empty()) ls.train = load_split(train_path, remap);
  if (!val_path.empty()) ls.val = load_split(val_path, remap);
  if (!test_path.empty()) ls.test = load_split(test_path, remap);
  ls.validate(g.num_nodes);
  return ls;
}

Dataset load_dataset(const std::string& edge_path, const std::string& feature_path,
                     const std::string& label_path, const std::string& train_path,
                     const std::string& val_path, const std::string& test_path) {
  Dataset d;
  const std::uint64_t rows = peek_feature_rows(feature_path);
  d.graph = load_edge_list_graph(edge_path, rows);
  d.features = load_features(feature_path, d.graph);
  if (!label_path.empty())
    d.labels = load_labels(label_path, d.graph, train_path, val_path, test_path);
  return d;
}

}  // namespace hoplite
