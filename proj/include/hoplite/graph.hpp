#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hoplite/common.hpp"

namespace hoplite {

// Undirected graph in compressed sparse row form. Neighbor lists are sorted,
// strictly increasing, with no duplicates and no self-loops; the structure is
// symmetric (j in neighbors(i) iff i in neighbors(j)).
struct Graph {
  std::uint32_t num_nodes = 0;
  std::uint64_t num_edges = 0;  // undirected edge count m; offsets.back() == 2m
  std::vector<std::uint64_t> offsets;
  std::vector<NodeId> neighbors;
  // Remap record: original_ids[i] is the id node i carried in the input file.
  std::vector<std::uint64_t> original_ids;

  std::span<const NodeId> neighbors_of(NodeId i) const {
    return {neighbors.data() + offsets[i], neighbors.data() + offsets[i + 1]};
  }
  std::uint32_t degree(NodeId i) const {
    return static_cast<std::uint32_t>(offsets[i + 1] - offsets[i]);
  }
  bool has_edge(NodeId u, NodeId v) const;

  // Symmetrizes, deduplicates, drops self-loops, remaps ids to a dense
  // 0-based range (sorted by original id). min_nodes forces the node count
  // up so isolated trailing nodes survive (used when a feature matrix has
  // more rows than the edge list references).
  static Graph from_edges(std::vector<std::pair<std::uint64_t, std::uint64_t>> edges,
                          std::uint64_t min_nodes = 0);

  // Throws if any CSR invariant is violated.
  void validate() const;

  // Connected components; comp[i] is the 0-based component of node i.
  struct Components {
    std::vector<std::uint32_t> comp;
    std::vector<std::uint64_t> sizes;
  };
  Components components() const;
};

// Per-node ground-truth labels (evaluation only) plus split index lists.
struct LabelSet {
  std::vector<std::int32_t> labels;  // -1 where unlabeled
  std::uint32_t num_classes = 0;
  std::vector<NodeId> train, val, test;

  void validate(std::uint32_t num_nodes) const;
};

// Propagation operator of the graph-convolutional layer, same CSR layout as
// Graph but with per-entry weights. With self-loops the entry (i, j) is
// 1/sqrt((deg_i+1)(deg_j+1)) for j in neighbors(i) or j == i.
struct NormalizedAdjacency {
  std::uint32_t num_nodes = 0;
  std::vector<std::uint64_t> offsets;
  std::vector<NodeId> cols;
  std::vector<double> vals;
};

NormalizedAdjacency normalized_adjacency(const Graph& g, bool add_self_loops = true);

// Sparse * dense product. Accumulation order within each output row is fixed,
// so the result does not depend on the thread count; parallel=false (the
// default) runs fully single-threaded.
Mat spmm(const NormalizedAdjacency& a, const Mat& dense, bool parallel = false);

// Mean shortest-path length over ordered reachable pairs of the largest
// connected component (BFS from every node in it).
double avg_shortest_path_largest_component(const Graph& g);

// --- text formats ------------------------------------------------------

// Edge list: one "u v" pair per line, whitespace or comma separated, '#'
// comments ignored. Ids are arbitrary nonnegative integers; they are
// remapped at load.
Graph load_edge_list_graph(const std::string& edge_path, std::uint64_t min_nodes = 0);
void save_edge_list(const Graph& g, const std::string& path);

// Feature matrix. Files beginning with a "# shape R C" header hold sparse
// "row col value" triplets (row is an original node id, mapped through the
// graph's remap); anything else is parsed as a dense numeric table (CSV or
// whitespace), one row per node in original-id order.
Mat load_features(const std::string& path, const Graph& g);

// Counts the rows a feature file declares (triplet header) or contains
// (dense table). Used to keep isolated nodes alive before the graph exists.
std::uint64_t peek_feature_rows(const std::string& path);

// Labels: "node label" lines; splits: one node id per line. Ids are original
// ids, mapped through the graph's remap.
LabelSet load_labels(const std::string& label_path, const Graph& g,
                     const std::string& train_path = "", const std::string& val_path = "",
                     const std::string& test_path = "");

struct Dataset {
  Graph graph;
  Mat features;
  std::optional<LabelSet> labels;
};

// Loads a dataset directory-style: edge list + features (+ labels/splits).
Dataset load_dataset(const std::string& edge_path, const std::string& feature_path,
                     const std::string& label_path = "", const std::string& train_path = "",
                     const std::string& val_path = "", const std::string& test_path = "");

}  // namespace hoplite
