#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hoplite/common.hpp"
#include "hoplite/graph.hpp"

namespace testutil {

inline constexpr std::uint32_t kInf = 0xFFFFFFFFu;

// Erdős–Rényi G(n, p) over the library RNG so instances are reproducible
// across platforms.
inline hoplite::Graph er_graph(std::uint32_t n, double p, std::uint64_t seed) {
  hoplite::Rng rng(seed);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::uint32_t u = 0; u < n; ++u)
    for (std::uint32_t v = u + 1; v < n; ++v)
      if (rng.uniform_real() < p) edges.emplace_back(u, v);
  return hoplite::Graph::from_edges(std::move(edges), n);
}

// All-pairs shortest paths by Floyd–Warshall; the deliberately different
// algorithm used to cross-check BFS results. kInf marks "no path".
inline std::vector<std::vector<std::uint32_t>> floyd_warshall(const hoplite::Graph& g) {
  const std::uint32_t n = g.num_nodes;
  std::vector<std::vector<std::uint32_t>> dist(n, std::vector<std::uint32_t>(n, kInf));
  for (std::uint32_t i = 0; i < n; ++i) {
    dist[i][i] = 0;
    for (hoplite::NodeId j : g.neighbors_of(i)) dist[i][j] = 1;
  }
  for (std::uint32_t k = 0; k < n; ++k)
    for (std::uint32_t i = 0; i < n; ++i) {
      if (dist[i][k] == kInf) continue;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (dist[k][j] == kInf) continue;
        const std::uint32_t via = dist[i][k] + dist[k][j];
        if (via < dist[i][j]) dist[i][j] = via;
      }
    }
  return dist;
}

// Dense renormalized adjacency D^{-1/2} (A + I) D^{-1/2}, built with plain
// loops as an oracle for the CSR version.
inline std::vector<std::vector<double>> dense_normalized_adjacency(const hoplite::Graph& g) {
  const std::uint32_t n = g.num_nodes;
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (std::uint32_t i = 0; i < n; ++i) {
    a[i][i] = 1.0;
    for (hoplite::NodeId j : g.neighbors_of(i)) a[i][j] = 1.0;
  }
  std::vector<double> dinv(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    double deg = 0.0;
    for (std::uint32_t j = 0; j < n; ++j) deg += a[i][j];
    dinv[i] = 1.0 / std::sqrt(deg);
  }
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) a[i][j] *= dinv[i] * dinv[j];
  return a;
}

// Plain triple-loop product of a dense oracle matrix with an Eigen matrix.
inline hoplite::Mat dense_matmul(const std::vector<std::vector<double>>& a,
                                 const hoplite::Mat& x) {
  hoplite::Mat y(static_cast<Eigen::Index>(a.size()), x.cols());
  y.setZero();
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      const double aik = a[i][k];
      if (aik == 0.0) continue;
      for (Eigen::Index j = 0; j < x.cols(); ++j) y(i, j) += aik * x(k, j);
    }
  return y;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    base_ = std::filesystem::temp_directory_path() /
            ("hoplite-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(base_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(base_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path(const std::string& name) const { return (base_ / name).string(); }
  const std::filesystem::path& root() const { return base_; }

 private:
  std::filesystem::path base_;
};

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  out.close();
  if (!out) throw std::runtime_error("test helper could not write " + path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("test helper could not read " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// A small two-triangle graph with 8 nodes, identity-ish features, and two
// label classes; enough structure for end-to-end smoke paths.
struct TinyDataset {
  std::string edges;
  std::string features;
  std::string labels;
};

inline TinyDataset tiny_dataset() {
  TinyDataset d;
  d.edges =
      "0 1\n0 2\n1 2\n2 3\n3 4\n4 5\n4 6\n5 6\n6 7\n";
  d.features = "# shape 8 4\n";
  for (int i = 0; i < 8; ++i)
    d.features += std::to_string(i) + " " + std::to_string(i % 4) + " 1\n";
  d.labels = "0 0\n1 0\n2 0\n3 0\n4 1\n5 1\n6 1\n7 1\n";
  return d;
}

}  // namespace testutil
