#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "hoplite/context.hpp"

using namespace hoplite;

TEST_CASE("merge policy validation") {
  auto validate = [](std::vector<std::uint32_t> bounds) {
    MergePolicy{std::move(bounds)}.validate();
  };
  CHECK_NOTHROW(validate({1, 2, 4}));
  CHECK_NOTHROW(validate({1}));
  CHECK_THROWS_AS(validate({}), InvalidArgument);
  CHECK_THROWS_AS(validate({0, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate({2, 2}), InvalidArgument);
  CHECK_THROWS_AS(validate({3, 2}), InvalidArgument);
  CHECK_NOTHROW(validate({2}));  // a lone boundary above 1 is legal
}

TEST_CASE("contiguous policies enumerate hops with a catch-all tail") {
  for (std::uint32_t alpha = 2; alpha <= 6; ++alpha) {
    MergePolicy p = MergePolicy::contiguous(alpha);
    p.validate();
    CHECK(p.alpha() == alpha);
    CHECK(p.cap() == alpha - 1);
    for (std::uint32_t c = 0; c < alpha - 1; ++c) CHECK(p.boundaries[c] == c + 1);
  }
  CHECK_THROWS_AS((void)MergePolicy::contiguous(1), InvalidArgument);
}

TEST_CASE("category_of maps hops through the default policy") {
  MergePolicy p = MergePolicy::default_policy();
  CHECK(p.alpha() == 4);
  CHECK(p.cap() == 4);
  CHECK(category_of(p, 1) == 0);
  CHECK(category_of(p, 2) == 1);
  CHECK(category_of(p, 3) == 2);
  CHECK(category_of(p, 4) == 2);
  CHECK(category_of(p, 5) == 3);
  CHECK(category_of(p, 1000) == 3);
  CHECK(category_of(p, kBeyondCap) == 3);
  CHECK_THROWS_AS((void)category_of(p, kHopSelf), InvalidArgument);
}

TEST_CASE("bfs_hops matches Floyd-Warshall within cap on random graphs") {
  // 100 Erdős–Rényi instances across three densities; hop arrays must agree
  // with an all-pairs oracle exactly, including the beyond-cap marker.
  int instance = 0;
  for (double p : {0.02, 0.05, 0.1}) {
    for (int rep = 0; rep < 34 && instance < 100; ++rep, ++instance) {
      const std::uint32_t n = 30 + (instance * 7) % 121;  // up to 150
      Graph g = testutil::er_graph(n, p, 9000 + instance);
      auto dist = testutil::floyd_warshall(g);
      const std::uint32_t cap = 1 + instance % 6;
      for (NodeId s = 0; s < n; ++s) {
        auto hops = bfs_hops(g, s, cap);
        for (NodeId j = 0; j < n; ++j) {
          if (j == s) {
            CHECK(hops[j] == kHopSelf);
          } else if (dist[s][j] != testutil::kInf && dist[s][j] <= cap) {
            CHECK(hops[j] == dist[s][j]);
          } else {
            CHECK(hops[j] == kBeyondCap);
          }
        }
      }
    }
  }
  CHECK(instance == 100);
}

TEST_CASE("context buckets partition the within-cap neighborhood") {
  Graph g = testutil::er_graph(80, 0.06, 4242);
  MergePolicy policy = MergePolicy::default_policy();
  ContextIndex idx = build_context(g, policy);
  REQUIRE(idx.num_nodes() == g.num_nodes);
  REQUIRE(idx.cap() == 4);

  auto dist = testutil::floyd_warshall(g);
  for (NodeId i = 0; i < g.num_nodes; ++i) {
    std::set<NodeId> seen;
    std::uint64_t total = 0;
    for (std::uint32_t hop = 1; hop <= idx.cap(); ++hop) {
      auto b = idx.bucket(i, hop);
      CHECK(std::is_sorted(b.begin(), b.end()));
      for (NodeId j : b) {
        CHECK(dist[i][j] == hop);
        CHECK(seen.insert(j).second);  // disjoint buckets
      }
      total += b.size();
    }
    CHECK(total == idx.within_cap_size(i));
    // Every within-cap node appears in exactly one bucket.
    for (NodeId j = 0; j < g.num_nodes; ++j) {
      const bool should = j != i && dist[i][j] != testutil::kInf && dist[i][j] <= idx.cap();
      CHECK(seen.count(j) == static_cast<std::size_t>(should));
      CHECK(idx.within_cap(i, j) == should);
    }
  }
}

TEST_CASE("hop symmetry: j in bucket(i, k) iff i in bucket(j, k)") {
  Graph g = testutil::er_graph(70, 0.07, 555);
  ContextIndex idx = build_context(g, MergePolicy{{1, 2, 4}});
  for (NodeId i = 0; i < g.num_nodes; ++i)
    for (std::uint32_t hop = 1; hop <= idx.cap(); ++hop)
      for (NodeId j : idx.bucket(i, hop)) {
        auto back = idx.bucket(j, hop);
        CHECK(std::binary_search(back.begin(), back.end(), i));
      }
}

TEST_CASE("six-node path buckets under the default policy") {
  Graph g = Graph::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  ContextIndex idx = build_context(g, MergePolicy::default_policy());
  auto bucket_vec = [&](NodeId i, std::uint32_t hop) {
    auto b = idx.bucket(i, hop);
    return std::vector<NodeId>(b.begin(), b.end());
  };
  CHECK(bucket_vec(0, 1) == std::vector<NodeId>{1});
  CHECK(bucket_vec(0, 2) == std::vector<NodeId>{2});
  CHECK(bucket_vec(0, 3) == std::vector<NodeId>{3});
  CHECK(bucket_vec(0, 4) == std::vector<NodeId>{4});
  CHECK(idx.within_cap_size(0) == 4);     // node 5 is at hop 5, beyond cap
  CHECK_FALSE(idx.within_cap(0, 5));
  CHECK((bucket_vec(2, 1) == std::vector<NodeId>{1, 3}));
  CHECK((bucket_vec(2, 2) == std::vector<NodeId>{0, 4}));
}

TEST_CASE("components are recomputed and sized") {
  Graph g = Graph::from_edges({{0, 1}, {1, 2}, {3, 4}}, 6);
  ContextIndex idx = build_context(g, MergePolicy{{1, 2}});
  CHECK(idx.component_of()[0] == idx.component_of()[2]);
  CHECK(idx.component_of()[0] != idx.component_of()[3]);
  CHECK(idx.component_size(0) == 3);
  CHECK(idx.component_size(4) == 2);
  CHECK(idx.component_size(5) == 1);
}

TEST_CASE("thread count does not change the built index") {
  Graph g = testutil::er_graph(90, 0.05, 31337);
  MergePolicy policy = MergePolicy::default_policy();
  testutil::TempDir tmp("ctxthreads");
  build_context(g, policy, 1).save(tmp.path("a.s2cx"));
  build_context(g, policy, 4).save(tmp.path("b.s2cx"));
  CHECK(testutil::read_file(tmp.path("a.s2cx")) == testutil::read_file(tmp.path("b.s2cx")));
}

TEST_CASE("context cache round-trips bitwise") {
  Graph g = testutil::er_graph(60, 0.08, 2024);
  ContextIndex idx = build_context(g, MergePolicy::default_policy());
  testutil::TempDir tmp("ctxcache");
  idx.save(tmp.path("c.s2cx"));
  idx.save(tmp.path("c2.s2cx"));
  CHECK(testutil::read_file(tmp.path("c.s2cx")) == testutil::read_file(tmp.path("c2.s2cx")));

  ContextIndex back = ContextIndex::load(tmp.path("c.s2cx"), g);
  REQUIRE(back.num_nodes() == idx.num_nodes());
  REQUIRE(back.cap() == idx.cap());
  for (NodeId i = 0; i < idx.num_nodes(); ++i) {
    CHECK(back.component_size(i) == idx.component_size(i));
    for (std::uint32_t hop = 1; hop <= idx.cap(); ++hop) {
      auto a = idx.bucket(i, hop);
      auto b = back.bucket(i, hop);
      REQUIRE(a.size() == b.size());
      CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }
  }
  back.save(tmp.path("c3.s2cx"));
  CHECK(testutil::read_file(tmp.path("c.s2cx")) == testutil::read_file(tmp.path("c3.s2cx")));
}

TEST_CASE("context cache starts with the S2CX magic") {
  Graph g = Graph::from_edges({{0, 1}});
  testutil::TempDir tmp("ctxmagic");
  build_context(g, MergePolicy{{1}}).save(tmp.path("c.s2cx"));
  std::string raw = testutil::read_file(tmp.path("c.s2cx"));
  REQUIRE(raw.size() >= 4);
  CHECK(raw.substr(0, 4) == "S2CX");
}

TEST_CASE("context cache load rejects corruption and mismatched graphs") {
  Graph g = testutil::er_graph(30, 0.1, 99);
  testutil::TempDir tmp("ctxbad");
  build_context(g, MergePolicy::default_policy()).save(tmp.path("c.s2cx"));

  SUBCASE("wrong magic") {
    std::string raw = testutil::read_file(tmp.path("c.s2cx"));
    raw[0] = 'X';
    testutil::write_file(tmp.path("bad.s2cx"), raw);
    CHECK_THROWS_AS((void)ContextIndex::load(tmp.path("bad.s2cx"), g), FormatError);
  }
  SUBCASE("truncated file") {
    std::string raw = testutil::read_file(tmp.path("c.s2cx"));
    testutil::write_file(tmp.path("trunc.s2cx"), raw.substr(0, raw.size() / 2));
    CHECK_THROWS_AS((void)ContextIndex::load(tmp.path("trunc.s2cx"), g), FormatError);
  }
  SUBCASE("node count mismatch") {
    Graph other = testutil::er_graph(31, 0.1, 99);
    CHECK_THROWS_AS((void)ContextIndex::load(tmp.path("c.s2cx"), other), FormatError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS((void)ContextIndex::load(tmp.path("nope.s2cx"), g), IoError);
  }
}

TEST_CASE("bucket totals sum the per-node buckets") {
  Graph g = testutil::er_graph(50, 0.08, 7);
  ContextIndex idx = build_context(g, MergePolicy::default_policy());
  auto totals = idx.bucket_totals();
  REQUIRE(totals.size() == idx.cap());
  for (std::uint32_t hop = 1; hop <= idx.cap(); ++hop) {
    std::uint64_t want = 0;
    for (NodeId i = 0; i < idx.num_nodes(); ++i) want += idx.bucket(i, hop).size();
    CHECK(totals[hop - 1] == want);
  }
  // Hop-1 total is twice the edge count.
  CHECK(totals[0] == 2 * g.num_edges);
}
