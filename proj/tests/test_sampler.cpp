#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "helpers.hpp"
#include "hoplite/context.hpp"
#include "hoplite/sampler.hpp"

using namespace hoplite;

namespace {

Graph cycle_graph(std::uint32_t n) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(std::move(edges), n);
}

// Independent category oracle: BFS-free, straight from Floyd-Warshall.
std::uint32_t oracle_category(const std::vector<std::vector<std::uint32_t>>& dist,
                              const MergePolicy& policy, NodeId t, NodeId c) {
  const std::uint32_t d = dist[t][c];
  REQUIRE(d != 0);
  if (d == testutil::kInf) return policy.alpha() - 1;
  return category_of(policy, d);
}

}  // namespace

TEST_CASE("sampler config validation") {
  SamplerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.targets_per_batch = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
  cfg = SamplerConfig{};
  cfg.pairs_per_category_per_target = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("six-node path: one pair per category lands in the right buckets") {
  Graph g = Graph::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  MergePolicy policy = MergePolicy::default_policy();
  ContextIndex idx = build_context(g, policy);
  SamplerConfig cfg;
  cfg.targets_per_batch = 6;  // the whole graph; node 0 is always a target
  cfg.pairs_per_category_per_target = 1;

  Rng rng(5);
  PairBatch batch = sample_batch(idx, policy, cfg, rng);
  const std::array<std::set<NodeId>, 4> allowed = {
      std::set<NodeId>{1}, {2}, {3, 4}, {5}};
  bool saw_target_zero = false;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch.targets[i] != 0) continue;
    saw_target_zero = true;
    CHECK(allowed[batch.labels[i]].count(batch.contexts[i]) == 1);
  }
  CHECK(saw_target_zero);
  // Node 0 has all four categories nonempty, so exactly 4 triples.
  CHECK(std::count(batch.targets.begin(), batch.targets.end(), NodeId{0}) == 4);
}

TEST_CASE("every emitted label matches the all-pairs oracle") {
  // Exhaustive label audit on graphs up to 150 nodes, mixed densities and
  // policies, including disconnected instances.
  struct Case {
    std::uint32_t n;
    double p;
    MergePolicy policy;
    bool far_unreachable;
  };
  const std::vector<Case> cases = {
      {40, 0.05, MergePolicy::default_policy(), false},
      {90, 0.03, MergePolicy{{1, 2}}, false},
      {150, 0.02, MergePolicy::default_policy(), true},
      {150, 0.02, MergePolicy{{1}}, false},
      {120, 0.1, MergePolicy{{1, 2, 3, 4, 5}}, false},
  };
  int case_id = 0;
  for (const auto& c : cases) {
    Graph g = testutil::er_graph(c.n, c.p, 6000 + case_id);
    auto dist = testutil::floyd_warshall(g);
    ContextIndex idx = build_context(g, c.policy);
    SamplerConfig cfg;
    cfg.targets_per_batch = c.n;
    cfg.pairs_per_category_per_target = 3;
    cfg.far_includes_unreachable = c.far_unreachable;
    cfg.seed = 10 + case_id;
    PairSampler sampler(idx, c.policy, cfg);
    for (int b = 0; b < 5; ++b) {
      PairBatch batch = sampler.next_batch();
      REQUIRE(batch.size() > 0);
      for (std::size_t i = 0; i < batch.size(); ++i) {
        const NodeId t = batch.targets[i], ctx = batch.contexts[i];
        CHECK(t != ctx);
        CHECK(batch.labels[i] == oracle_category(dist, c.policy, t, ctx));
        if (!c.far_unreachable) CHECK(dist[t][ctx] != testutil::kInf);
      }
    }
    ++case_id;
  }
}

TEST_CASE("per-category balance when every category can fill its quota") {
  // On a 200-cycle each node has 2 nodes at hop 1, 2 at hop 2, 4 at hops
  // 3..4 and 191 beyond, so quota 2 is satisfiable everywhere and the
  // frequencies must converge to 1/4.
  Graph g = cycle_graph(200);
  MergePolicy policy = MergePolicy::default_policy();
  ContextIndex idx = build_context(g, policy);
  SamplerConfig cfg;
  cfg.targets_per_batch = 200;
  cfg.pairs_per_category_per_target = 2;
  cfg.seed = 99;
  PairSampler sampler(idx, policy, cfg);

  std::array<std::uint64_t, 4> counts{};
  std::uint64_t total = 0;
  while (total < 100000) {
    PairBatch batch = sampler.next_batch();
    for (std::uint32_t label : batch.labels) ++counts[label];
    total += batch.size();
  }
  for (std::uint32_t c = 0; c < 4; ++c) {
    const double freq = static_cast<double>(counts[c]) / static_cast<double>(total);
    CHECK(freq == doctest::Approx(0.25).epsilon(0.08));  // ±2% of the total
    CHECK(std::abs(freq - 0.25) <= 0.02);
  }
}

TEST_CASE("quota shortfall takes every available node without replacement") {
  // Star K_{1,5} under policy {1,2}: a leaf target has 1 node at hop 1 and
  // 4 at hop 2; with quota 3 the hop-1 category must contribute exactly its
  // single member once.
  Graph g = Graph::from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
  MergePolicy policy{{1, 2}};
  ContextIndex idx = build_context(g, policy);
  SamplerConfig cfg;
  cfg.targets_per_batch = 6;
  cfg.pairs_per_category_per_target = 3;
  Rng rng(12);
  PairBatch batch = sample_batch(idx, policy, cfg, rng);

  std::map<std::pair<NodeId, std::uint32_t>, std::vector<NodeId>> by_target_label;
  for (std::size_t i = 0; i < batch.size(); ++i)
    by_target_label[{batch.targets[i], batch.labels[i]}].push_back(batch.contexts[i]);

  for (NodeId leaf = 1; leaf <= 5; ++leaf) {
    auto& cat0 = by_target_label[{leaf, 0}];
    REQUIRE(cat0.size() == 1);  // take-all of the single hop-1 node
    CHECK(cat0[0] == 0);
    auto& cat1 = by_target_label[{leaf, 1}];
    CHECK(cat1.size() == 3);  // full quota from the 4 available
    std::sort(cat1.begin(), cat1.end());
    CHECK(std::adjacent_find(cat1.begin(), cat1.end()) == cat1.end());
  }
  // Center target: 5 nodes at hop 1, nothing at hop 2 or beyond.
  CHECK((by_target_label[{0, 0}].size() == 3));
  CHECK(by_target_label.count({0, 1}) == 0);
  CHECK(by_target_label.count({0, 2}) == 0);
}

TEST_CASE("far category honors the unreachable-exclusion flag") {
  // Two components: a 9-path (far pairs exist within it at cap 2) and a
  // triangle. Under exclusion every far context stays in the target's
  // component; with the flag on, cross-component pairs appear.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::uint64_t i = 0; i + 1 < 9; ++i) edges.emplace_back(i, i + 1);
  edges.insert(edges.end(), {{9, 10}, {10, 11}, {9, 11}});
  Graph g = Graph::from_edges(std::move(edges), 12);
  MergePolicy policy{{1, 2}};
  ContextIndex idx = build_context(g, policy);
  auto comp = g.components().comp;

  SamplerConfig cfg;
  cfg.targets_per_batch = 12;
  cfg.pairs_per_category_per_target = 2;

  SUBCASE("exclusion keeps pairs inside components") {
    cfg.far_includes_unreachable = false;
    PairSampler sampler(idx, policy, cfg);
    bool saw_far = false;
    for (int b = 0; b < 20; ++b) {
      PairBatch batch = sampler.next_batch();
      for (std::size_t i = 0; i < batch.size(); ++i) {
        CHECK(comp[batch.targets[i]] == comp[batch.contexts[i]]);
        if (batch.labels[i] == 2) saw_far = true;
      }
    }
    CHECK(saw_far);
  }
  SUBCASE("flag folds unreachable nodes into the far category") {
    cfg.far_includes_unreachable = true;
    PairSampler sampler(idx, policy, cfg);
    bool saw_cross = false;
    for (int b = 0; b < 20 && !saw_cross; ++b) {
      PairBatch batch = sampler.next_batch();
      for (std::size_t i = 0; i < batch.size(); ++i)
        if (comp[batch.targets[i]] != comp[batch.contexts[i]]) {
          CHECK(batch.labels[i] == 2);
          saw_cross = true;
        }
    }
    CHECK(saw_cross);
  }
}

TEST_CASE("tiny far pools fall back to direct draws instead of starving") {
  // A 300-clique dominates the node count while a 7-path contributes far
  // pairs that rejection sampling would almost never hit.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (std::uint64_t u = 0; u < 300; ++u)
    for (std::uint64_t v = u + 1; v < 300; ++v) edges.emplace_back(u, v);
  for (std::uint64_t i = 300; i + 1 < 307; ++i) edges.emplace_back(i, i + 1);
  Graph g = Graph::from_edges(std::move(edges), 307);
  MergePolicy policy = MergePolicy::default_policy();
  ContextIndex idx = build_context(g, policy);
  auto dist = testutil::floyd_warshall(g);

  SamplerConfig cfg;
  cfg.targets_per_batch = 307;
  cfg.pairs_per_category_per_target = 2;
  Rng rng(3);
  PairBatch batch = sample_batch(idx, policy, cfg, rng);
  bool saw_path_far = false;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const NodeId t = batch.targets[i], c = batch.contexts[i];
    CHECK(batch.labels[i] == oracle_category(dist, policy, t, c));
    if (t >= 300 && batch.labels[i] == 3) {
      saw_path_far = true;
      CHECK(c >= 300);  // same component under exclusion
    }
  }
  CHECK(saw_path_far);  // path ends are 5..6 hops apart
}

TEST_CASE("isolated nodes are skipped under exclusion, included with the flag") {
  Graph g = Graph::from_edges({{0, 1}, {1, 2}}, 4);  // node 3 isolated
  MergePolicy policy{{1}};
  ContextIndex idx = build_context(g, policy);
  SamplerConfig cfg;
  cfg.targets_per_batch = 4;
  cfg.pairs_per_category_per_target = 1;

  SUBCASE("exclusion: never a target") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      PairBatch batch = sample_batch(idx, policy, cfg, rng);
      CHECK(std::count(batch.targets.begin(), batch.targets.end(), NodeId{3}) == 0);
      CHECK(std::count(batch.contexts.begin(), batch.contexts.end(), NodeId{3}) == 0);
    }
  }
  SUBCASE("flag on: participates through the far category") {
    cfg.far_includes_unreachable = true;
    bool saw = false;
    for (std::uint64_t seed = 0; seed < 10 && !saw; ++seed) {
      Rng rng(seed);
      PairBatch batch = sample_batch(idx, policy, cfg, rng);
      for (std::size_t i = 0; i < batch.size(); ++i)
        if (batch.targets[i] == 3) {
          CHECK(batch.labels[i] == 1);
          saw = true;
        }
    }
    CHECK(saw);
  }
}

TEST_CASE("same seed reproduces the batch stream; different seeds diverge") {
  Graph g = testutil::er_graph(100, 0.05, 8);
  MergePolicy policy = MergePolicy::default_policy();
  ContextIndex idx = build_context(g, policy);
  SamplerConfig cfg;
  cfg.targets_per_batch = 32;
  cfg.seed = 424242;

  PairSampler a(idx, policy, cfg);
  PairSampler b(idx, policy, cfg);
  for (int i = 0; i < 4; ++i) {
    PairBatch ba = a.next_batch();
    PairBatch bb = b.next_batch();
    CHECK(ba.targets == bb.targets);
    CHECK(ba.contexts == bb.contexts);
    CHECK(ba.labels == bb.labels);
  }
  CHECK(a.batches_drawn() == 4);

  // batch_at is pure: recomputing an old batch does not disturb the stream.
  PairBatch third = a.batch_at(2);
  PairBatch third_again = b.batch_at(2);
  CHECK(third.targets == third_again.targets);
  CHECK(third.contexts == third_again.contexts);

  SamplerConfig other = cfg;
  other.seed = 424243;
  PairSampler c(idx, policy, other);
  PairBatch bc = c.next_batch();
  PairBatch ba0 = a.batch_at(0);
  CHECK(bc.targets != ba0.targets);
}

TEST_CASE("sampler error paths") {
  MergePolicy policy = MergePolicy::default_policy();

  SUBCASE("empty graph") {
    Graph g;  // zero nodes
    ContextIndex idx = build_context(g, policy);
    SamplerConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS((void)sample_batch(idx, policy, cfg, rng), InvalidArgument);
  }
  SUBCASE("cap mismatch between index and policy") {
    Graph g = Graph::from_edges({{0, 1}, {1, 2}});
    ContextIndex idx = build_context(g, MergePolicy{{1, 2}});
    SamplerConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS((void)sample_batch(idx, policy, cfg, rng), InvalidArgument);
    CHECK_THROWS_AS(PairSampler(idx, policy, cfg), InvalidArgument);
  }
  SUBCASE("no node has any context under exclusion") {
    Graph g = Graph::from_edges({}, 3);  // three isolated nodes
    ContextIndex idx = build_context(g, policy);
    SamplerConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS((void)sample_batch(idx, policy, cfg, rng), SamplingError);
  }
}
