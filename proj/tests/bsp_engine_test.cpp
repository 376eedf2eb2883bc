// Copyright 2026 The kbsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbsp/bsp_engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "kbsp/kcore.hpp"
#include "test_support.hpp"

namespace kbsp {
namespace {

using bsp::EngineConfig;

// Forwards a token along edges; each vertex records the superstep in which it
// first heard the token and checks it was sent exactly one superstep earlier.
struct RelayProgram {
  using Value = std::int64_t;  // first receipt superstep, -1 if never
  struct State {
    bool forwarded = false;
  };
  struct Message {
    std::uint64_t sent_in = 0;
  };

  void init(bsp::Context<RelayProgram>& ctx) const {
    ctx.set_value(-1);
    if (ctx.id() == 0) {
      ctx.set_value(0);
      ctx.state().forwarded = true;
      ctx.send_to_all_neighbors({ctx.superstep()});
    }
    ctx.vote_to_halt();
  }

  void step(bsp::Context<RelayProgram>& ctx, std::span<const Message> inbox) const {
    for (const auto& m : inbox) {
      if (m.sent_in + 1 != ctx.superstep()) throw std::logic_error("message seen early or late");
    }
    if (!ctx.state().forwarded) {
      ctx.state().forwarded = true;
      ctx.set_value(static_cast<std::int64_t>(ctx.superstep()));
      ctx.send_to_all_neighbors({ctx.superstep()});
    }
    ctx.vote_to_halt();
  }
};

// Counts invocations; only vertex 0 sends, in superstep 0.
struct InvocationCounter {
  using Value = std::uint64_t;
  struct State {};
  struct Message {
    int payload = 0;
  };

  void init(bsp::Context<InvocationCounter>& ctx) const {
    ctx.set_value(1);
    if (ctx.id() == 0) ctx.send_to_all_neighbors({7});
    ctx.vote_to_halt();
  }
  void step(bsp::Context<InvocationCounter>& ctx, std::span<const Message>) const {
    ctx.set_value(ctx.value() + 1);
    ctx.vote_to_halt();
  }
};

// Never halts and never sends.
struct Spinner {
  using Value = int;
  struct State {};
  struct Message {};
  void init(bsp::Context<Spinner>&) const {}
  void step(bsp::Context<Spinner>&, std::span<const Message>) const {}
};

// Messages a vertex two hops away on a path.
struct Trespasser {
  using Value = int;
  struct State {};
  struct Message {};
  void init(bsp::Context<Trespasser>& ctx) const {
    if (ctx.id() == 0) ctx.send_to(2, {});
    ctx.vote_to_halt();
  }
  void step(bsp::Context<Trespasser>& ctx, std::span<const Message>) const { ctx.vote_to_halt(); }
};

// Contributes its degree to a max aggregator and a sum aggregator.
struct DegreeAggregator {
  using Value = int;
  struct State {};
  struct Message {};
  bsp::AggregatorSchema aggregators() const {
    bsp::AggregatorSchema s;
    s.add("max_degree", bsp::Reducer::kMax);
    s.add("degree_sum", bsp::Reducer::kSum);
    s.add("ticks", bsp::Reducer::kSum, /*persistent=*/true);
    return s;
  }
  void init(bsp::Context<DegreeAggregator>& ctx) const {
    ctx.aggregate("max_degree", static_cast<std::int64_t>(ctx.degree()));
    ctx.aggregate("degree_sum", static_cast<std::int64_t>(ctx.degree()));
    ctx.aggregate("ticks", 1);
    ctx.send_to_all_neighbors({});
  }
  void step(bsp::Context<DegreeAggregator>& ctx, std::span<const Message>) const {
    // Previous superstep's global value; only called on K4 in these tests.
    if (ctx.aggregated("degree_sum") != 12) {
      throw std::logic_error("unexpected aggregated value");
    }
    ctx.aggregate("ticks", 1);
    ctx.vote_to_halt();
  }
};

static_assert(bsp::VertexProgram<RelayProgram>);
static_assert(bsp::VertexProgram<kcore::KCoreProgram>);
static_assert(bsp::WithAggregators<DegreeAggregator>);
static_assert(!bsp::WithAggregators<Spinner>);

TEST(PartitionOf, Modulo) {
  EXPECT_EQ(bsp::partition_of(7, 4), 3u);
  for (VertexId v = 0; v < 50; ++v) EXPECT_EQ(bsp::partition_of(v, 1), 0u);
  std::vector<int> counts(10, 0);
  for (VertexId v = 0; v < 1000; ++v) {
    auto p = bsp::partition_of(v, 10);
    ASSERT_LT(p, 10u);
    ++counts[p];
  }
  for (int c : counts) EXPECT_EQ(c, 100);
}

TEST(PartitionSize, CoversAllVertices) {
  for (std::size_t n : {0u, 1u, 5u, 17u, 100u}) {
    for (std::size_t parts = 1; parts <= 9; ++parts) {
      std::size_t total = 0;
      for (std::size_t p = 0; p < parts; ++p) {
        std::size_t expect = 0;
        for (std::size_t v = 0; v < n; ++v) expect += (v % parts == p);
        EXPECT_EQ(bsp::partition_size(n, p, parts), expect);
        total += bsp::partition_size(n, p, parts);
      }
      EXPECT_EQ(total, n);
    }
  }
}

TEST(EngineConfig, Validation) {
  EXPECT_THROW((EngineConfig{0, 1, {}}).validate(), std::invalid_argument);
  EXPECT_THROW((EngineConfig{1, 0, {}}).validate(), std::invalid_argument);
  EXPECT_NO_THROW((EngineConfig{3, 2, {}}).validate());
  EXPECT_EQ((EngineConfig{}).superstep_cap(5), 60u);
  EXPECT_EQ((EngineConfig{1, 1, 7}).superstep_cap(5), 7u);
}

TEST(Deliver, EmptyOutboxes) {
  std::vector<bsp::PartitionOutbox<int>> out(3, bsp::PartitionOutbox<int>(3));
  auto inboxes = bsp::deliver<int>(out, 9);
  for (std::size_t p = 0; p < 3; ++p) {
    EXPECT_EQ(inboxes[p].size(), 0u);
    for (std::size_t local = 0; local < 3; ++local) EXPECT_TRUE(inboxes[p].of(local).empty());
  }
}

TEST(Deliver, RoutesToTargets) {
  // Vertex 0 (partition 0 of 2) sends to 1 and 2.
  std::vector<bsp::PartitionOutbox<int>> out(2, bsp::PartitionOutbox<int>(2));
  out[0][bsp::partition_of(1, 2)].push_back({1, 42});
  out[0][bsp::partition_of(2, 2)].push_back({2, 42});
  auto inboxes = bsp::deliver<int>(out, 3);
  EXPECT_EQ(std::vector<int>(inboxes[1].of(0).begin(), inboxes[1].of(0).end()), (std::vector<int>{42}));
  EXPECT_EQ(std::vector<int>(inboxes[0].of(1).begin(), inboxes[0].of(1).end()), (std::vector<int>{42}));
  EXPECT_TRUE(inboxes[0].of(0).empty());
}

TEST(Deliver, ConservesMessages) {
  std::mt19937_64 rng(3);
  const std::size_t n = 50;
  const std::size_t parts = 4;
  std::vector<bsp::PartitionOutbox<std::uint64_t>> out(parts, bsp::PartitionOutbox<std::uint64_t>(parts));
  std::vector<std::vector<std::uint64_t>> expected(n);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto target = static_cast<VertexId>(rng() % n);
    out[rng() % parts][bsp::partition_of(target, parts)].push_back({target, i});
    expected[target].push_back(i);
  }
  auto inboxes = bsp::deliver<std::uint64_t>(out, n);
  std::size_t total = 0;
  for (VertexId v = 0; v < n; ++v) {
    auto got = inboxes[v % parts].of(v / parts);
    std::vector<std::uint64_t> sorted(got.begin(), got.end());
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, expected[v]);
    total += got.size();
  }
  EXPECT_EQ(total, 1000u);
}

TEST(Aggregators, SumMaxIdentityAndMismatch) {
  bsp::AggregatorSchema schema;
  schema.add("sum", bsp::Reducer::kSum);
  schema.add("max", bsp::Reducer::kMax);
  EXPECT_THROW(schema.add("sum", bsp::Reducer::kMax), std::invalid_argument);

  std::vector<bsp::AggregatorSet> partials(3, bsp::AggregatorSet(schema));
  partials[0].contribute("sum", 3);
  partials[1].contribute("sum", 4);
  auto global = bsp::aggregate_superstep(partials);
  EXPECT_EQ(global.value("sum"), 7);
  EXPECT_EQ(global.value("max"), 0);

  bsp::AggregatorSchema other;
  other.add("sum", bsp::Reducer::kSum);
  partials.push_back(bsp::AggregatorSet(other));
  EXPECT_THROW(bsp::aggregate_superstep(partials), bsp::SchemaMismatch);
  EXPECT_THROW(global.value("nope"), std::out_of_range);
}

TEST(Aggregators, OrderInsensitive) {
  bsp::AggregatorSchema schema;
  schema.add("sum", bsp::Reducer::kSum);
  schema.add("max", bsp::Reducer::kMax);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::int64_t> contributions(20);
    for (auto& c : contributions) c = static_cast<std::int64_t>(rng() % 100);
    bsp::AggregatorSet whole(schema);
    for (auto c : contributions) {
      whole.contribute(0, c);
      whole.contribute(1, c);
    }
    const std::size_t parts = 1 + rng() % 6;
    std::vector<bsp::AggregatorSet> partials(parts, bsp::AggregatorSet(schema));
    std::shuffle(contributions.begin(), contributions.end(), rng);
    for (std::size_t i = 0; i < contributions.size(); ++i) {
      partials[i % parts].contribute(0, contributions[i]);
      partials[i % parts].contribute(1, contributions[i]);
    }
    EXPECT_EQ(bsp::aggregate_superstep(partials), whole);
  }
}

TEST(Run, EmptyGraph) {
  auto result = bsp::run(io::Graph{}, kcore::KCoreProgram{}, EngineConfig{});
  EXPECT_TRUE(result.values.empty());
  ASSERT_EQ(result.supersteps.size(), 1u);
  EXPECT_EQ(result.supersteps[0].messages_sent, 0u);
}

TEST(Run, SingleEdgeKCore) {
  auto result = bsp::run(testing::graph_of({{0, 1}}), kcore::KCoreProgram{}, EngineConfig{});
  EXPECT_EQ(result.values, (std::vector<Core>{1, 1}));
  EXPECT_EQ(result.supersteps[0].messages_sent, 2u);
}

TEST(Run, TrianglePartitionIndependent) {
  const auto g = testing::graph_of(testing::clique(3));
  std::vector<bsp::SuperstepCounters> first;
  for (std::size_t parts : {1u, 2u, 3u}) {
    auto result = bsp::run(g, kcore::KCoreProgram{}, EngineConfig{parts, parts, {}});
    EXPECT_EQ(result.values, (std::vector<Core>{2, 2, 2}));
    if (first.empty()) first = result.supersteps;
    EXPECT_EQ(result.supersteps, first) << "partitions " << parts;
  }
}

TEST(Run, MessagesVisibleOnlyNextSuperstep) {
  const auto g = testing::graph_of(testing::path(12));
  for (std::size_t parts : {1u, 3u, 5u}) {
    auto result = bsp::run(g, RelayProgram{}, EngineConfig{parts, parts, {}});
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      EXPECT_EQ(result.values[v], static_cast<std::int64_t>(g.original_id(v)));
    }
  }
}

TEST(Run, HaltedVerticesStayAsleepWithoutMessages) {
  // Star centered at 0 plus a disconnected edge 10-11.
  auto edges = testing::star(4);
  edges.emplace_back(10, 11);
  const auto g = testing::graph_of(edges);
  auto result = bsp::run(g, InvocationCounter{}, EngineConfig{2, 2, {}});
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const OriginalId id = g.original_id(v);
    const bool leaf = id >= 1 && id <= 4;
    EXPECT_EQ(result.values[v], leaf ? 2u : 1u) << "vertex " << id;
  }
  ASSERT_EQ(result.supersteps.size(), 2u);
  EXPECT_EQ(result.supersteps[1].active_vertices, 4u);
}

TEST(Run, CapRaisesNonTermination) {
  try {
    bsp::run(testing::graph_of(testing::path(3)), Spinner{}, EngineConfig{1, 1, 5});
    FAIL() << "expected NonTerminationError";
  } catch (const bsp::NonTerminationError& e) {
    EXPECT_EQ(e.partial().size(), 5u);
    EXPECT_EQ(e.partial().back().active_vertices, 3u);
  }
}

TEST(Run, NonNeighborSendIsContractViolation) {
  for (std::size_t workers : {1u, 3u}) {
    EXPECT_THROW(bsp::run(testing::graph_of(testing::path(3)), Trespasser{},
                          EngineConfig{3, workers, {}}),
                 bsp::ContractViolation);
  }
}

TEST(Run, AggregatorsMergeAcrossPartitions) {
  const auto g = testing::graph_of(testing::clique(4));
  for (std::size_t parts : {1u, 2u, 4u}) {
    auto result = bsp::run(g, DegreeAggregator{}, EngineConfig{parts, parts, {}});
    ASSERT_EQ(result.aggregates.size(), 2u);
    EXPECT_EQ(result.aggregates[0].value("max_degree"), 3);
    EXPECT_EQ(result.aggregates[0].value("degree_sum"), 12);
    EXPECT_EQ(result.aggregates[1].value("degree_sum"), 0);
    EXPECT_EQ(result.aggregates[1].value("ticks"), 8);
  }
}

TEST(Run, KCoreDeterministicAcrossWorkers) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto g = testing::graph_of(testing::erdos_renyi(20 + seed * 4, 0.08, seed));
    std::optional<bsp::RunResult<Core>> base;
    for (std::size_t workers : {1u, 2u, 4u, 8u}) {
      auto result = bsp::run(g, kcore::KCoreProgram{}, EngineConfig{workers, workers, {}});
      if (!base) {
        base = std::move(result);
        continue;
      }
      EXPECT_EQ(result.values, base->values) << "seed " << seed;
      EXPECT_EQ(result.supersteps, base->supersteps) << "seed " << seed;
      EXPECT_EQ(result.aggregates, base->aggregates) << "seed " << seed;
    }
  }
}

TEST(Run, WorkersAndPartitionsDecoupled) {
  const auto g = testing::graph_of(testing::erdos_renyi(120, 0.05, 9));
  auto base = bsp::run(g, kcore::KCoreProgram{}, EngineConfig{1, 1, {}});
  for (auto [parts, workers] : {std::pair{7u, 2u}, std::pair{2u, 7u}, std::pair{16u, 3u}}) {
    auto result = bsp::run(g, kcore::KCoreProgram{}, EngineConfig{parts, workers, {}});
    EXPECT_EQ(result.values, base.values);
    EXPECT_EQ(result.supersteps, base.supersteps);
  }
}

TEST(Run, ConservationAndTermination) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto g = testing::graph_of(testing::erdos_renyi(60, 0.1, seed));
    auto result = bsp::run(g, kcore::KCoreProgram{}, EngineConfig{3, 2, {}});
    EXPECT_EQ(result.total_messages_sent(), result.total_messages_delivered());
    for (const auto& c : result.supersteps) EXPECT_EQ(c.messages_sent, c.messages_delivered);
    EXPECT_EQ(result.supersteps.back().messages_sent, 0u);
  }
}

}  // namespace
}  // namespace kbsp
