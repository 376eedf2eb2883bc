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

#pragma once

// In-process bulk-synchronous vertex-centric engine.
//
// A run is a sequence of supersteps separated by global barriers. Superstep 0
// calls Program::init on every vertex; later supersteps call Program::step on
// each vertex that is still active or received messages. Messages sent in
// superstep s become visible in s + 1 only. The run ends at the first barrier
// where every vertex has voted to halt and no message is in flight.
//
// Vertices are hash-partitioned (v mod partitions). Partitions are spread over
// `workers` threads; a thread owns its partitions' vertex state exclusively
// and writes messages into per-(source, destination) partition outboxes that
// are only read after the barrier. Delivery concatenates outboxes in source
// partition order, so results do not depend on the worker count.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "kbsp/graph_io.hpp"
#include "kbsp/types.hpp"

namespace kbsp::bsp {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A vertex program broke the engine contract (e.g. messaged a non-neighbor).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class SchemaMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SuperstepCounters {
  std::uint64_t superstep = 0;
  /// Vertices invoked in this superstep.
  std::uint64_t active_vertices = 0;
  std::uint64_t messages_sent = 0;
  /// Messages sent in this superstep that landed in an inbox at the barrier.
  std::uint64_t messages_delivered = 0;
  /// Vertices whose value changed. Always 0 for superstep 0.
  std::uint64_t vertices_updated = 0;

  bool operator==(const SuperstepCounters&) const = default;
};

/// Thrown when the superstep cap is reached; carries the counters so far.
class NonTerminationError : public std::runtime_error {
 public:
  NonTerminationError(std::uint64_t cap, std::vector<SuperstepCounters> partial);

  const std::vector<SuperstepCounters>& partial() const noexcept { return partial_; }

 private:
  std::vector<SuperstepCounters> partial_;
};

// ---------------------------------------------------------------------------
// Configuration and partitioning
// ---------------------------------------------------------------------------

struct EngineConfig {
  std::size_t partitions = 1;
  std::size_t workers = 1;
  /// Defaults to 10 * n + 10 when unset.
  std::optional<std::uint64_t> max_supersteps;

  /// Throws std::invalid_argument when partitions or workers is zero.
  void validate() const;

  std::uint64_t superstep_cap(std::size_t num_vertices) const;
};

inline std::size_t partition_of(VertexId v, std::size_t partitions) {
  return static_cast<std::size_t>(v) % partitions;
}

/// Number of vertices in [0, n) owned by `partition`.
inline std::size_t partition_size(std::size_t n, std::size_t partition,
                                  std::size_t partitions) {
  return n > partition ? (n - partition + partitions - 1) / partitions : 0;
}

// ---------------------------------------------------------------------------
// Aggregators
// ---------------------------------------------------------------------------

enum class Reducer { kSum, kMax };

struct AggregatorSpec {
  std::string name;
  Reducer reducer = Reducer::kSum;
  /// Persistent aggregators keep accumulating across supersteps; regular ones
  /// restart from the identity every superstep.
  bool persistent = false;

  bool operator==(const AggregatorSpec&) const = default;
};

class AggregatorSchema {
 public:
  /// Registers an aggregator and returns its index. Names must be unique.
  std::size_t add(std::string name, Reducer reducer, bool persistent = false);

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws std::out_of_range for an unknown name.
  std::size_t index_of(std::string_view name) const;

  std::size_t size() const noexcept { return specs_.size(); }
  const AggregatorSpec& operator[](std::size_t i) const { return specs_[i]; }
  std::span<const AggregatorSpec> specs() const noexcept { return specs_; }

  bool operator==(const AggregatorSchema&) const = default;

 private:
  std::vector<AggregatorSpec> specs_;
};

std::int64_t identity(Reducer r) noexcept;
std::int64_t combine(Reducer r, std::int64_t a, std::int64_t b) noexcept;

/// One value per aggregator of a schema.
class AggregatorSet {
 public:
  AggregatorSet() = default;
  explicit AggregatorSet(AggregatorSchema schema);

  const AggregatorSchema& schema() const noexcept { return schema_; }
  std::span<const std::int64_t> values() const noexcept { return values_; }

  void contribute(std::size_t index, std::int64_t contribution);
  void contribute(std::string_view name, std::int64_t contribution);

  /// Throws SchemaMismatch if `other` uses a different schema.
  void merge(const AggregatorSet& other);

  /// Seeds persistent aggregators from the previous global state.
  void carry_persistent(const AggregatorSet& previous);

  std::int64_t value(std::size_t index) const { return values_.at(index); }
  std::int64_t value(std::string_view name) const;

  bool operator==(const AggregatorSet&) const = default;

 private:
  AggregatorSchema schema_;
  std::vector<std::int64_t> values_;
};

/// Reduces partition-local partials into the global state for one superstep.
/// An empty span yields an empty set; differing schemas throw SchemaMismatch.
AggregatorSet aggregate_superstep(std::span<const AggregatorSet> partials);

// ---------------------------------------------------------------------------
// Messaging
// ---------------------------------------------------------------------------

template <class M>
struct Envelope {
  VertexId target;
  M message;
};

/// Outboxes of one source partition, one bucket per destination partition.
template <class M>
using PartitionOutbox = std::vector<std::vector<Envelope<M>>>;

/// Inbox of one partition in CSR form, indexed by local vertex slot.
template <class M>
struct PartitionInbox {
  std::vector<std::size_t> offsets{0};
  std::vector<M> messages;

  std::span<const M> of(std::size_t local) const {
    return {messages.data() + offsets[local], offsets[local + 1] - offsets[local]};
  }
  std::size_t size() const noexcept { return messages.size(); }
};

/// Builds the next-superstep inbox of `dst` from every source partition's
/// outbox bucket for `dst`. Returns the number of messages delivered.
template <class M>
std::size_t deliver_partition(std::span<const PartitionOutbox<M>> outboxes,
                              std::size_t dst, std::size_t partitions,
                              std::size_t num_vertices, PartitionInbox<M>& inbox) {
  const std::size_t slots = partition_size(num_vertices, dst, partitions);
  inbox.offsets.assign(slots + 1, 0);
  std::size_t total = 0;
  for (const auto& src : outboxes) {
    for (const auto& env : src[dst]) {
      ++inbox.offsets[env.target / partitions + 1];
      ++total;
    }
  }
  for (std::size_t i = 0; i < slots; ++i) inbox.offsets[i + 1] += inbox.offsets[i];
  inbox.messages.resize(total);
  std::vector<std::size_t> cursor(inbox.offsets.begin(), inbox.offsets.end() - 1);
  for (const auto& src : outboxes) {
    for (const auto& env : src[dst]) {
      inbox.messages[cursor[env.target / partitions]++] = env.message;
    }
  }
  return total;
}

/// Delivers all outboxes at once; convenience wrapper over deliver_partition.
template <class M>
std::vector<PartitionInbox<M>> deliver(std::span<const PartitionOutbox<M>> outboxes,
                                       std::size_t num_vertices) {
  const std::size_t partitions = outboxes.size();
  std::vector<PartitionInbox<M>> inboxes(partitions);
  for (std::size_t p = 0; p < partitions; ++p) {
    deliver_partition(outboxes, p, partitions, num_vertices, inboxes[p]);
  }
  return inboxes;
}

// ---------------------------------------------------------------------------
// Vertex programs
// ---------------------------------------------------------------------------

template <class P>
class Context;

namespace detail {
template <class P>
struct ContextAccess;
}  // namespace detail

/// A vertex program supplies three types and two entry points:
///   Value             the per-vertex result, returned by run()
///   State             private per-vertex working state
///   Message           payload delivered across superstep boundaries
///   init(ctx)         superstep 0, every vertex
///   step(ctx, inbox)  superstep >= 1, active vertices or non-empty inbox
/// Both are called on a const program object from several threads.
/// Optionally `AggregatorSchema aggregators() const` registers aggregators.
template <class P>
concept VertexProgram =
    std::regular<typename P::Value> && std::default_initializable<typename P::State> &&
    std::copyable<typename P::Message> && std::default_initializable<typename P::Message> &&
    requires(const P& p, Context<P>& ctx, std::span<const typename P::Message> inbox) {
      p.init(ctx);
      p.step(ctx, inbox);
    };

template <class P>
concept WithAggregators = requires(const P& p) {
  { p.aggregators() } -> std::convertible_to<AggregatorSchema>;
};

template <class Value>
struct RunResult {
  std::vector<Value> values;
  std::vector<SuperstepCounters> supersteps;
  AggregatorSchema schema;
  /// Global aggregator state after each superstep.
  std::vector<AggregatorSet> aggregates;

  std::uint64_t total_messages_sent() const noexcept {
    std::uint64_t s = 0;
    for (const auto& c : supersteps) s += c.messages_sent;
    return s;
  }
  std::uint64_t total_messages_delivered() const noexcept {
    std::uint64_t s = 0;
    for (const auto& c : supersteps) s += c.messages_delivered;
    return s;
  }
};

/// Called after every superstep barrier with the values at that point.
template <class Value>
using SuperstepObserver = std::function<void(std::uint64_t, std::span<const Value>)>;

namespace detail {

template <class P>
struct Shared {
  const io::Graph& graph;
  std::size_t partitions;
  std::vector<typename P::Value> values{};
  std::vector<typename P::State> states{};
  std::vector<std::uint8_t> halted{};
  std::vector<PartitionOutbox<typename P::Message>> outboxes{};
  std::vector<PartitionInbox<typename P::Message>> inboxes{};
  std::vector<AggregatorSet> partials{};
  AggregatorSet previous{};
};

// Per-partition tallies for one superstep.
struct Tally {
  std::uint64_t invoked = 0;
  std::uint64_t sent = 0;
  std::uint64_t updated = 0;
  std::uint64_t still_active = 0;
  std::uint64_t delivered = 0;
};

// Runs fn(partition) for every partition over up to `workers` threads.
// Thread i takes partitions i, i + workers, ... The first exception by
// partition order is rethrown after all threads join.
template <class Fn>
void for_each_partition(std::size_t partitions, std::size_t workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(partitions);
  auto lane = [&](std::size_t first, std::size_t stride) {
    for (std::size_t p = first; p < partitions; p += stride) {
      try {
        fn(p);
      } catch (...) {
        errors[p] = std::current_exception();
      }
    }
  };
  const std::size_t lanes = std::min(workers, partitions);
  if (lanes <= 1) {
    lane(0, 1);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(lanes - 1);
    for (std::size_t i = 1; i < lanes; ++i) threads.emplace_back(lane, i, lanes);
    lane(0, lanes);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

template <class P>
class Context {
 public:
  using Value = typename P::Value;
  using State = typename P::State;
  using Message = typename P::Message;

  VertexId id() const noexcept { return id_; }
  std::size_t degree() const noexcept { return shared_.graph.degree(id_); }
  std::span<const VertexId> neighbors() const noexcept { return shared_.graph.neighbors(id_); }
  std::uint64_t superstep() const noexcept { return superstep_; }

  const Value& value() const noexcept { return shared_.values[id_]; }
  void set_value(Value v) { shared_.values[id_] = std::move(v); }

  State& state() noexcept { return shared_.states[id_]; }
  const State& state() const noexcept { return shared_.states[id_]; }

  void send_to_all_neighbors(const Message& m) {
    for (VertexId u : neighbors()) post(u, m);
  }

  /// Throws ContractViolation unless `target` is a direct neighbor.
  void send_to(VertexId target, const Message& m) {
    if (target >= shared_.graph.num_vertices() || !shared_.graph.has_edge(id_, target)) {
      throw ContractViolation("vertex " + std::to_string(id_) +
                              " sent a message to non-neighbor " + std::to_string(target));
    }
    post(target, m);
  }

  void vote_to_halt() noexcept { shared_.halted[id_] = 1; }

  void aggregate(std::size_t index, std::int64_t contribution) {
    shared_.partials[partition_].contribute(index, contribution);
  }
  void aggregate(std::string_view name, std::int64_t contribution) {
    shared_.partials[partition_].contribute(name, contribution);
  }

  /// Global aggregator value from the previous superstep.
  std::int64_t aggregated(std::string_view name) const { return shared_.previous.value(name); }

 private:
  friend struct detail::ContextAccess<P>;

  Context(detail::Shared<P>& shared, std::size_t partition, std::uint64_t superstep,
          detail::Tally& tally)
      : shared_(shared), partition_(partition), superstep_(superstep), tally_(tally) {}

  void post(VertexId target, const Message& m) {
    shared_.outboxes[partition_][partition_of(target, shared_.partitions)].push_back({target, m});
    ++tally_.sent;
  }

  detail::Shared<P>& shared_;
  std::size_t partition_;
  std::uint64_t superstep_;
  detail::Tally& tally_;
  VertexId id_ = 0;
};

namespace detail {

template <class P>
struct ContextAccess {
  static Context<P> make(Shared<P>& shared, std::size_t partition, std::uint64_t superstep,
                         Tally& tally) {
    return Context<P>(shared, partition, superstep, tally);
  }
  static void bind(Context<P>& ctx, VertexId v) noexcept { ctx.id_ = v; }
};

}  // namespace detail

/// Executes `program` on `g` to termination.
///
/// Throws NonTerminationError when the superstep cap is hit and rethrows any
/// exception raised by the program (ContractViolation included).
template <VertexProgram P>
RunResult<typename P::Value> run(const io::Graph& g, const P& program, const EngineConfig& cfg,
                                 SuperstepObserver<typename P::Value> observer = {}) {
  using Value = typename P::Value;
  using Message = typename P::Message;
  static_assert(!std::is_same_v<Value, bool>, "vector<bool> is not thread-safe per element");

  cfg.validate();
  const std::size_t n = g.num_vertices();
  const std::size_t partitions = cfg.partitions;
  const std::uint64_t cap = cfg.superstep_cap(n);

  AggregatorSchema schema;
  if constexpr (WithAggregators<P>) schema = program.aggregators();

  detail::Shared<P> shared{g, partitions};
  shared.values.resize(n);
  shared.states.resize(n);
  shared.halted.assign(n, 0);
  shared.outboxes.assign(partitions, PartitionOutbox<Message>(partitions));
  shared.inboxes.resize(partitions);
  shared.previous = AggregatorSet(schema);

  RunResult<Value> result;
  result.schema = schema;

  std::vector<detail::Tally> tallies(partitions);
  for (std::uint64_t superstep = 0;; ++superstep) {
    if (superstep >= cap) {
      throw NonTerminationError(cap, std::move(result.supersteps));
    }
    std::fill(tallies.begin(), tallies.end(), detail::Tally{});
    shared.partials.assign(partitions, AggregatorSet(schema));

    // Compute phase.
    detail::for_each_partition(partitions, cfg.workers, [&](std::size_t p) {
      detail::Tally& tally = tallies[p];
      auto ctx = detail::ContextAccess<P>::make(shared, p, superstep, tally);
      const std::size_t slots = partition_size(n, p, partitions);
      for (std::size_t local = 0; local < slots; ++local) {
        const auto v = static_cast<VertexId>(local * partitions + p);
        detail::ContextAccess<P>::bind(ctx, v);
        if (superstep == 0) {
          program.init(ctx);
        } else {
          auto inbox = shared.inboxes[p].of(local);
          if (shared.halted[v] && inbox.empty()) continue;
          shared.halted[v] = 0;
          const Value before = shared.values[v];
          program.step(ctx, inbox);
          if (!(shared.values[v] == before)) ++tally.updated;
        }
        ++tally.invoked;
        if (!shared.halted[v]) ++tally.still_active;
      }
    });

    // Barrier: delivery into next-superstep inboxes.
    detail::for_each_partition(partitions, cfg.workers, [&](std::size_t p) {
      tallies[p].delivered = deliver_partition<Message>(shared.outboxes, p, partitions, n,
                                                        shared.inboxes[p]);
    });
    for (auto& src : shared.outboxes) {
      for (auto& bucket : src) bucket.clear();
    }

    // Barrier: aggregation.
    AggregatorSet global = aggregate_superstep(shared.partials);
    global.carry_persistent(shared.previous);
    shared.previous = global;
    result.aggregates.push_back(std::move(global));

    SuperstepCounters counters{superstep, 0, 0, 0, 0};
    std::uint64_t active = 0;
    for (const auto& t : tallies) {
      counters.active_vertices += t.invoked;
      counters.messages_sent += t.sent;
      counters.messages_delivered += t.delivered;
      counters.vertices_updated += t.updated;
      active += t.still_active;
    }
    result.supersteps.push_back(counters);
    if (observer) observer(superstep, shared.values);

    if (active == 0 && counters.messages_delivered == 0) break;
  }

  result.values = std::move(shared.values);
  return result;
}

}  // namespace kbsp::bsp
