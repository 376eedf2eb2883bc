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

// Distributed k-core decomposition as a vertex program.
//
// Every vertex starts with its degree as coreness estimate and broadcasts it.
// On each later superstep it folds incoming estimates into a per-neighbor
// cache and recomputes the largest i such that at least i neighbors have an
// estimate >= i. A lower result is adopted and broadcast. Estimates only
// decrease and never drop below the true coreness, so the fixed point is the
// exact core number.
//
// The cache matters: after superstep 1 a vertex hears only from neighbors
// whose estimate changed, and the bound must still see all of them.

#include <functional>
#include <span>

#include "kbsp/bsp_engine.hpp"
#include "kbsp/graph_io.hpp"
#include "kbsp/metrics_report.hpp"
#include "kbsp/types.hpp"

namespace kbsp::kcore {

struct Message {
  VertexId source = 0;
  Core estimate = 0;
};

struct VertexState {
  /// Last-known estimate per neighbor, aligned with Graph::neighbors().
  /// kUnknownEstimate until the neighbor's first message arrives.
  std::vector<Core> neighbor_est;
};

/// Largest i in [1, value] such that at least i of `ests` are >= i, or 1 when
/// no i >= 2 qualifies. Each estimate is clamped to `value` first; entries are
/// order-insensitive. Returns 0 when value is 0.
Core compute_upper_bound(Core value, std::span<const Core> ests);

/// Folds `inbox` into the per-neighbor estimate cache, keeping the minimum per
/// neighbor. Throws bsp::ContractViolation for a sender outside `neighbors`.
void absorb_messages(std::span<const VertexId> neighbors, std::span<Core> est,
                     std::span<const Message> inbox);

using UpperBoundFn = Core (*)(Core, std::span<const Core>);

class KCoreProgram {
 public:
  using Value = Core;
  using State = VertexState;
  using Message = kcore::Message;
  using Ctx = bsp::Context<KCoreProgram>;

  /// `bound` is swappable so tests can inject a faulty estimator.
  explicit KCoreProgram(UpperBoundFn bound = compute_upper_bound) : bound_(bound) {}

  bsp::AggregatorSchema aggregators() const { return report::kcore_aggregators(); }

  void init(Ctx& ctx) const;
  void step(Ctx& ctx, std::span<const Message> inbox) const;

 private:
  UpperBoundFn bound_;
};

struct DecomposeOptions {
  UpperBoundFn bound = compute_upper_bound;
  std::string dataset;
  bsp::SuperstepObserver<Core> observer;
};

struct Decomposition {
  CoreResult core;
  report::RunReport report;
};

/// Runs KCoreProgram to termination and assembles the run report.
Decomposition decompose(const io::Graph& g, const bsp::EngineConfig& cfg,
                        const DecomposeOptions& options = {});

}  // namespace kbsp::kcore
