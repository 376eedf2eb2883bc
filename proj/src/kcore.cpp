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

#include "kbsp/kcore.hpp"

#include <algorithm>
#include <chrono>

namespace kbsp::kcore {

namespace {

// Fixed by the order in report::kcore_aggregators().
constexpr std::size_t kUpdates = 0;
constexpr std::size_t kUpdatesTotal = 1;
constexpr std::size_t kCoreSum = 2;

}  // namespace

Core compute_upper_bound(Core value, std::span<const Core> ests) {
  if (value == 0) return 0;
  thread_local std::vector<std::size_t> count;
  count.assign(static_cast<std::size_t>(value) + 1, 0);
  for (Core e : ests) ++count[std::min(e, value)];
  std::size_t cumul = 0;
  for (Core i = value; i >= 2; --i) {
    cumul += count[i];
    if (cumul >= i) return i;
  }
  return 1;
}

void absorb_messages(std::span<const VertexId> neighbors, std::span<Core> est,
                     std::span<const Message> inbox) {
  for (const Message& m : inbox) {
    auto it = std::lower_bound(neighbors.begin(), neighbors.end(), m.source);
    if (it == neighbors.end() || *it != m.source) {
      throw bsp::ContractViolation("message from non-neighbor " + std::to_string(m.source));
    }
    Core& slot = est[static_cast<std::size_t>(it - neighbors.begin())];
    slot = std::min(slot, m.estimate);
  }
}

void KCoreProgram::init(Ctx& ctx) const {
  const auto degree = static_cast<Core>(ctx.degree());
  ctx.state().neighbor_est.assign(degree, kUnknownEstimate);
  ctx.set_value(degree);
  ctx.send_to_all_neighbors({ctx.id(), degree});
  ctx.aggregate(kCoreSum, degree);
}

void KCoreProgram::step(Ctx& ctx, std::span<const Message> inbox) const {
  auto& est = ctx.state().neighbor_est;
  absorb_messages(ctx.neighbors(), est, inbox);

  const Core value = ctx.value();
  const Core local = bound_(value, est);
  if (local < value) {
    ctx.set_value(local);
    ctx.send_to_all_neighbors({ctx.id(), local});
    ctx.aggregate(kUpdates, 1);
    ctx.aggregate(kUpdatesTotal, 1);
    ctx.aggregate(kCoreSum, -static_cast<std::int64_t>(value - local));
  }

  // Stay awake one more round if a neighbor reported something below us.
  bool halt = true;
  for (const Message& m : inbox) {
    if (ctx.value() > m.estimate) halt = false;
  }
  if (halt) ctx.vote_to_halt();
}

Decomposition decompose(const io::Graph& g, const bsp::EngineConfig& cfg,
                        const DecomposeOptions& options) {
  const KCoreProgram program(options.bound);
  const auto start = std::chrono::steady_clock::now();
  auto run = bsp::run(g, program, cfg, options.observer);
  const std::chrono::duration<double, std::milli> elapsed =
      std::chrono::steady_clock::now() - start;

  Decomposition out;
  out.report = report::collect(g, run.supersteps, run.aggregates, run.values,
                               {options.dataset, cfg.workers, cfg.partitions, elapsed.count()});
  out.core = std::move(run.values);
  return out;
}

}  // namespace kbsp::kcore
