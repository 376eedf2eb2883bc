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

// Run reports for k-core decomposition.
//
// Schema notes:
//   supersteps               total supersteps executed, superstep 0 included
//   avg_updates_per_vertex   value-lowering events in supersteps >= 1, divided by n
//   pct_updated              vertices that lowered their value in a superstep, divided
//                            by n (not by the number of active vertices)
//   wall_ms                  time spent inside the engine run, parsing excluded

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kbsp/bsp_engine.hpp"
#include "kbsp/graph_io.hpp"
#include "kbsp/types.hpp"

namespace kbsp::report {

/// Counters do not add up (e.g. sent != delivered). Never patched over.
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Aggregators fed by the k-core program.
inline constexpr std::string_view kUpdatesAggregator = "updates";
inline constexpr std::string_view kUpdatesTotalAggregator = "updates_total";
inline constexpr std::string_view kCoreSumAggregator = "core_sum";

/// updates:       regular sum, vertices that lowered their value this superstep
/// updates_total: persistent sum of the same events over the whole run
/// core_sum:      persistent sum of value changes, i.e. the sum of current values
bsp::AggregatorSchema kcore_aggregators();

struct SuperstepStats {
  std::uint64_t superstep = 0;
  std::uint64_t active_vertices = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t vertices_updated = 0;
  double pct_updated = 0.0;

  bool operator==(const SuperstepStats&) const = default;
};

struct RunReport {
  std::string dataset;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t supersteps = 0;
  std::uint64_t total_messages = 0;
  double avg_updates_per_vertex = 0.0;
  std::uint64_t k_max = 0;
  double k_avg = 0.0;
  double wall_ms = 0.0;
  std::uint64_t workers = 0;
  std::uint64_t partitions = 0;
  std::vector<SuperstepStats> per_superstep;

  bool operator==(const RunReport&) const = default;

  /// Equality ignoring wall_ms.
  bool same_outcome(const RunReport& other) const;
};

struct RunMeta {
  std::string dataset;
  std::uint64_t workers = 1;
  std::uint64_t partitions = 1;
  double wall_ms = 0.0;
};

/// Assembles and checks a report. Throws IntegrityError when engine counters,
/// aggregator finals and the core result disagree.
RunReport collect(const io::Graph& g, std::span<const bsp::SuperstepCounters> counters,
                  std::span<const bsp::AggregatorSet> aggregates, std::span<const Core> cores,
                  const RunMeta& meta);

/// Rounds to `digits` significant decimal digits.
double round_significant(double x, int digits = 6);

std::string emit_json(const RunReport& report);
/// Inverse of emit_json. Throws std::invalid_argument on malformed input.
RunReport parse_json(std::string_view text);

inline constexpr std::string_view kSuperstepCsvHeader =
    "superstep,active_vertices,messages_sent,vertices_updated,pct_updated";

std::string emit_superstep_csv(const RunReport& report);

struct BenchRow {
  std::string dataset;
  std::uint64_t workers = 0;
  std::uint64_t partitions = 0;
  std::uint64_t repeat = 0;
  double wall_ms = 0.0;
  std::uint64_t supersteps = 0;
  std::uint64_t total_messages = 0;
};

inline constexpr std::string_view kBenchCsvHeader =
    "dataset,workers,partitions,repeat,wall_ms,supersteps,total_messages";

/// One CSV line for `row`, LF-terminated.
std::string bench_csv_line(const BenchRow& row);

/// Header plus one line per row. Throws std::invalid_argument on no rows.
std::string emit_bench_csv(std::span<const BenchRow> rows);

}  // namespace kbsp::report
