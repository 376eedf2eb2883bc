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

#include "kbsp/metrics_report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include <json.hpp>

#include "kbsp/oracle.hpp"

namespace kbsp::report {

namespace {

using Json = nlohmann::ordered_json;

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void check(bool ok, const std::string& what) {
  if (!ok) throw IntegrityError(what);
}

}  // namespace

bsp::AggregatorSchema kcore_aggregators() {
  bsp::AggregatorSchema schema;
  schema.add(std::string(kUpdatesAggregator), bsp::Reducer::kSum);
  schema.add(std::string(kUpdatesTotalAggregator), bsp::Reducer::kSum, /*persistent=*/true);
  schema.add(std::string(kCoreSumAggregator), bsp::Reducer::kSum, /*persistent=*/true);
  return schema;
}

bool RunReport::same_outcome(const RunReport& other) const {
  RunReport a = *this;
  RunReport b = other;
  a.wall_ms = b.wall_ms = 0.0;
  return a == b;
}

double round_significant(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

RunReport collect(const io::Graph& g, std::span<const bsp::SuperstepCounters> counters,
                  std::span<const bsp::AggregatorSet> aggregates, std::span<const Core> cores,
                  const RunMeta& meta) {
  const std::uint64_t n = g.num_vertices();
  check(!counters.empty(), "no supersteps recorded");
  check(aggregates.size() == counters.size(), "aggregator history length mismatch");
  check(cores.size() == n, "core result size does not match graph");

  RunReport r;
  r.dataset = meta.dataset;
  r.n = n;
  r.m = g.num_edges();
  r.supersteps = counters.size();
  r.workers = meta.workers;
  r.partitions = meta.partitions;
  r.wall_ms = round_significant(meta.wall_ms);

  const auto updates = aggregates.front().schema().index_of(kUpdatesAggregator);
  std::uint64_t total_updates = 0;
  for (std::size_t s = 0; s < counters.size(); ++s) {
    const auto& c = counters[s];
    check(c.superstep == s, "superstep indices out of order");
    check(c.messages_sent == c.messages_delivered,
          "superstep " + std::to_string(s) + ": sent " + std::to_string(c.messages_sent) +
              " != delivered " + std::to_string(c.messages_delivered));
    check(c.active_vertices <= n, "more active vertices than vertices");
    check(static_cast<std::uint64_t>(aggregates[s].value(updates)) == c.vertices_updated,
          "superstep " + std::to_string(s) + ": update aggregator disagrees with engine");
    if (s == 0) {
      check(c.vertices_updated == 0, "superstep 0 cannot update");
      check(c.active_vertices == n, "superstep 0 must invoke every vertex");
    }
    total_updates += c.vertices_updated;
    r.total_messages += c.messages_sent;
    r.per_superstep.push_back({c.superstep, c.active_vertices, c.messages_sent,
                               c.vertices_updated,
                               round_significant(ratio(c.vertices_updated, n))});
  }

  const auto& final_aggs = aggregates.back();
  check(static_cast<std::uint64_t>(final_aggs.value(kUpdatesTotalAggregator)) == total_updates,
        "update total aggregator disagrees with engine");
  const std::uint64_t core_sum = std::accumulate(cores.begin(), cores.end(), std::uint64_t{0});
  check(static_cast<std::uint64_t>(final_aggs.value(kCoreSumAggregator)) == core_sum,
        "core sum aggregator disagrees with final values");

  r.avg_updates_per_vertex = round_significant(ratio(total_updates, n));
  if (n > 0) {
    const auto summary = oracle::summarize(cores);
    r.k_max = summary.k_max;
    r.k_avg = round_significant(summary.k_avg);
  }
  return r;
}

std::string emit_json(const RunReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.per_superstep) {
    steps.push_back(Json{{"superstep", s.superstep},
                         {"active_vertices", s.active_vertices},
                         {"messages_sent", s.messages_sent},
                         {"vertices_updated", s.vertices_updated},
                         {"pct_updated", round_significant(s.pct_updated)}});
  }
  Json j{{"dataset", r.dataset},
         {"n", r.n},
         {"m", r.m},
         {"supersteps", r.supersteps},
         {"total_messages", r.total_messages},
         {"avg_updates_per_vertex", round_significant(r.avg_updates_per_vertex)},
         {"k_max", r.k_max},
         {"k_avg", round_significant(r.k_avg)},
         {"wall_ms", round_significant(r.wall_ms)},
         {"workers", r.workers},
         {"partitions", r.partitions},
         {"per_superstep", std::move(steps)}};
  return j.dump(2) + "\n";
}

RunReport parse_json(std::string_view text) {
  try {
    const Json j = Json::parse(text);
    RunReport r;
    r.dataset = j.at("dataset").get<std::string>();
    r.n = j.at("n").get<std::uint64_t>();
    r.m = j.at("m").get<std::uint64_t>();
    r.supersteps = j.at("supersteps").get<std::uint64_t>();
    r.total_messages = j.at("total_messages").get<std::uint64_t>();
    r.avg_updates_per_vertex = j.at("avg_updates_per_vertex").get<double>();
    r.k_max = j.at("k_max").get<std::uint64_t>();
    r.k_avg = j.at("k_avg").get<double>();
    r.wall_ms = j.at("wall_ms").get<double>();
    r.workers = j.at("workers").get<std::uint64_t>();
    r.partitions = j.at("partitions").get<std::uint64_t>();
    for (const auto& s : j.at("per_superstep")) {
      r.per_superstep.push_back({s.at("superstep").get<std::uint64_t>(),
                                 s.at("active_vertices").get<std::uint64_t>(),
                                 s.at("messages_sent").get<std::uint64_t>(),
                                 s.at("vertices_updated").get<std::uint64_t>(),
                                 s.at("pct_updated").get<double>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string emit_superstep_csv(const RunReport& r) {
  std::string out(kSuperstepCsvHeader);
  out += '\n';
  for (const auto& s : r.per_superstep) {
    out += std::to_string(s.superstep) + ',' + std::to_string(s.active_vertices) + ',' +
           std::to_string(s.messages_sent) + ',' + std::to_string(s.vertices_updated) + ',' +
           fixed(s.pct_updated, 6) + '\n';
  }
  return out;
}

std::string bench_csv_line(const BenchRow& row) {
  return csv_field(row.dataset) + ',' + std::to_string(row.workers) + ',' +
         std::to_string(row.partitions) + ',' + std::to_string(row.repeat) + ',' +
         fixed(row.wall_ms, 3) + ',' + std::to_string(row.supersteps) + ',' +
         std::to_string(row.total_messages) + '\n';
}

std::string emit_bench_csv(std::span<const BenchRow> rows) {
  if (rows.empty()) throw std::invalid_argument("emit_bench_csv: no rows");
  std::string out(kBenchCsvHeader);
  out += '\n';
  for (const auto& row : rows) out += bench_csv_line(row);
  return out;
}

}  // namespace kbsp::report
