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

#include <algorithm>
#include <limits>

namespace kbsp::bsp {

NonTerminationError::NonTerminationError(std::uint64_t cap,
                                         std::vector<SuperstepCounters> partial)
    : std::runtime_error("no termination within " + std::to_string(cap) + " supersteps"),
      partial_(std::move(partial)) {}

void EngineConfig::validate() const {
  if (partitions == 0) throw std::invalid_argument("partitions must be >= 1");
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");
  if (max_supersteps && *max_supersteps == 0) {
    throw std::invalid_argument("max_supersteps must be >= 1");
  }
}

std::uint64_t EngineConfig::superstep_cap(std::size_t num_vertices) const {
  return max_supersteps.value_or(10 * static_cast<std::uint64_t>(num_vertices) + 10);
}

std::size_t AggregatorSchema::add(std::string name, Reducer reducer, bool persistent) {
  if (find(name)) throw std::invalid_argument("duplicate aggregator '" + name + "'");
  specs_.push_back({std::move(name), reducer, persistent});
  return specs_.size() - 1;
}

std::optional<std::size_t> AggregatorSchema::find(std::string_view name) const {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t AggregatorSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw std::out_of_range("unknown aggregator '" + std::string(name) + "'");
}

// Core values are non-negative, so 0 is the identity for max as well.
std::int64_t identity(Reducer) noexcept { return 0; }

std::int64_t combine(Reducer r, std::int64_t a, std::int64_t b) noexcept {
  switch (r) {
    case Reducer::kSum:
      return a + b;
    case Reducer::kMax:
      return std::max(a, b);
  }
  return a;
}

AggregatorSet::AggregatorSet(AggregatorSchema schema) : schema_(std::move(schema)) {
  values_.reserve(schema_.size());
  for (const auto& spec : schema_.specs()) values_.push_back(identity(spec.reducer));
}

void AggregatorSet::contribute(std::size_t index, std::int64_t contribution) {
  values_.at(index) = combine(schema_[index].reducer, values_[index], contribution);
}

void AggregatorSet::contribute(std::string_view name, std::int64_t contribution) {
  contribute(schema_.index_of(name), contribution);
}

void AggregatorSet::merge(const AggregatorSet& other) {
  if (!(schema_ == other.schema_)) throw SchemaMismatch("aggregator schemas differ");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] = combine(schema_[i].reducer, values_[i], other.values_[i]);
  }
}

void AggregatorSet::carry_persistent(const AggregatorSet& previous) {
  if (!(schema_ == previous.schema_)) throw SchemaMismatch("aggregator schemas differ");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (schema_[i].persistent) {
      values_[i] = combine(schema_[i].reducer, previous.values_[i], values_[i]);
    }
  }
}

std::int64_t AggregatorSet::value(std::string_view name) const {
  return values_[schema_.index_of(name)];
}

AggregatorSet aggregate_superstep(std::span<const AggregatorSet> partials) {
  if (partials.empty()) return {};
  AggregatorSet global(partials.front().schema());
  for (const auto& partial : partials) global.merge(partial);
  return global;
}

}  // namespace kbsp::bsp
