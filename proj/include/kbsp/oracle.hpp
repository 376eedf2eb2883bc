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

#include <span>
#include <stdexcept>
#include <vector>

#include "kbsp/graph_io.hpp"
#include "kbsp/types.hpp"

namespace kbsp::oracle {

struct PeelResult {
  CoreResult core;
  /// Vertices in the order they were removed.
  std::vector<VertexId> removal_order;
};

/// Sequential bucket peeling (Batagelj-Zaversnik), O(n + m).
CoreResult peel(const io::Graph& g);

/// Peels the vertex of minimum remaining degree at every step, ties broken by
/// ascending internal id. O(m log m); cores equal peel().
PeelResult peel_with_order(const io::Graph& g);

struct Summary {
  Core k_max = 0;
  /// Mean coreness rounded to 3 decimal places.
  double k_avg = 0.0;

  bool operator==(const Summary&) const = default;
};

/// Throws std::invalid_argument on an empty result.
Summary summarize(std::span<const Core> cores);

}  // namespace kbsp::oracle
