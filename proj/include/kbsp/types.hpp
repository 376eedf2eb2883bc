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

#include <cstdint>
#include <limits>
#include <vector>

namespace kbsp {

/// Dense internal vertex id in [0, n).
using VertexId = std::uint32_t;

/// Vertex id as it appears in the input file.
using OriginalId = std::uint64_t;

/// Coreness value or coreness estimate.
using Core = std::uint32_t;

/// Estimate for a neighbor that has not been heard from; compares as +infinity.
inline constexpr Core kUnknownEstimate = std::numeric_limits<Core>::max();

/// Final coreness, indexed by internal vertex id.
using CoreResult = std::vector<Core>;

}  // namespace kbsp
