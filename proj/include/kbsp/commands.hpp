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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "kbsp/bsp_engine.hpp"
#include "kbsp/graph_io.hpp"
#include "kbsp/types.hpp"

namespace kbsp::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,
  kNonTermination = 2,
  kIoError = 3,
  kMismatch = 4,
  kUsage = 64,
};

struct RunOptions {
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path report;
  std::size_t workers = 1;
  std::optional<std::size_t> partitions;  // defaults to workers
  std::optional<std::uint64_t> max_supersteps;
};

struct OracleOptions {
  std::filesystem::path input;
  std::filesystem::path output;
};

struct VerifyOptions {
  std::filesystem::path input;
  std::size_t workers = 1;
  std::optional<std::size_t> partitions;
};

struct BenchOptions {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::size_t> workers_list;
  std::size_t repeat = 3;
  std::filesystem::path out;
};

/// Produces core numbers for verification; swapped out in mutation tests.
using Decomposer = std::function<CoreResult(const io::Graph&, const bsp::EngineConfig&)>;

/// The engine-backed decomposer used by default.
CoreResult engine_decomposer(const io::Graph& g, const bsp::EngineConfig& cfg);

int cmd_run(const RunOptions& opts, std::ostream& err);
int cmd_oracle(const OracleOptions& opts, std::ostream& err);
/// Prints "OK n=<n> kmax=<k>" to `out` on success, exit 4 and the first ten
/// differing vertices to `err` on mismatch.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err,
               const Decomposer& decomposer = engine_decomposer);
int cmd_bench(const BenchOptions& opts, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kbsp::cli
