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
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kbsp/types.hpp"

namespace kbsp::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw edge list in file order. Duplicates, self-loops and both
/// orientations of an edge are kept as they appear.
struct EdgeList {
  std::vector<std::pair<OriginalId, OriginalId>> edges;

  bool operator==(const EdgeList&) const = default;
};

/// Immutable undirected simple graph in CSR form.
///
/// Internal ids are dense in [0, n). Each neighbor list is sorted and free of
/// duplicates and self-loops, and v is a neighbor of u iff u is a neighbor of v.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from explicit adjacency lists, validating every invariant.
  /// `id_map` may be empty, in which case original ids equal internal ids.
  /// Throws std::invalid_argument on an asymmetric, unsorted or non-simple input.
  static Graph from_adjacency(const std::vector<std::vector<VertexId>>& adjacency,
                              std::vector<OriginalId> id_map = {});

  std::size_t num_vertices() const noexcept { return id_map_.size(); }
  /// Number of undirected edges.
  std::size_t num_edges() const noexcept { return neighbors_.size() / 2; }

  std::size_t degree(VertexId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }

  /// Position of `u` inside neighbors(v), or -1 when u is not adjacent.
  std::ptrdiff_t neighbor_index(VertexId v, VertexId u) const noexcept;

  bool has_edge(VertexId v, VertexId u) const noexcept {
    return neighbor_index(v, u) >= 0;
  }

  OriginalId original_id(VertexId v) const noexcept { return id_map_[v]; }
  std::span<const OriginalId> id_map() const noexcept { return id_map_; }

  std::size_t max_degree() const noexcept;

  bool operator==(const Graph&) const = default;

 private:
  friend Graph normalize(const EdgeList& el);

  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<OriginalId> id_map_;
};

/// Reads SNAP-style text: '#' comment lines, blank lines, and data lines with
/// exactly two non-negative integers separated by tabs or spaces.
EdgeList parse_edge_list(std::istream& in);

/// Opens and parses `path`. Throws IoError when the file cannot be read.
EdgeList load_edge_list(const std::filesystem::path& path);

/// Symmetrizes, drops self-loops, collapses parallel edges, and assigns dense
/// ids in first-appearance order. Vertices that only occur in self-loops get
/// no id.
Graph normalize(const EdgeList& el);

/// Writes "original_id<TAB>core" lines sorted by original id.
void write_cores(std::span<const Core> cores, const Graph& g, std::ostream& out);

void write_cores(std::span<const Core> cores, const Graph& g,
                 const std::filesystem::path& path);

}  // namespace kbsp::io
