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

#include "kbsp/graph_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace kbsp::io {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Splits on runs of whitespace.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

OriginalId parse_id(std::string_view token, std::size_t line_no) {
  if (!token.empty() && token.front() == '-') {
    throw ParseError(line_no, "negative vertex id '" + std::string(token) + "'");
  }
  OriginalId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line_no, "not a vertex id: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::ptrdiff_t Graph::neighbor_index(VertexId v, VertexId u) const noexcept {
  auto adj = neighbors(v);
  auto it = std::lower_bound(adj.begin(), adj.end(), u);
  if (it == adj.end() || *it != u) return -1;
  return it - adj.begin();
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (VertexId v = 0; v < num_vertices(); ++v) best = std::max(best, degree(v));
  return best;
}

Graph Graph::from_adjacency(const std::vector<std::vector<VertexId>>& adjacency,
                            std::vector<OriginalId> id_map) {
  const std::size_t n = adjacency.size();
  if (id_map.empty()) {
    id_map.resize(n);
    std::iota(id_map.begin(), id_map.end(), OriginalId{0});
  }
  if (id_map.size() != n) {
    throw std::invalid_argument("id map size does not match vertex count");
  }

  Graph g;
  g.id_map_ = std::move(id_map);
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& adj = adjacency[v];
    for (std::size_t i = 0; i < adj.size(); ++i) {
      if (adj[i] >= n) throw std::invalid_argument("neighbor id out of range");
      if (adj[i] == v) throw std::invalid_argument("self-loop");
      if (i > 0 && adj[i - 1] >= adj[i]) {
        throw std::invalid_argument("neighbor list not strictly increasing");
      }
    }
    g.offsets_[v + 1] = g.offsets_[v] + adj.size();
    g.neighbors_.insert(g.neighbors_.end(), adj.begin(), adj.end());
  }
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId u : g.neighbors(v)) {
      if (!g.has_edge(u, v)) throw std::invalid_argument("asymmetric adjacency");
    }
  }
  return g;
}

EdgeList parse_edge_list(std::istream& in) {
  EdgeList el;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected 2 fields, found " + std::to_string(tokens.size()));
    }
    el.edges.emplace_back(parse_id(tokens[0], line_no), parse_id(tokens[1], line_no));
  }
  if (in.bad()) throw IoError("read failure after line " + std::to_string(line_no));
  return el;
}

EdgeList load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_edge_list(in);
}

Graph normalize(const EdgeList& el) {
  std::unordered_map<OriginalId, VertexId> dense;
  Graph g;
  auto intern = [&](OriginalId id) {
    auto [it, inserted] = dense.try_emplace(id, static_cast<VertexId>(g.id_map_.size()));
    if (inserted) g.id_map_.push_back(id);
    return it->second;
  };

  std::vector<std::pair<VertexId, VertexId>> arcs;
  arcs.reserve(2 * el.edges.size());
  for (auto [a, b] : el.edges) {
    if (a == b) continue;
    VertexId u = intern(a);
    VertexId v = intern(b);
    arcs.emplace_back(u, v);
    arcs.emplace_back(v, u);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

  const std::size_t n = g.id_map_.size();
  g.offsets_.assign(n + 1, 0);
  g.neighbors_.reserve(arcs.size());
  for (auto [u, v] : arcs) {
    ++g.offsets_[u + 1];
    g.neighbors_.push_back(v);
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  return g;
}

void write_cores(std::span<const Core> cores, const Graph& g, std::ostream& out) {
  if (cores.size() != g.num_vertices()) {
    throw std::invalid_argument("core result size does not match graph");
  }
  std::vector<VertexId> order(g.num_vertices());
  std::iota(order.begin(), order.end(), VertexId{0});
  std::sort(order.begin(), order.end(), [&](VertexId a, VertexId b) {
    return g.original_id(a) < g.original_id(b);
  });
  for (VertexId v : order) out << g.original_id(v) << '\t' << cores[v] << '\n';
  if (!out) throw IoError("write failure");
}

void write_cores(std::span<const Core> cores, const Graph& g,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_cores(cores, g, out);
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace kbsp::io
