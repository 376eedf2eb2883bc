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

#include "kbsp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace kbsp::oracle {

CoreResult peel(const io::Graph& g) {
  const std::size_t n = g.num_vertices();
  const std::size_t max_deg = g.max_degree();

  CoreResult core(n);
  std::vector<std::size_t> deg(n);
  for (VertexId v = 0; v < n; ++v) deg[v] = g.degree(v);

  // bin[d] = first slot of degree-d vertices in `order`; counting sort keeps
  // equal-degree vertices in ascending id order.
  std::vector<std::size_t> bin(max_deg + 2, 0);
  for (std::size_t d : deg) ++bin[d + 1];
  std::partial_sum(bin.begin(), bin.end(), bin.begin());
  std::vector<VertexId> order(n);
  std::vector<std::size_t> pos(n);
  {
    std::vector<std::size_t> next(bin.begin(), bin.end() - 1);
    for (VertexId v = 0; v < n; ++v) {
      pos[v] = next[deg[v]]++;
      order[pos[v]] = v;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const VertexId v = order[i];
    core[v] = static_cast<Core>(deg[v]);
    for (VertexId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        // Swap u to the front of its bucket, then shrink the bucket.
        const std::size_t du = deg[u];
        const std::size_t pu = pos[u];
        const std::size_t pw = bin[du];
        const VertexId w = order[pw];
        if (u != w) {
          std::swap(order[pu], order[pw]);
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return core;
}

PeelResult peel_with_order(const io::Graph& g) {
  const std::size_t n = g.num_vertices();
  std::vector<std::size_t> deg(n);
  using Entry = std::pair<std::size_t, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (VertexId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    heap.emplace(deg[v], v);
  }

  PeelResult out;
  out.core.resize(n);
  out.removal_order.reserve(n);
  std::vector<bool> removed(n, false);
  std::size_t level = 0;
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (removed[v] || d != deg[v]) continue;  // stale entry
    removed[v] = true;
    level = std::max(level, d);
    out.core[v] = static_cast<Core>(level);
    out.removal_order.push_back(v);
    for (VertexId u : g.neighbors(v)) {
      if (!removed[u]) heap.emplace(--deg[u], u);
    }
  }
  return out;
}

Summary summarize(std::span<const Core> cores) {
  if (cores.empty()) throw std::invalid_argument("summarize: empty core result");
  Summary s;
  double total = 0.0;
  for (Core c : cores) {
    s.k_max = std::max(s.k_max, c);
    total += c;
  }
  s.k_avg = std::round(total / static_cast<double>(cores.size()) * 1000.0) / 1000.0;
  return s;
}

}  // namespace kbsp::oracle
