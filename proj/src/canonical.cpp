// Copyright 2026 The spanembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "spanembed/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

namespace spanembed {

namespace {

// Dense re-ranking of arbitrary comparable keys, order-preserving.
template <typename Key>
std::vector<int> rank_colors(const std::vector<Key>& keys) {
  std::map<Key, int> ranks;
  for (const Key& k : keys) ranks.emplace(k, 0);
  int next = 0;
  for (auto& entry : ranks) entry.second = next++;
  std::vector<int> out(keys.size());
  for (std::size_t v = 0; v < keys.size(); ++v) out[v] = ranks[keys[v]];
  return out;
}

// 1-WL refinement: repeatedly append the sorted neighbor-color multiset to
// each vertex color until the partition stabilizes. Order of initial colors
// is preserved, so the root (alone at the smallest color) stays first.
std::vector<int> refine(const Graph& g, std::vector<int> color) {
  for (;;) {
    std::vector<std::pair<int, std::vector<int>>> sig(g.n());
    for (Vertex v = 0; v < g.n(); ++v) {
      sig[v].first = color[v];
      for (Vertex w : g.neighbors(v)) sig[v].second.push_back(color[w]);
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    std::vector<int> next = rank_colors(sig);
    if (next == color) return color;
    color = std::move(next);
  }
}

std::string code_for(const Graph& g, const std::vector<int>& position_of) {
  std::string code;
  code.push_back(static_cast<char>(g.n()));
  std::vector<std::uint32_t> rows(g.n(), 0);
  for (const Edge& e : g.edges()) {
    int a = position_of[e.first], b = position_of[e.second];
    rows[a] |= std::uint32_t{1} << b;
    rows[b] |= std::uint32_t{1} << a;
  }
  for (std::uint32_t row : rows)
    for (int byte = 0; byte < 4; ++byte)
      code.push_back(static_cast<char>((row >> (8 * byte)) & 0xff));
  return code;
}

struct Search {
  const Graph& g;
  std::string best_code;
  std::vector<int> best_position;

  void descend(std::vector<int> color) {
    color = refine(g, color);
    // First cell with more than one member decides the branch set.
    std::vector<int> cell_size(g.n(), 0);
    for (int c : color) ++cell_size[c];
    int target = -1;
    for (Vertex v = 0; v < g.n(); ++v) {
      if (cell_size[color[v]] > 1 && (target == -1 || color[v] < target))
        target = color[v];
    }
    if (target == -1) {
      std::string code = code_for(g, color);
      if (best_code.empty() || code < best_code) {
        best_code = std::move(code);
        best_position = color;
      }
      return;
    }
    for (Vertex v = 0; v < g.n(); ++v) {
      if (color[v] != target) continue;
      std::vector<int> split(g.n());
      for (Vertex w = 0; w < g.n(); ++w) split[w] = 2 * color[w] + 1;
      split[v] = 2 * color[v];  // v alone, ordered before its old cellmates
      descend(rank_colors(split));
    }
  }
};

}  // namespace

CanonicalForm canonical_rooted_form(const Graph& h, Vertex root) {
  if (h.n() > 32)
    throw SpanError("canonical_rooted_form: more than 32 vertices");
  if (root >= h.n()) throw SpanError("canonical_rooted_form: bad root");
  if (h.n() == 0) throw SpanError("canonical_rooted_form: empty graph");

  auto dist = bfs_distances(h, {root});
  std::vector<std::pair<std::size_t, std::size_t>> keys(h.n());
  for (Vertex v = 0; v < h.n(); ++v) {
    std::size_t d = dist[v] == kUnreached ? h.n() : dist[v];
    keys[v] = {d, h.degree(v)};
  }
  Search search{h, {}, {}};
  search.descend(rank_colors(keys));

  CanonicalForm out;
  out.code = std::move(search.best_code);
  out.position_of.resize(h.n());
  out.vertex_at.resize(h.n());
  for (Vertex v = 0; v < h.n(); ++v) {
    auto pos = static_cast<Vertex>(search.best_position[v]);
    out.position_of[v] = pos;
    out.vertex_at[pos] = v;
  }
  return out;
}

std::vector<Vertex> compose_iso(const CanonicalForm& from,
                                const CanonicalForm& to) {
  if (from.code != to.code)
    throw SpanError("compose_iso: canonical codes differ");
  std::vector<Vertex> map(from.position_of.size());
  for (std::size_t v = 0; v < map.size(); ++v)
    map[v] = to.vertex_at[from.position_of[v]];
  return map;
}

}  // namespace spanembed
