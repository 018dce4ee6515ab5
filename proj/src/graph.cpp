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

#include "spanembed/graph.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace spanembed {

namespace {

std::string pair_str(Vertex u, Vertex v) {
  return "(" + std::to_string(u) + ", " + std::to_string(v) + ")";
}

}  // namespace

Graph Graph::build(std::size_t n, const std::vector<Edge>& edges,
                   std::size_t bitset_cap) {
  std::set<Edge> seen;
  std::vector<Edge> normalized;
  normalized.reserve(edges.size());
  for (const Edge& e : edges) {
    Vertex u = e.first, v = e.second;
    if (u >= n || v >= n)
      throw SpanError("edge endpoint out of range: " + pair_str(u, v));
    if (u == v) throw SpanError("self-loop: " + pair_str(u, v));
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw SpanError("duplicate edge: " + pair_str(u, v));
    normalized.push_back({u, v});
  }
  return finish(n, std::move(normalized), bitset_cap);
}

Graph Graph::from_unchecked(std::size_t n, std::vector<Edge> edges,
                            std::size_t bitset_cap) {
  for (Edge& e : edges) {
    assert(e.first < n && e.second < n && e.first != e.second);
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  return finish(n, std::move(edges), bitset_cap);
}

Graph Graph::finish(std::size_t n, std::vector<Edge> edges,
                    std::size_t bitset_cap) {
  std::sort(edges.begin(), edges.end());
  assert(std::adjacent_find(edges.begin(), edges.end()) == edges.end());
  Graph g;
  g.n_ = n;
  g.adjacency_.resize(n);
  for (const Edge& e : edges) {
    g.adjacency_[e.first].push_back(e.second);
    g.adjacency_[e.second].push_back(e.first);
  }
  for (auto& list : g.adjacency_) std::sort(list.begin(), list.end());
  if (n <= bitset_cap) {
    g.rows_.assign(n, DynBitset(n));
    for (const Edge& e : edges) {
      g.rows_[e.first].set(e.second);
      g.rows_[e.second].set(e.first);
    }
  }
  g.edges_ = std::move(edges);
  return g;
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  assert(u < n_ && v < n_);
  if (has_bitsets()) return rows_[u].test(v);
  const auto& list = adjacency_[u].size() <= adjacency_[v].size()
                         ? adjacency_[u]
                         : adjacency_[v];
  Vertex target = adjacency_[u].size() <= adjacency_[v].size() ? v : u;
  return std::binary_search(list.begin(), list.end(), target);
}

std::size_t Graph::max_degree() const {
  std::size_t best = 0;
  for (const auto& list : adjacency_) best = std::max(best, list.size());
  return best;
}

std::size_t Graph::degree_into(Vertex v, const DynBitset& set) const {
  assert(set.size() == n_);
  if (has_bitsets()) return rows_[v].intersect_count(set);
  std::size_t count = 0;
  for (Vertex u : adjacency_[v])
    if (set.test(u)) ++count;
  return count;
}

VertexSubset VertexSubset::of(std::size_t universe, std::vector<Vertex> ids) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= universe)
      throw SpanError("subset member out of range: " + std::to_string(ids[i]));
    if (i > 0 && ids[i] == ids[i - 1])
      throw SpanError("duplicate subset member: " + std::to_string(ids[i]));
  }
  VertexSubset s;
  s.universe_ = universe;
  s.ids_ = std::move(ids);
  return s;
}

VertexSubset VertexSubset::all(std::size_t universe) {
  std::vector<Vertex> ids(universe);
  for (std::size_t i = 0; i < universe; ++i) ids[i] = static_cast<Vertex>(i);
  VertexSubset s;
  s.universe_ = universe;
  s.ids_ = std::move(ids);
  return s;
}

VertexSubset VertexSubset::from_mask(const DynBitset& mask) {
  VertexSubset s;
  s.universe_ = mask.size();
  mask.for_each_set([&](std::size_t i) {
    s.ids_.push_back(static_cast<Vertex>(i));
  });
  return s;
}

bool VertexSubset::contains(Vertex v) const {
  return std::binary_search(ids_.begin(), ids_.end(), v);
}

DynBitset VertexSubset::to_mask() const {
  DynBitset mask(universe_);
  for (Vertex v : ids_) mask.set(v);
  return mask;
}

std::optional<std::size_t> bfs_distance(const Graph& g, Vertex u, Vertex v) {
  if (u >= g.n() || v >= g.n())
    throw SpanError("bfs_distance: vertex out of range");
  auto dist = bfs_distances(g, {u});
  if (dist[v] == kUnreached) return std::nullopt;
  return dist[v];
}

std::vector<std::size_t> bfs_distances(const Graph& g,
                                       const std::vector<Vertex>& sources) {
  std::vector<std::size_t> dist(g.n(), kUnreached);
  std::deque<Vertex> queue;
  for (Vertex s : sources) {
    if (s >= g.n()) throw SpanError("bfs source out of range");
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

VertexSubset distance_k_independent_set(const Graph& h, const VertexSubset& s,
                                        std::size_t k) {
  DynBitset alive = s.to_mask();
  std::vector<Vertex> chosen;
  // Bounded-depth BFS from each chosen vertex discards everything within
  // distance k, so survivors sit at distance >= k+1.
  std::vector<std::size_t> depth(h.n(), kUnreached);
  std::vector<Vertex> touched;
  for (Vertex v : s.ids()) {
    if (!alive.test(v)) continue;
    chosen.push_back(v);
    touched.clear();
    depth[v] = 0;
    touched.push_back(v);
    std::deque<Vertex> queue{v};
    alive.reset(v);
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      if (depth[x] == k) continue;
      for (Vertex w : h.neighbors(x)) {
        if (depth[w] != kUnreached) continue;
        depth[w] = depth[x] + 1;
        touched.push_back(w);
        if (alive.test(w)) alive.reset(w);
        queue.push_back(w);
      }
    }
    for (Vertex x : touched) depth[x] = kUnreached;
  }
  return VertexSubset::of(h.n(), std::move(chosen));
}

Expected<OrderingResult> degeneracy_ordering_with_anchor(
    const Graph& h, const VertexSubset& s, std::size_t d) {
  DynBitset in_s = s.to_mask();
  DynBitset remaining(h.n());
  // Degree of each remaining vertex into S ∪ remaining.
  std::vector<std::size_t> deg(h.n(), 0);
  std::set<std::pair<std::size_t, Vertex>> queue;
  std::size_t m = 0;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (in_s.test(v)) continue;
    remaining.set(v);
    ++m;
  }
  for (Vertex v = 0; v < h.n(); ++v) {
    if (!remaining.test(v)) continue;
    deg[v] = h.degree(v);  // neighbors are all in S ∪ remaining initially
    queue.insert({deg[v], v});
  }
  std::vector<Vertex> order(m);
  std::vector<std::size_t> back(m);
  for (std::size_t pos = m; pos-- > 0;) {
    auto it = queue.begin();
    if (it->first > d) {
      // Every remaining vertex exceeds d into S ∪ remaining: certified stuck.
      Failure f;
      f.phase = "ordering";
      f.detail = "no vertex with back-degree <= " + std::to_string(d);
      f.witness = remaining.collect();
      return f;
    }
    Vertex v = it->second;
    queue.erase(it);
    remaining.reset(v);
    order[pos] = v;
    back[pos] = deg[v];
    for (Vertex w : h.neighbors(v)) {
      if (!remaining.test(w)) continue;
      queue.erase({deg[w], w});
      --deg[w];
      queue.insert({deg[w], w});
    }
  }
  OrderingResult result;
  result.order = std::move(order);
  result.back_degree = std::move(back);
  for (std::size_t b : result.back_degree)
    result.back_degree_bound = std::max(result.back_degree_bound, b);
  result.layer.assign(m, 0);
  result.layer_count = m == 0 ? 0 : 1;
  return result;
}

Expected<OrderingResult> bfs_layer_ordering(const Graph& h,
                                            const VertexSubset& s,
                                            const VertexSubset& seeds) {
  DynBitset in_s = s.to_mask();
  for (Vertex v : seeds.ids()) {
    if (in_s.test(v)) throw SpanError("seed vertex lies in S");
  }
  DynBitset active(h.n());
  std::size_t active_count = 0;
  for (Vertex v = 0; v < h.n(); ++v) {
    if (!in_s.test(v)) {
      active.set(v);
      ++active_count;
    }
  }
  // Max degree within H∖S decides which stranded vertices may start a layer.
  std::size_t delta = 0;
  for (Vertex v = 0; v < h.n(); ++v)
    if (active.test(v)) delta = std::max(delta, h.degree_into(v, active));

  std::vector<std::size_t> layer_of(h.n(), kUnreached);
  std::vector<std::vector<Vertex>> layers;
  std::vector<Vertex> frontier;
  for (Vertex v : seeds.ids()) {
    layer_of[v] = 0;
    frontier.push_back(v);
  }
  std::size_t placed = 0;
  for (;;) {
    while (!frontier.empty()) {
      layers.push_back(frontier);
      placed += frontier.size();
      std::vector<Vertex> next;
      std::size_t j = layers.size();
      for (Vertex v : frontier) {
        for (Vertex w : h.neighbors(v)) {
          if (!active.test(w) || layer_of[w] != kUnreached) continue;
          layer_of[w] = j;
          next.push_back(w);
        }
      }
      std::sort(next.begin(), next.end());
      frontier = std::move(next);
    }
    if (placed == active_count) break;
    // Stranded components: restart layer 0 growth at non-maximum-degree
    // vertices, which need no later neighbor.
    std::vector<Vertex> starters;
    DynBitset unreached(h.n());
    for (Vertex v = 0; v < h.n(); ++v)
      if (active.test(v) && layer_of[v] == kUnreached) unreached.set(v);
    unreached.for_each_set([&](std::size_t v) {
      if (h.degree_into(static_cast<Vertex>(v), active) < delta)
        starters.push_back(static_cast<Vertex>(v));
    });
    if (starters.empty()) {
      Failure f;
      f.phase = "ordering";
      f.detail = "component unreachable from seeds with no low-degree vertex";
      f.witness = unreached.collect();
      return f;
    }
    // Starters join D_0 so they also sit at the end of the emitted order.
    if (layers.empty()) layers.emplace_back();
    for (Vertex v : starters) {
      layer_of[v] = 0;
      layers[0].push_back(v);
    }
    placed += starters.size();
    std::sort(layers[0].begin(), layers[0].end());
    std::vector<Vertex> next;
    for (Vertex v : starters) {
      for (Vertex w : h.neighbors(v)) {
        if (!active.test(w) || layer_of[w] != kUnreached) continue;
        layer_of[w] = layers.size();
        next.push_back(w);
      }
    }
    std::sort(next.begin(), next.end());
    frontier = std::move(next);
    if (frontier.empty() && placed == active_count) break;
  }

  OrderingResult result;
  result.layer_count = layers.size();
  result.order.reserve(active_count);
  result.layer.reserve(active_count);
  for (std::size_t j = layers.size(); j-- > 0;) {
    for (Vertex v : layers[j]) {
      result.order.push_back(v);
      result.layer.push_back(j);
    }
  }
  // Replay to record back-degrees into S ∪ earlier.
  DynBitset placed_mask = s.to_mask();
  result.back_degree.reserve(active_count);
  for (Vertex v : result.order) {
    std::size_t b = h.degree_into(v, placed_mask);
    result.back_degree.push_back(b);
    result.back_degree_bound = std::max(result.back_degree_bound, b);
    placed_mask.set(v);
  }
  return result;
}

Graph masked_graph(const Graph& g, const DynBitset& keep) {
  assert(keep.size() == g.n());
  std::vector<Edge> edges;
  for (const Edge& e : g.edges())
    if (keep.test(e.first) && keep.test(e.second)) edges.push_back(e);
  return Graph::from_unchecked(g.n(), std::move(edges));
}

InducedSubgraph induced_subgraph(const Graph& g,
                                 const std::vector<Vertex>& vertices) {
  std::vector<Vertex> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  assert(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  std::vector<Vertex> local_of(g.n(), static_cast<Vertex>(-1));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    local_of[sorted[i]] = static_cast<Vertex>(i);
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    Vertex a = local_of[e.first], b = local_of[e.second];
    if (a != static_cast<Vertex>(-1) && b != static_cast<Vertex>(-1))
      edges.push_back({a, b});
  }
  InducedSubgraph out;
  out.graph = Graph::from_unchecked(sorted.size(), std::move(edges));
  out.global_of = std::move(sorted);
  return out;
}

std::vector<std::vector<Vertex>> components(const Graph& g) {
  std::vector<std::vector<Vertex>> out;
  std::vector<bool> seen(g.n(), false);
  for (Vertex v = 0; v < g.n(); ++v) {
    if (seen[v]) continue;
    std::vector<Vertex> comp;
    std::deque<Vertex> queue{v};
    seen[v] = true;
    while (!queue.empty()) {
      Vertex x = queue.front();
      queue.pop_front();
      comp.push_back(x);
      for (Vertex w : g.neighbors(x)) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Graph graph_union(const Graph& a, const Graph& b) {
  if (a.n() != b.n()) throw SpanError("graph_union: vertex counts differ");
  std::vector<Edge> edges = a.edges();
  const auto& second = b.edges();
  edges.insert(edges.end(), second.begin(), second.end());
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_unchecked(a.n(), std::move(edges));
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  };
  if (!next_line()) throw SpanError("edge list: missing header line");
  std::istringstream header(line);
  long long n = -1, m = -1;
  std::string extra;
  if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0)
    throw SpanError("edge list line " + std::to_string(line_no) +
                    ": expected header `n m`");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<Edge> seen;
  for (long long i = 0; i < m; ++i) {
    if (!next_line())
      throw SpanError("edge list: expected " + std::to_string(m) +
                      " edges, got " + std::to_string(i));
    std::istringstream row(line);
    long long u = -1, v = -1;
    if (!(row >> u >> v) || (row >> extra))
      throw SpanError("edge list line " + std::to_string(line_no) +
                      ": expected `u v`");
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw SpanError("edge list line " + std::to_string(line_no) +
                      ": endpoint out of range");
    if (u >= v)
      throw SpanError("edge list line " + std::to_string(line_no) +
                      ": requires u < v");
    Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
    if (!seen.insert(e).second)
      throw SpanError("edge list line " + std::to_string(line_no) +
                      ": duplicate edge");
    edges.push_back(e);
  }
  if (next_line())
    throw SpanError("edge list line " + std::to_string(line_no) +
                    ": trailing content");
  return Graph::build(static_cast<std::size_t>(n), edges);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpanError("cannot open " + path);
  return read_edge_list(in);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.first << ' ' << e.second << '\n';
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SpanError("cannot open " + path);
  write_edge_list(g, out);
  if (!out) throw SpanError("write failed: " + path);
}

}  // namespace spanembed
