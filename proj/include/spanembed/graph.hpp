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

#ifndef SPANEMBED_GRAPH_HPP_
#define SPANEMBED_GRAPH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spanembed/bitset.hpp"
#include "spanembed/errors.hpp"

namespace spanembed {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

// Simple undirected graph, immutable after construction. Adjacency is kept
// as sorted neighbor lists and, when n <= bitset_cap, additionally as one
// bitset row per vertex; common-neighborhood queries in the embedding hot
// path run on the bitset rows.
class Graph {
 public:
  static constexpr std::size_t kDefaultBitsetCap = 4096;

  Graph() = default;

  // Validates: endpoints in range, no self-loops, no duplicates. Throws
  // SpanError naming the offending pair.
  static Graph build(std::size_t n, const std::vector<Edge>& edges,
                     std::size_t bitset_cap = kDefaultBitsetCap);

  // Trusted path for generated edge sets (samplers, gadget builders).
  // Precondition (asserted, not checked in release): valid simple edges.
  static Graph from_unchecked(std::size_t n, std::vector<Edge> edges,
                              std::size_t bitset_cap = kDefaultBitsetCap);

  std::size_t n() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  // Sorted list of (u, v) pairs with u < v.
  const std::vector<Edge>& edges() const { return edges_; }

  std::size_t degree(Vertex v) const { return adjacency_[v].size(); }
  const std::vector<Vertex>& neighbors(Vertex v) const {
    return adjacency_[v];
  }

  bool has_edge(Vertex u, Vertex v) const;
  std::size_t max_degree() const;

  bool has_bitsets() const { return !rows_.empty(); }
  const DynBitset& neighbor_mask(Vertex v) const { return rows_[v]; }

  // |N(v) ∩ set| for a caller-supplied mask of size n.
  std::size_t degree_into(Vertex v, const DynBitset& set) const;

 private:
  static Graph finish(std::size_t n, std::vector<Edge> edges,
                      std::size_t bitset_cap);

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<DynBitset> rows_;
};

// Distinct vertex ids within a universe of fixed size. Ids are kept sorted.
class VertexSubset {
 public:
  VertexSubset() = default;

  // Validates range and distinctness; sorts. Throws SpanError on violation.
  static VertexSubset of(std::size_t universe, std::vector<Vertex> ids);
  static VertexSubset all(std::size_t universe);
  static VertexSubset from_mask(const DynBitset& mask);

  std::size_t universe() const { return universe_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::vector<Vertex>& ids() const { return ids_; }

  bool contains(Vertex v) const;
  DynBitset to_mask() const;

 private:
  std::size_t universe_ = 0;
  std::vector<Vertex> ids_;
};

// Ordering of a vertex set together with the per-position back-degree
// (neighbors among S ∪ earlier positions) observed when it was built, and
// the BFS layer structure when one exists. For non-layered orderings the
// whole sequence is a single layer.
struct OrderingResult {
  std::vector<Vertex> order;
  std::vector<std::size_t> back_degree;   // parallel to order
  std::size_t back_degree_bound = 0;      // max over positions
  std::vector<std::size_t> layer;         // parallel to order
  std::size_t layer_count = 0;
};

// Exact shortest-path edge count, or nullopt when v is unreachable from u.
std::optional<std::size_t> bfs_distance(const Graph& g, Vertex u, Vertex v);

// Distance from the nearest source per vertex; kUnreached where none.
inline constexpr std::size_t kUnreached = static_cast<std::size_t>(-1);
std::vector<std::size_t> bfs_distances(const Graph& g,
                                       const std::vector<Vertex>& sources);

// Greedy over ascending ids: keep v, discard every member at distance <= k
// from it. Survivors are pairwise at distance >= k (in fact >= k+1) and at
// least ⌈|S|/∆^{k+1}⌉ many when ∆(H) >= 2.
VertexSubset distance_k_independent_set(const Graph& h, const VertexSubset& s,
                                        std::size_t k);

// Ordering of V(H)∖S such that every vertex has at most d neighbors among
// S ∪ earlier, built by min-back-degree peeling from the last position
// (ties by ascending id). On infeasibility the Failure witness is a vertex
// set in which every member has > d neighbors inside S ∪ witness.
Expected<OrderingResult> degeneracy_ordering_with_anchor(const Graph& h,
                                                         const VertexSubset& s,
                                                         std::size_t d);

// BFS layers D_0 = seeds, D_j = new neighbors of D_{j-1}, emitted in reverse
// (D_{ℓ-1} first), so every vertex outside D_0 has a neighbor at a strictly
// later position. Components of H∖S not reached from the seeds are started
// at their vertices of non-maximum degree; a component with none is
// reported as a Failure carrying the component.
Expected<OrderingResult> bfs_layer_ordering(const Graph& h,
                                            const VertexSubset& s,
                                            const VertexSubset& seeds);

// Same vertex ids, edges restricted to those with both endpoints in keep.
Graph masked_graph(const Graph& g, const DynBitset& keep);

// Reindexed subgraph on the given vertices (sorted); global_of maps local
// ids back.
struct InducedSubgraph {
  Graph graph;
  std::vector<Vertex> global_of;
};
InducedSubgraph induced_subgraph(const Graph& g,
                                 const std::vector<Vertex>& vertices);

// Connected components, each sorted ascending; components ordered by their
// smallest vertex.
std::vector<std::vector<Vertex>> components(const Graph& g);

// Union of two graphs on the same vertex set.
Graph graph_union(const Graph& a, const Graph& b);

// Edge-list text format: line 1 "n m", then m lines "u v" with 0-indexed
// u < v. The reader rejects malformed input naming the line number.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(const Graph& g, std::ostream& out);
void write_edge_list_file(const Graph& g, const std::string& path);

}  // namespace spanembed

#endif  // SPANEMBED_GRAPH_HPP_
