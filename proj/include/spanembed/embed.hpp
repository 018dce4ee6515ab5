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

#ifndef SPANEMBED_EMBED_HPP_
#define SPANEMBED_EMBED_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spanembed/errors.hpp"
#include "spanembed/graph.hpp"
#include "spanembed/rng.hpp"

namespace spanembed {

inline constexpr Vertex kNoVertex = static_cast<Vertex>(-1);

// Injective partial map target vertex -> host vertex with the reverse
// occupancy view kept in lockstep.
class PartialEmbedding {
 public:
  PartialEmbedding() = default;
  PartialEmbedding(std::size_t target_n, std::size_t host_n)
      : forward_(target_n, kNoVertex), reverse_(host_n, kNoVertex) {}

  std::size_t target_n() const { return forward_.size(); }
  std::size_t host_n() const { return reverse_.size(); }
  std::size_t placed_count() const { return placed_count_; }

  bool placed(Vertex target) const { return forward_[target] != kNoVertex; }
  bool occupied(Vertex host) const { return reverse_[host] != kNoVertex; }
  Vertex image(Vertex target) const { return forward_[target]; }
  // Target vertex occupying `host`, or kNoVertex.
  Vertex preimage(Vertex host) const { return reverse_[host]; }

  // Throws SpanError when the target is already placed or the host occupied.
  void place(Vertex target, Vertex host);
  void unplace(Vertex target);

  const std::vector<Vertex>& forward() const { return forward_; }
  std::vector<Vertex> free_hosts() const;  // ascending unoccupied host ids

 private:
  std::vector<Vertex> forward_;
  std::vector<Vertex> reverse_;
  std::size_t placed_count_ = 0;
};

// Bipartite graph between a family of host vertex sets and a pool of host
// vertices, with an edge exactly when the set lies inside the vertex's host
// neighborhood.
struct AuxBipartite {
  std::vector<std::vector<Vertex>> left_sets;
  std::vector<Vertex> owners;  // caller labels, parallel to left_sets
  std::vector<Vertex> right;   // sorted host ids
  // adj[l] = indices into `right`, sorted.
  std::vector<std::vector<std::uint32_t>> adj;
};

// Throws SpanError on an empty member set or out-of-range ids.
AuxBipartite aux_bipartite(const Graph& host,
                           std::vector<std::vector<Vertex>> left_sets,
                           std::vector<Vertex> owners, const VertexSubset& u);

struct MatchingResult {
  // match[l] = index into aux.right, or -1 when l is unmatched.
  std::vector<std::int64_t> match;
  std::size_t size = 0;
  bool perfect = false;  // every left set matched
  // When not perfect: left indices whose joint neighborhood is smaller than
  // they are (a Hall violation certificate).
  std::vector<std::size_t> deficient;
};

MatchingResult max_matching(const AuxBipartite& b);

// Layered reservoir: layers[0] is W_0, the rest are the numbered layers;
// occupancy[j] counts embedded vertices placed into layer j.
struct Reservoir {
  std::size_t host_n = 0;
  std::vector<std::vector<Vertex>> layers;
  std::vector<DynBitset> layer_masks;
  std::vector<std::size_t> occupancy;
};

// k = max(1, ceil(2 ln n / ln ln n)).
std::size_t auto_layer_count(std::size_t n);

// Random equipartition leaning on W_0: layers 1..k get |pool|/(k+1) vertices
// each, W_0 the remainder.
Reservoir make_reservoir(std::size_t host_n, std::vector<Vertex> pool,
                         std::size_t k, RandomSource& rng);

// Search knobs for the randomized copy searches.
struct CopySearchBudget {
  std::size_t attempts = 25;  // restarts per copy
  std::size_t nodes = 50000;  // placement attempts per restart
};

// One randomized backtracking search for a copy of `f` in the host. `fixed`
// pre-assigns f-vertices to host vertices (anchors); the rest draw from
// `allowed`. Returns the full f-vertex -> host map, or nullopt when the node
// budget runs out.
std::optional<std::vector<Vertex>> embed_copy(
    const Graph& host, const Graph& f,
    const std::vector<std::pair<Vertex, Vertex>>& fixed,
    const DynBitset& allowed, RandomSource& rng, std::size_t node_budget);

struct CopySearchResult {
  // copies[i][fv] = host vertex playing f-vertex fv in copy i.
  std::vector<std::vector<Vertex>> copies;
  std::optional<Failure> failure;  // set when the budget ran out
  bool ok() const { return !failure.has_value(); }
};

// `count` pairwise vertex-disjoint copies of f inside `allowed`. On budget
// exhaustion the copies found so far are returned alongside the failure.
CopySearchResult find_F_matching(const Graph& host, const Graph& f,
                                 std::size_t count, const VertexSubset& allowed,
                                 RandomSource& rng, CopySearchBudget budget = {});

// One copy of f per anchor tuple, mapping x[j] to anchors[i][j], internal
// vertices inside w and pairwise disjoint across copies. Pre (throws):
// x independent in f; anchor tuples pairwise disjoint.
CopySearchResult find_anchored_copies(const Graph& host, const Graph& f,
                                      const std::vector<Vertex>& x,
                                      const std::vector<std::vector<Vertex>>& anchors,
                                      const VertexSubset& w, RandomSource& rng,
                                      CopySearchBudget budget = {});

struct AnchoredEdgesResult {
  // Oriented: edges[i].first hosts the A_i side, .second the B_i side.
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::optional<Failure> failure;
  bool ok() const { return !failure.has_value(); }
};

// Vertex-disjoint host edges x_i y_i inside w u w_prime with A_i inside
// N(x_i) and B_i inside N(y_i). Pre (throws): |A_i| = |B_i| = delta - 1;
// 2t <= |w u w_prime|; no host vertex in more than delta pairs.
AnchoredEdgesResult find_anchored_edges(
    const Graph& host,
    const std::vector<std::pair<std::vector<Vertex>, std::vector<Vertex>>>& pairs,
    const VertexSubset& w, const VertexSubset& w_prime, std::size_t delta,
    RandomSource& rng, CopySearchBudget budget = {});

// Layered S-embedding: extends phi_prime (defined exactly on s) over the
// remaining vertices of `active` (all of h when null), drawing each vertex
// uniformly from the first reservoir layer holding a free common neighbor
// of its already-placed neighbors. Every h-edge outside h[s] with both ends
// in scope is realized in the host. X is never used. Failures carry the
// stuck position, its anchor set, and per-layer free counts.
Expected<PartialEmbedding> s_embed(const Graph& host, const Graph& h,
                                   const VertexSubset& s,
                                   const PartialEmbedding& phi_prime,
                                   const VertexSubset& x, Reservoir& res,
                                   std::size_t d, RandomSource& rng,
                                   double gamma = 0.05,
                                   const VertexSubset* active = nullptr);

// Max-degree variant: strips one edge per all-delta-degree component of
// h[active] - s, embeds the rest via reversed BFS layers with back-degree
// <= delta - 1, then reinserts the stripped pairs through anchored host
// edges. Failure details are prefixed strip | order | s_embed | reinsert.
Expected<PartialEmbedding> delta_s_embed(const Graph& host, const Graph& h,
                                         const VertexSubset& s,
                                         const PartialEmbedding& phi_prime,
                                         const VertexSubset& x, Reservoir& res,
                                         std::size_t delta, RandomSource& rng,
                                         double gamma = 0.05,
                                         const VertexSubset* active = nullptr);

struct EmbedVerify {
  bool pass = true;
  std::string detail;
};

// Injectivity, totality over the scope, and edge preservation; edges with
// both endpoints inside `pocket_scope` are exempt when it is given.
EmbedVerify verify_embedding(const Graph& host, const Graph& h,
                             const PartialEmbedding& phi,
                             const VertexSubset* pocket_scope = nullptr);

}  // namespace spanembed

#endif  // SPANEMBED_EMBED_HPP_
