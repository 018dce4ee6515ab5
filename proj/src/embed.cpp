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

#include "spanembed/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spanembed/bitset.hpp"

namespace spanembed {
namespace {

// Neighborhood rows as bitsets; builds local rows once when the host was
// constructed above its bitset cap.
class HostRows {
 public:
  explicit HostRows(const Graph& g) : g_(g) {
    if (!g.has_bitsets()) {
      local_.reserve(g.n());
      for (Vertex v = 0; v < g.n(); ++v) {
        DynBitset row(g.n());
        for (Vertex u : g.neighbors(v)) row.set(u);
        local_.push_back(std::move(row));
      }
    }
  }

  const DynBitset& row(Vertex v) const {
    return local_.empty() ? g_.neighbor_mask(v) : local_[v];
  }

 private:
  const Graph& g_;
  std::vector<DynBitset> local_;
};

// One Kuhn augmentation attempt from `start`, iterative. `via[d]` records the
// right vertex frame d descended through so the path can be applied on success.
bool kuhn_augment(const std::vector<std::vector<std::uint32_t>>& adj,
                  std::vector<std::int64_t>& match_left,
                  std::vector<std::int64_t>& match_right,
                  std::vector<char>& visited_right, std::size_t start) {
  struct Frame {
    std::size_t left;
    std::size_t idx = 0;
    std::int64_t via = -1;
  };
  std::vector<Frame> stack;
  stack.push_back({start});
  while (!stack.empty()) {
    Frame& fr = stack.back();
    const auto& row = adj[fr.left];
    bool descended = false;
    while (fr.idx < row.size()) {
      std::uint32_t r = row[fr.idx++];
      if (visited_right[r]) continue;
      visited_right[r] = 1;
      if (match_right[r] < 0) {
        // Free right vertex: apply the alternating path back down the stack.
        match_left[fr.left] = static_cast<std::int64_t>(r);
        match_right[r] = static_cast<std::int64_t>(fr.left);
        stack.pop_back();
        while (!stack.empty()) {
          Frame& below = stack.back();
          match_left[below.left] = below.via;
          match_right[below.via] = static_cast<std::int64_t>(below.left);
          stack.pop_back();
        }
        return true;
      }
      fr.via = static_cast<std::int64_t>(r);
      stack.push_back({static_cast<std::size_t>(match_right[r])});
      descended = true;
      break;
    }
    if (!descended && fr.idx >= row.size()) stack.pop_back();
  }
  return false;
}

}  // namespace

void PartialEmbedding::place(Vertex target, Vertex host) {
  if (target >= forward_.size() || host >= reverse_.size())
    throw SpanError("place: id out of range");
  if (forward_[target] != kNoVertex)
    throw SpanError("place: target " + std::to_string(target) +
                    " already placed");
  if (reverse_[host] != kNoVertex)
    throw SpanError("place: host " + std::to_string(host) +
                    " already occupied by target " +
                    std::to_string(reverse_[host]));
  forward_[target] = host;
  reverse_[host] = target;
  ++placed_count_;
}

void PartialEmbedding::unplace(Vertex target) {
  if (target >= forward_.size() || forward_[target] == kNoVertex)
    throw SpanError("unplace: target " + std::to_string(target) +
                    " is not placed");
  reverse_[forward_[target]] = kNoVertex;
  forward_[target] = kNoVertex;
  --placed_count_;
}

std::vector<Vertex> PartialEmbedding::free_hosts() const {
  std::vector<Vertex> out;
  out.reserve(reverse_.size() - placed_count_);
  for (std::size_t v = 0; v < reverse_.size(); ++v)
    if (reverse_[v] == kNoVertex) out.push_back(static_cast<Vertex>(v));
  return out;
}

AuxBipartite aux_bipartite(const Graph& host,
                           std::vector<std::vector<Vertex>> left_sets,
                           std::vector<Vertex> owners, const VertexSubset& u) {
  if (u.universe() != host.n())
    throw SpanError("aux_bipartite: pool universe does not match the host");
  if (owners.size() != left_sets.size())
    throw SpanError("aux_bipartite: owners and left_sets sizes differ");
  AuxBipartite b;
  b.right = u.ids();
  std::vector<std::int64_t> right_pos(host.n(), -1);
  for (std::size_t i = 0; i < b.right.size(); ++i)
    right_pos[b.right[i]] = static_cast<std::int64_t>(i);

  HostRows rows(host);
  DynBitset pool = u.to_mask();
  b.adj.resize(left_sets.size());
  for (std::size_t l = 0; l < left_sets.size(); ++l) {
    const auto& members = left_sets[l];
    if (members.empty())
      throw SpanError("aux_bipartite: empty member set at left index " +
                      std::to_string(l));
    DynBitset inter = pool;
    for (Vertex m : members) {
      if (m >= host.n())
        throw SpanError("aux_bipartite: member id out of range");
      inter.and_into(rows.row(m));
    }
    auto& row = b.adj[l];
    inter.for_each_set([&](std::size_t hv) {
      row.push_back(static_cast<std::uint32_t>(right_pos[hv]));
    });
  }
  b.left_sets = std::move(left_sets);
  b.owners = std::move(owners);
  return b;
}

MatchingResult max_matching(const AuxBipartite& b) {
  const std::size_t left_n = b.adj.size();
  const std::size_t right_n = b.right.size();
  MatchingResult out;
  out.match.assign(left_n, -1);
  std::vector<std::int64_t> match_right(right_n, -1);

  // Greedy seed, then augment the rest.
  for (std::size_t l = 0; l < left_n; ++l) {
    for (std::uint32_t r : b.adj[l]) {
      if (match_right[r] < 0) {
        out.match[l] = static_cast<std::int64_t>(r);
        match_right[r] = static_cast<std::int64_t>(l);
        break;
      }
    }
  }
  std::vector<char> visited(right_n, 0);
  for (std::size_t l = 0; l < left_n; ++l) {
    if (out.match[l] >= 0) continue;
    std::fill(visited.begin(), visited.end(), 0);
    kuhn_augment(b.adj, out.match, match_right, visited, l);
  }
  for (std::size_t l = 0; l < left_n; ++l)
    if (out.match[l] >= 0) ++out.size;
  out.perfect = (out.size == left_n);

  if (!out.perfect) {
    // Alternating reachability from the unmatched left vertices yields a set
    // whose joint neighborhood is strictly smaller than it.
    std::vector<char> seen_left(left_n, 0), seen_right(right_n, 0);
    std::vector<std::size_t> queue;
    for (std::size_t l = 0; l < left_n; ++l) {
      if (out.match[l] < 0) {
        seen_left[l] = 1;
        queue.push_back(l);
      }
    }
    for (std::size_t q = 0; q < queue.size(); ++q) {
      std::size_t l = queue[q];
      for (std::uint32_t r : b.adj[l]) {
        if (seen_right[r]) continue;
        seen_right[r] = 1;
        std::int64_t owner = match_right[r];
        if (owner >= 0 && !seen_left[static_cast<std::size_t>(owner)]) {
          seen_left[static_cast<std::size_t>(owner)] = 1;
          queue.push_back(static_cast<std::size_t>(owner));
        }
      }
    }
    for (std::size_t l = 0; l < left_n; ++l)
      if (seen_left[l]) out.deficient.push_back(l);
  }
  return out;
}

std::size_t auto_layer_count(std::size_t n) {
  if (n < 3) return 1;
  double ln = std::log(static_cast<double>(n));
  double lnln = std::log(ln);
  if (lnln <= 0.0) return 1;
  auto k = static_cast<std::size_t>(std::ceil(2.0 * ln / lnln));
  return std::max<std::size_t>(1, k);
}

Reservoir make_reservoir(std::size_t host_n, std::vector<Vertex> pool,
                         std::size_t k, RandomSource& rng) {
  if (k == 0) throw SpanError("make_reservoir: layer count must be >= 1");
  DynBitset seen(host_n);
  for (Vertex v : pool) {
    if (v >= host_n) throw SpanError("make_reservoir: pool id out of range");
    if (seen.test(v)) throw SpanError("make_reservoir: duplicate pool id");
    seen.set(v);
  }
  for (std::size_t i = pool.size(); i > 1; --i)
    std::swap(pool[i - 1], pool[rng.below(i)]);

  Reservoir res;
  res.host_n = host_n;
  std::size_t per = pool.size() / (k + 1);
  std::size_t w0 = pool.size() - k * per;
  res.layers.resize(k + 1);
  auto it = pool.begin();
  res.layers[0].assign(it, it + static_cast<std::ptrdiff_t>(w0));
  it += static_cast<std::ptrdiff_t>(w0);
  for (std::size_t j = 1; j <= k; ++j) {
    res.layers[j].assign(it, it + static_cast<std::ptrdiff_t>(per));
    it += static_cast<std::ptrdiff_t>(per);
  }
  res.layer_masks.reserve(k + 1);
  for (auto& layer : res.layers) {
    std::sort(layer.begin(), layer.end());
    DynBitset mask(host_n);
    for (Vertex v : layer) mask.set(v);
    res.layer_masks.push_back(std::move(mask));
  }
  res.occupancy.assign(k + 1, 0);
  return res;
}

std::optional<std::vector<Vertex>> embed_copy(
    const Graph& host, const Graph& f,
    const std::vector<std::pair<Vertex, Vertex>>& fixed,
    const DynBitset& allowed, RandomSource& rng, std::size_t node_budget) {
  if (allowed.size() != host.n())
    throw SpanError("embed_copy: allowed mask size does not match the host");
  const std::size_t fn = f.n();
  std::vector<Vertex> map(fn, kNoVertex);
  if (fn == 0) return map;

  DynBitset used(host.n());
  std::vector<char> is_fixed(fn, 0);
  for (const auto& [fv, hv] : fixed) {
    if (fv >= fn || hv >= host.n())
      throw SpanError("embed_copy: fixed pair out of range");
    if (is_fixed[fv]) throw SpanError("embed_copy: duplicate fixed f-vertex");
    if (used.test(hv)) throw SpanError("embed_copy: duplicate fixed host");
    is_fixed[fv] = 1;
    map[fv] = hv;
    used.set(hv);
  }
  // Edges between two fixed vertices are not reachable by the search; they
  // must already hold in the host.
  for (const auto& [fv, hv] : fixed) {
    for (Vertex u : f.neighbors(fv)) {
      if (is_fixed[u] && u > fv && !host.has_edge(hv, map[u]))
        return std::nullopt;
    }
  }

  // Extension order: repeatedly take the unplaced f-vertex with the most
  // already-ordered neighbors, ties by ascending id.
  std::vector<Vertex> order;
  order.reserve(fn - fixed.size());
  std::vector<std::size_t> placed_nbrs(fn, 0);
  std::vector<char> chosen = is_fixed;
  for (const auto& [fv, hv] : fixed) {
    (void)hv;
    for (Vertex u : f.neighbors(fv)) ++placed_nbrs[u];
  }
  for (std::size_t step = fixed.size(); step < fn; ++step) {
    std::size_t best = fn;
    for (std::size_t v = 0; v < fn; ++v) {
      if (chosen[v]) continue;
      if (best == fn || placed_nbrs[v] > placed_nbrs[best]) best = v;
    }
    chosen[best] = 1;
    order.push_back(static_cast<Vertex>(best));
    for (Vertex u : f.neighbors(static_cast<Vertex>(best))) ++placed_nbrs[u];
  }

  HostRows rows(host);
  struct Frame {
    std::vector<Vertex> cands;
    std::size_t next = 0;
  };
  std::vector<Frame> stack(order.size());
  DynBitset scratch(host.n());
  auto build = [&](std::size_t depth) {
    Vertex fv = order[depth];
    bool first = true;
    for (Vertex u : f.neighbors(fv)) {
      if (map[u] == kNoVertex) continue;
      if (first) {
        scratch = rows.row(map[u]);
        first = false;
      } else {
        scratch.and_into(rows.row(map[u]));
      }
    }
    if (first) {
      scratch = allowed;
    } else {
      scratch.and_into(allowed);
    }
    scratch.andnot_into(used);
    Frame& fr = stack[depth];
    fr.cands.clear();
    fr.cands.reserve(scratch.count());
    scratch.for_each_set(
        [&](std::size_t hv) { fr.cands.push_back(static_cast<Vertex>(hv)); });
    fr.next = 0;
  };

  std::size_t nodes = 0;
  std::size_t depth = 0;
  if (!order.empty()) build(0);
  while (true) {
    if (depth == order.size()) return map;
    Frame& fr = stack[depth];
    if (fr.next >= fr.cands.size()) {
      if (depth == 0) return std::nullopt;
      --depth;
      Vertex undone = order[depth];
      used.reset(map[undone]);
      map[undone] = kNoVertex;
      continue;
    }
    if (++nodes > node_budget) return std::nullopt;
    // Lazy Fisher-Yates: randomize only the candidates actually consumed.
    std::size_t pick =
        fr.next + rng.below(static_cast<std::uint64_t>(fr.cands.size() - fr.next));
    std::swap(fr.cands[fr.next], fr.cands[pick]);
    Vertex hv = fr.cands[fr.next++];
    map[order[depth]] = hv;
    used.set(hv);
    ++depth;
    if (depth < order.size()) build(depth);
  }
}

CopySearchResult find_F_matching(const Graph& host, const Graph& f,
                                 std::size_t count, const VertexSubset& allowed,
                                 RandomSource& rng, CopySearchBudget budget) {
  if (allowed.universe() != host.n())
    throw SpanError("find_F_matching: pool universe does not match the host");
  if (count * f.n() > allowed.size())
    throw SpanError("find_F_matching: pool holds " +
                    std::to_string(allowed.size()) + " vertices, need " +
                    std::to_string(count * f.n()));
  CopySearchResult out;
  DynBitset pool = allowed.to_mask();
  for (std::size_t c = 0; c < count; ++c) {
    std::optional<std::vector<Vertex>> copy;
    for (std::size_t a = 0; a < budget.attempts && !copy; ++a)
      copy = embed_copy(host, f, {}, pool, rng, budget.nodes);
    if (!copy) {
      out.failure = Failure{
          "absorber",
          "F-matching exhausted at copy " + std::to_string(c) + " of " +
              std::to_string(count) + " after " +
              std::to_string(budget.attempts) + " attempts",
          {}};
      return out;
    }
    for (Vertex hv : *copy) pool.reset(hv);
    out.copies.push_back(std::move(*copy));
  }
  return out;
}

CopySearchResult find_anchored_copies(
    const Graph& host, const Graph& f, const std::vector<Vertex>& x,
    const std::vector<std::vector<Vertex>>& anchors, const VertexSubset& w,
    RandomSource& rng, CopySearchBudget budget) {
  if (w.universe() != host.n())
    throw SpanError("find_anchored_copies: pool universe mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= f.n())
      throw SpanError("find_anchored_copies: root id out of range");
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      if (x[i] == x[j])
        throw SpanError("find_anchored_copies: duplicate root id");
      if (f.has_edge(x[i], x[j]))
        throw SpanError("find_anchored_copies: roots must be independent");
    }
  }
  DynBitset anchor_seen(host.n());
  for (const auto& tuple : anchors) {
    if (tuple.size() != x.size())
      throw SpanError("find_anchored_copies: anchor tuple arity mismatch");
    for (Vertex hv : tuple) {
      if (hv >= host.n())
        throw SpanError("find_anchored_copies: anchor id out of range");
      if (anchor_seen.test(hv))
        throw SpanError(
            "find_anchored_copies: anchor tuples must be pairwise disjoint");
      anchor_seen.set(hv);
    }
  }
  DynBitset pool = w.to_mask();
  pool.andnot_into(anchor_seen);
  if (anchors.size() * (f.n() - x.size()) > pool.count())
    throw SpanError("find_anchored_copies: pool too small for " +
                    std::to_string(anchors.size()) + " copies");

  CopySearchResult out;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    std::vector<std::pair<Vertex, Vertex>> fixed;
    fixed.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j)
      fixed.emplace_back(x[j], anchors[i][j]);
    std::optional<std::vector<Vertex>> copy;
    for (std::size_t a = 0; a < budget.attempts && !copy; ++a)
      copy = embed_copy(host, f, fixed, pool, rng, budget.nodes);
    if (!copy) {
      std::vector<std::size_t> witness(anchors[i].begin(), anchors[i].end());
      out.failure =
          Failure{"absorber",
                  "anchored copy search exhausted at tuple " +
                      std::to_string(i) + " of " +
                      std::to_string(anchors.size()),
                  std::move(witness)};
      return out;
    }
    for (std::size_t fv = 0; fv < copy->size(); ++fv) {
      bool fixed_v = false;
      for (std::size_t j = 0; j < x.size(); ++j) fixed_v |= (x[j] == fv);
      if (!fixed_v) pool.reset((*copy)[fv]);
    }
    out.copies.push_back(std::move(*copy));
  }
  return out;
}

AnchoredEdgesResult find_anchored_edges(
    const Graph& host,
    const std::vector<std::pair<std::vector<Vertex>, std::vector<Vertex>>>&
        pairs,
    const VertexSubset& w, const VertexSubset& w_prime, std::size_t delta,
    RandomSource& rng, CopySearchBudget budget) {
  AnchoredEdgesResult out;
  const std::size_t t = pairs.size();
  if (t == 0) return out;
  if (delta == 0) throw SpanError("find_anchored_edges: delta must be >= 1");
  if (w.universe() != host.n() || w_prime.universe() != host.n())
    throw SpanError("find_anchored_edges: pool universe mismatch");

  std::vector<std::size_t> load(host.n(), 0);
  for (const auto& [a_side, b_side] : pairs) {
    if (a_side.size() != delta - 1 || b_side.size() != delta - 1)
      throw SpanError("find_anchored_edges: anchor set size must be delta-1");
    for (Vertex hv : a_side) {
      if (hv >= host.n())
        throw SpanError("find_anchored_edges: anchor id out of range");
      ++load[hv];
    }
    for (Vertex hv : b_side) {
      if (hv >= host.n())
        throw SpanError("find_anchored_edges: anchor id out of range");
      ++load[hv];
    }
  }
  for (std::size_t v = 0; v < host.n(); ++v) {
    if (load[v] > delta)
      throw SpanError("find_anchored_edges: host vertex " + std::to_string(v) +
                      " anchors " + std::to_string(load[v]) +
                      " pairs, limit is delta");
  }
  DynBitset pool = w.to_mask();
  pool.or_into(w_prime.to_mask());
  if (2 * t > pool.count())
    throw SpanError("find_anchored_edges: pool holds " +
                    std::to_string(pool.count()) + " vertices, need " +
                    std::to_string(2 * t));

  HostRows rows(host);
  std::vector<DynBitset> cand_a, cand_b;
  cand_a.reserve(t);
  cand_b.reserve(t);
  for (const auto& [a_side, b_side] : pairs) {
    DynBitset ca = pool;
    for (Vertex hv : a_side) ca.and_into(rows.row(hv));
    cand_a.push_back(std::move(ca));
    DynBitset cb = pool;
    for (Vertex hv : b_side) cb.and_into(rows.row(hv));
    cand_b.push_back(std::move(cb));
  }

  std::vector<std::size_t> order(t);
  for (std::size_t i = 0; i < t; ++i) order[i] = i;
  std::size_t stuck = 0;
  std::size_t probes = 0;
  for (std::size_t attempt = 0; attempt < budget.attempts; ++attempt) {
    for (std::size_t i = t; i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    DynBitset free = pool;
    std::vector<std::pair<Vertex, Vertex>> edges(
        t, {kNoVertex, kNoVertex});
    bool ok = true;
    for (std::size_t idx = 0; idx < t && ok; ++idx) {
      std::size_t i = order[idx];
      DynBitset ca = cand_a[i];
      ca.and_into(free);
      std::vector<Vertex> xs;
      xs.reserve(ca.count());
      ca.for_each_set(
          [&](std::size_t hv) { xs.push_back(static_cast<Vertex>(hv)); });
      bool placed = false;
      DynBitset ys(host.n());
      for (std::size_t xi = 0; xi < xs.size() && !placed; ++xi) {
        std::size_t pick = xi + rng.below(xs.size() - xi);
        std::swap(xs[xi], xs[pick]);
        Vertex xv = xs[xi];
        if (++probes > budget.nodes * budget.attempts) {
          ok = false;
          break;
        }
        ys = cand_b[i];
        ys.and_into(free);
        ys.and_into(rows.row(xv));
        if (ys.test(xv)) ys.reset(xv);
        std::size_t c = ys.count();
        if (c == 0) continue;
        Vertex yv = static_cast<Vertex>(ys.nth_set(rng.below(c)));
        edges[i] = {xv, yv};
        free.reset(xv);
        free.reset(yv);
        placed = true;
      }
      if (!placed) {
        stuck = i;
        ok = false;
      }
    }
    if (ok) {
      out.edges = std::move(edges);
      return out;
    }
  }
  std::vector<std::size_t> witness;
  for (Vertex hv : pairs[stuck].first) witness.push_back(hv);
  for (Vertex hv : pairs[stuck].second) witness.push_back(hv);
  out.failure = Failure{"phase2",
                        "anchored edge search exhausted at pair " +
                            std::to_string(stuck) + " of " + std::to_string(t),
                        std::move(witness)};
  return out;
}

namespace {

// Shared layered placement loop: embeds `order` (local ids of `local`) into
// the host, drawing each image uniformly from the first reservoir layer with
// a free common neighbor of the images of the already-placed neighbors.
std::optional<Failure> run_layered_core(const Graph& host, const HostRows& rows,
                                        const Graph& local,
                                        const std::vector<Vertex>& global_of,
                                        const std::vector<Vertex>& order,
                                        const DynBitset& x_mask,
                                        PartialEmbedding& phi, Reservoir& res,
                                        RandomSource& rng) {
  DynBitset free(host.n());
  free.set_all();
  for (std::size_t v = 0; v < host.n(); ++v)
    if (phi.occupied(static_cast<Vertex>(v))) free.reset(v);
  free.andnot_into(x_mask);

  DynBitset cand(host.n());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    Vertex lv = order[pos];
    std::vector<std::size_t> anchor_hosts;
    for (Vertex u : local.neighbors(lv)) {
      Vertex gu = global_of[u];
      if (phi.placed(gu)) anchor_hosts.push_back(phi.image(gu));
    }
    bool placed = false;
    for (std::size_t j = 0; j < res.layer_masks.size() && !placed; ++j) {
      cand = res.layer_masks[j];
      cand.and_into(free);
      for (std::size_t hv : anchor_hosts)
        cand.and_into(rows.row(static_cast<Vertex>(hv)));
      std::size_t c = cand.count();
      if (c == 0) continue;
      auto pick = static_cast<Vertex>(cand.nth_set(rng.below(c)));
      phi.place(global_of[lv], pick);
      free.reset(pick);
      ++res.occupancy[j];
      placed = true;
    }
    if (!placed) {
      std::ostringstream detail;
      detail << "no candidate for target vertex " << global_of[lv]
             << " at position " << pos << " (" << anchor_hosts.size()
             << " anchor images); free per layer:";
      for (std::size_t j = 0; j < res.layer_masks.size(); ++j)
        detail << ' ' << res.layer_masks[j].intersect_count(free);
      return Failure{"phase2", detail.str(), anchor_hosts};
    }
  }
  return std::nullopt;
}

// Checks shared by both embedding front ends; returns the scope or throws.
VertexSubset check_embed_inputs(const Graph& host, const Graph& h,
                                const VertexSubset& s,
                                const PartialEmbedding& phi_prime,
                                const VertexSubset& x,
                                const VertexSubset* active, const char* op) {
  std::string name(op);
  if (s.universe() != h.n())
    throw SpanError(name + ": s universe does not match the target");
  if (x.universe() != host.n())
    throw SpanError(name + ": x universe does not match the host");
  if (phi_prime.target_n() != h.n() || phi_prime.host_n() != host.n())
    throw SpanError(name + ": phi_prime shape mismatch");
  VertexSubset scope =
      active != nullptr ? *active : VertexSubset::all(h.n());
  if (scope.universe() != h.n())
    throw SpanError(name + ": active universe does not match the target");
  for (Vertex v : s.ids()) {
    if (!scope.contains(v))
      throw SpanError(name + ": s is not contained in the active set");
    if (!phi_prime.placed(v))
      throw SpanError(name + ": phi_prime is missing s-vertex " +
                      std::to_string(v));
  }
  if (phi_prime.placed_count() != s.size())
    throw SpanError(name + ": phi_prime must be defined exactly on s");
  return scope;
}

// Capacity gate shared by both front ends: the unplaced part of the scope
// must fit into the free non-X hosts with a gamma n slack. With phi_prime
// defined exactly on s and avoiding X this is the usual
// v(H) <= n - |X| - gamma n condition. Nullopt when it passes.
std::optional<Failure> check_capacity(const VertexSubset& scope,
                                      const VertexSubset& s,
                                      const PartialEmbedding& phi_prime,
                                      std::size_t host_n,
                                      const VertexSubset& x, double gamma) {
  std::size_t required = scope.size() - s.size();
  std::size_t x_free = 0;
  for (Vertex v : x.ids())
    if (!phi_prime.occupied(v)) ++x_free;
  double available = static_cast<double>(host_n) -
                     static_cast<double>(phi_prime.placed_count()) -
                     static_cast<double>(x_free) -
                     gamma * static_cast<double>(host_n);
  if (static_cast<double>(required) <= available) return std::nullopt;
  std::ostringstream detail;
  detail << "capacity: " << required << " vertices to place, only "
         << available << " hosts outside X and the occupied set at slack "
         << gamma;
  return Failure{"phase2", detail.str(), {}};
}

std::vector<std::size_t> globalize(const std::vector<std::size_t>& local_ids,
                                   const std::vector<Vertex>& global_of) {
  std::vector<std::size_t> out;
  out.reserve(local_ids.size());
  for (std::size_t lv : local_ids)
    if (lv < global_of.size()) out.push_back(global_of[lv]);
  return out;
}

}  // namespace

Expected<PartialEmbedding> s_embed(const Graph& host, const Graph& h,
                                   const VertexSubset& s,
                                   const PartialEmbedding& phi_prime,
                                   const VertexSubset& x, Reservoir& res,
                                   std::size_t d, RandomSource& rng,
                                   double gamma, const VertexSubset* active) {
  VertexSubset scope =
      check_embed_inputs(host, h, s, phi_prime, x, active, "s_embed");
  if (auto cap = check_capacity(scope, s, phi_prime, host.n(), x, gamma))
    return *cap;

  InducedSubgraph sub = induced_subgraph(h, scope.ids());
  std::vector<std::int64_t> local_of(h.n(), -1);
  for (std::size_t i = 0; i < sub.global_of.size(); ++i)
    local_of[sub.global_of[i]] = static_cast<std::int64_t>(i);
  std::vector<Vertex> s_local;
  s_local.reserve(s.size());
  for (Vertex v : s.ids()) s_local.push_back(static_cast<Vertex>(local_of[v]));
  VertexSubset s_sub = VertexSubset::of(sub.graph.n(), std::move(s_local));

  auto ordering = degeneracy_ordering_with_anchor(sub.graph, s_sub, d);
  if (!ordering) {
    Failure f = ordering.failure();
    f.phase = "phase2";
    f.detail = "ordering infeasible: " + f.detail;
    f.witness = globalize(f.witness, sub.global_of);
    return f;
  }

  PartialEmbedding phi = phi_prime;
  HostRows rows(host);
  DynBitset x_mask = x.to_mask();
  if (auto fail = run_layered_core(host, rows, sub.graph, sub.global_of,
                                   ordering.value().order, x_mask, phi, res,
                                   rng))
    return *fail;
  return phi;
}

Expected<PartialEmbedding> delta_s_embed(const Graph& host, const Graph& h,
                                         const VertexSubset& s,
                                         const PartialEmbedding& phi_prime,
                                         const VertexSubset& x, Reservoir& res,
                                         std::size_t delta, RandomSource& rng,
                                         double gamma,
                                         const VertexSubset* active) {
  if (delta == 0) throw SpanError("delta_s_embed: delta must be >= 1");
  VertexSubset scope =
      check_embed_inputs(host, h, s, phi_prime, x, active, "delta_s_embed");
  if (auto cap = check_capacity(scope, s, phi_prime, host.n(), x, gamma))
    return *cap;

  InducedSubgraph sub = induced_subgraph(h, scope.ids());
  const std::size_t ln = sub.graph.n();
  if (sub.graph.max_degree() > delta)
    throw SpanError("delta_s_embed: active subgraph exceeds max degree " +
                    std::to_string(delta));
  std::vector<std::int64_t> local_of(h.n(), -1);
  for (std::size_t i = 0; i < sub.global_of.size(); ++i)
    local_of[sub.global_of[i]] = static_cast<std::int64_t>(i);
  DynBitset s_mask(ln);
  for (Vertex v : s.ids()) s_mask.set(static_cast<std::size_t>(local_of[v]));
  for (std::size_t lv = 0; lv < ln; ++lv) {
    if (s_mask.test(lv)) continue;
    std::size_t into_s = 0;
    for (Vertex u : sub.graph.neighbors(static_cast<Vertex>(lv)))
      if (s_mask.test(u)) ++into_s;
    if (into_s > delta - 1)
      throw SpanError("delta_s_embed: vertex " +
                      std::to_string(sub.global_of[lv]) + " has " +
                      std::to_string(into_s) +
                      " neighbors in s, limit is delta-1");
  }

  // Strip one edge from every component of the non-s part whose vertices all
  // meet the degree ceiling; their endpoints rejoin at the reinsert stage.
  std::vector<Vertex> non_s;
  non_s.reserve(ln - s.size());
  for (std::size_t lv = 0; lv < ln; ++lv)
    if (!s_mask.test(lv)) non_s.push_back(static_cast<Vertex>(lv));
  InducedSubgraph ns = induced_subgraph(sub.graph, non_s);
  std::vector<std::pair<Vertex, Vertex>> stripped;
  DynBitset comp_set(ln);
  for (const auto& comp : components(ns.graph)) {
    bool all_at_ceiling = true;
    for (Vertex v : comp) {
      if (sub.graph.degree(ns.global_of[v]) != delta) {
        all_at_ceiling = false;
        break;
      }
    }
    if (!all_at_ceiling) continue;
    comp_set.clear();
    for (Vertex v : comp) comp_set.set(ns.global_of[v]);
    bool found = false;
    for (Vertex v : comp) {
      Vertex u = ns.global_of[v];
      for (Vertex w : sub.graph.neighbors(u)) {
        if (w > u && comp_set.test(w)) {
          stripped.emplace_back(u, w);
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found)
      throw SpanError("delta_s_embed: strip found no internal edge");
  }

  DynBitset keep(ln);
  keep.set_all();
  std::vector<Vertex> s_ext_ids;
  s_ext_ids.reserve(s.size() + 2 * stripped.size());
  for (Vertex v : s.ids())
    s_ext_ids.push_back(static_cast<Vertex>(local_of[v]));
  for (const auto& [a, b] : stripped) {
    keep.reset(a);
    keep.reset(b);
    s_ext_ids.push_back(a);
    s_ext_ids.push_back(b);
  }
  Graph masked = masked_graph(sub.graph, keep);
  VertexSubset s_ext = VertexSubset::of(ln, std::move(s_ext_ids));
  DynBitset s_ext_mask = s_ext.to_mask();
  std::vector<Vertex> seed_ids;
  for (std::size_t lv = 0; lv < ln; ++lv) {
    if (s_ext_mask.test(lv)) continue;
    if (masked.degree(static_cast<Vertex>(lv)) <= delta - 1)
      seed_ids.push_back(static_cast<Vertex>(lv));
  }
  VertexSubset seeds = VertexSubset::of(ln, std::move(seed_ids));

  auto ordering = bfs_layer_ordering(masked, s_ext, seeds);
  if (!ordering) {
    Failure f = ordering.failure();
    f.phase = "phase2";
    f.detail = "order: " + f.detail;
    f.witness = globalize(f.witness, sub.global_of);
    return f;
  }

  PartialEmbedding phi = phi_prime;
  HostRows rows(host);
  DynBitset x_mask = x.to_mask();
  if (auto fail = run_layered_core(host, rows, masked, sub.global_of,
                                   ordering.value().order, x_mask, phi, res,
                                   rng)) {
    fail->detail = "s_embed: " + fail->detail;
    return *fail;
  }

  // Reinsert the stripped pairs through vertex-disjoint anchored host edges.
  if (!stripped.empty()) {
    std::vector<std::pair<std::vector<Vertex>, std::vector<Vertex>>> pairs;
    pairs.reserve(stripped.size());
    for (const auto& [a, b] : stripped) {
      std::vector<Vertex> a_hosts, b_hosts;
      for (Vertex u : sub.graph.neighbors(a)) {
        if (u == b) continue;
        a_hosts.push_back(phi.image(sub.global_of[u]));
      }
      for (Vertex u : sub.graph.neighbors(b)) {
        if (u == a) continue;
        b_hosts.push_back(phi.image(sub.global_of[u]));
      }
      pairs.emplace_back(std::move(a_hosts), std::move(b_hosts));
    }
    DynBitset pool_mask(host.n());
    pool_mask.set_all();
    for (std::size_t v = 0; v < host.n(); ++v)
      if (phi.occupied(static_cast<Vertex>(v))) pool_mask.reset(v);
    pool_mask.andnot_into(x_mask);
    VertexSubset pool = VertexSubset::from_mask(pool_mask);
    VertexSubset empty_pool = VertexSubset::of(host.n(), {});
    auto reins =
        find_anchored_edges(host, pairs, pool, empty_pool, delta, rng);
    if (!reins.ok()) {
      Failure f = *reins.failure;
      f.detail = "reinsert: " + f.detail;
      return f;
    }
    for (std::size_t i = 0; i < stripped.size(); ++i) {
      phi.place(sub.global_of[stripped[i].first], reins.edges[i].first);
      phi.place(sub.global_of[stripped[i].second], reins.edges[i].second);
      for (Vertex hv : {reins.edges[i].first, reins.edges[i].second}) {
        for (std::size_t j = 0; j < res.layer_masks.size(); ++j) {
          if (res.layer_masks[j].test(hv)) {
            ++res.occupancy[j];
            break;
          }
        }
      }
    }
  }
  return phi;
}

EmbedVerify verify_embedding(const Graph& host, const Graph& h,
                             const PartialEmbedding& phi,
                             const VertexSubset* pocket_scope) {
  EmbedVerify out;
  auto fail = [&out](std::string detail) {
    out.pass = false;
    out.detail = std::move(detail);
  };
  if (phi.target_n() != h.n() || phi.host_n() != host.n()) {
    fail("embedding shape does not match the given graphs");
    return out;
  }
  std::vector<char> seen(host.n(), 0);
  for (Vertex v = 0; v < h.n(); ++v) {
    if (!phi.placed(v)) {
      fail("target vertex " + std::to_string(v) + " is unplaced");
      return out;
    }
    Vertex hv = phi.image(v);
    if (seen[hv]) {
      fail("host vertex " + std::to_string(hv) + " hosts two targets");
      return out;
    }
    seen[hv] = 1;
  }
  for (const auto& [u, v] : h.edges()) {
    if (pocket_scope != nullptr && pocket_scope->contains(u) &&
        pocket_scope->contains(v))
      continue;
    if (!host.has_edge(phi.image(u), phi.image(v))) {
      fail("target edge (" + std::to_string(u) + "," + std::to_string(v) +
           ") maps to host non-edge (" + std::to_string(phi.image(u)) + "," +
           std::to_string(phi.image(v)) + ")");
      return out;
    }
  }
  return out;
}

}  // namespace spanembed
