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

#include "spanembed/density.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <optional>
#include <utility>

#include "spanembed/maxflow.hpp"

namespace spanembed {

namespace {

struct RatioResult {
  Rational value;
  std::vector<Vertex> witness;  // sorted
};

// a < b as sorted id sequences, working on membership masks.
bool mask_lex_less(std::uint32_t a, std::uint32_t b) {
  if (a == b) return false;
  int t = std::countr_zero(a ^ b);
  bool a_owns = (a >> t) & 1;
  std::uint32_t non_owner = a_owns ? b : a;
  // A strict prefix precedes; otherwise the owner of the smallest
  // differing element precedes.
  if ((non_owner >> t) == 0) return !a_owns;
  return a_owns;
}

std::vector<Vertex> mask_to_ids(std::uint32_t mask) {
  std::vector<Vertex> out;
  while (mask != 0) {
    out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

// Best e(S)/(|S|-c) over forced ⊆ S ⊆ allowed with |S| > c and e(S) >= 1,
// by gray-code enumeration with incremental edge counts. Lexicographically
// smallest witness on ties.
std::optional<RatioResult> exhaustive_core(const Graph& f, long long c,
                                           std::uint32_t forced_mask,
                                           std::uint32_t allowed_mask) {
  assert(f.n() <= 32);
  std::vector<std::uint32_t> nbr(f.n(), 0);
  for (const Edge& e : f.edges()) {
    std::uint32_t bu = std::uint32_t{1} << e.first;
    std::uint32_t bv = std::uint32_t{1} << e.second;
    if ((bu & allowed_mask) && (bv & allowed_mask)) {
      nbr[e.first] |= bv;
      nbr[e.second] |= bu;
    }
  }
  std::vector<Vertex> free = mask_to_ids(allowed_mask & ~forced_mask);
  if (free.size() > 20)
    throw SpanError("exhaustive density: more than 20 free vertices");

  std::uint32_t cur = forced_mask;
  long long e_cur = 0;
  for (const Edge& e : f.edges())
    if ((forced_mask >> e.first & 1) && (forced_mask >> e.second & 1))
      ++e_cur;
  long long size_cur = std::popcount(forced_mask);

  long long best_num = -1, best_den = 1;
  std::uint32_t best_mask = 0;
  auto consider = [&]() {
    if (size_cur <= c || e_cur < 1) return;
    long long den = size_cur - c;
    // e_cur/den vs best_num/best_den by cross multiplication.
    long long lhs = e_cur * best_den, rhs = best_num * den;
    if (lhs > rhs || (lhs == rhs && mask_lex_less(cur, best_mask))) {
      best_num = e_cur;
      best_den = den;
      best_mask = cur;
    }
  };
  consider();
  std::uint64_t total = std::uint64_t{1} << free.size();
  for (std::uint64_t i = 1; i < total; ++i) {
    Vertex v = free[std::countr_zero(i)];
    std::uint32_t bit = std::uint32_t{1} << v;
    if (cur & bit) {
      cur &= ~bit;
      e_cur -= std::popcount(nbr[v] & cur);
      --size_cur;
    } else {
      e_cur += std::popcount(nbr[v] & cur);
      cur |= bit;
      ++size_cur;
    }
    consider();
  }
  if (best_num < 0) return std::nullopt;
  return RatioResult{Rational(best_num, best_den), mask_to_ids(best_mask)};
}

// One parametric feasibility test: max over anchor ⊆ S ⊆ allowed of
// q·e(S) − p·|S ∖ anchor| via min cut, plus the minimal witness.
struct ClosureOutcome {
  long long max_value = 0;
  std::vector<Vertex> witness;  // sorted, contains the anchor
};

ClosureOutcome max_closure(const Graph& f, const std::vector<Edge>& allowed_edges,
                           const std::vector<Vertex>& allowed_vertices,
                           const DynBitset& anchor, long long p, long long q) {
  std::size_t m = allowed_edges.size();
  std::vector<int> node_of(f.n(), -1);
  for (std::size_t i = 0; i < allowed_vertices.size(); ++i)
    node_of[allowed_vertices[i]] = static_cast<int>(2 + m + i);
  Dinic dinic(2 + m + allowed_vertices.size());
  int source = 0, sink = 1;
  for (std::size_t i = 0; i < m; ++i) {
    int en = static_cast<int>(2 + i);
    dinic.add_edge(source, en, q);
    dinic.add_edge(en, node_of[allowed_edges[i].first], Dinic::kInf);
    dinic.add_edge(en, node_of[allowed_edges[i].second], Dinic::kInf);
  }
  for (Vertex v : allowed_vertices) {
    if (anchor.test(v))
      dinic.add_edge(source, node_of[v], Dinic::kInf);
    else
      dinic.add_edge(node_of[v], sink, p);
  }
  long long flow = dinic.max_flow(source, sink);
  ClosureOutcome out;
  out.max_value = q * static_cast<long long>(m) - flow;
  std::vector<char> side = dinic.min_cut_source_side(source);
  for (Vertex v : allowed_vertices)
    if (side[node_of[v]]) out.witness.push_back(v);
  return out;
}

long long to_ll(const BigInt& x) {
  if (x > BigInt((1LL << 60)) || x < BigInt(-(1LL << 60)))
    throw SpanError("density ratio out of int64 range");
  return x.convert_to<long long>();
}

std::optional<RatioResult> flow_core(const Graph& f, long long c,
                                     const std::vector<Vertex>& forced,
                                     const DynBitset& forbidden) {
  std::vector<Vertex> allowed_vertices;
  for (Vertex v = 0; v < f.n(); ++v)
    if (!forbidden.test(v)) allowed_vertices.push_back(v);
  std::vector<Edge> allowed_edges;
  for (const Edge& e : f.edges())
    if (!forbidden.test(e.first) && !forbidden.test(e.second))
      allowed_edges.push_back(e);
  if (allowed_edges.empty()) return std::nullopt;

  // Anchor sets guaranteeing |S| > c for every improving witness.
  std::vector<std::vector<Vertex>> anchors;
  long long nforced = static_cast<long long>(forced.size());
  if (nforced > c) {
    anchors.push_back(forced);
  } else if (nforced == c) {
    for (Vertex r : allowed_vertices) {
      if (std::binary_search(forced.begin(), forced.end(), r)) continue;
      std::vector<Vertex> a = forced;
      a.push_back(r);
      std::sort(a.begin(), a.end());
      anchors.push_back(std::move(a));
    }
  } else if (forced.empty() && c == 1) {
    // Degenerate singletons are edgeless, so they can never certify an
    // improvement; single-vertex anchors are safe here.
    for (Vertex r : allowed_vertices) anchors.push_back({r});
  } else {
    throw SpanError("densest_subgraph_flow: unsupported denominator offset");
  }
  if (anchors.empty()) return std::nullopt;

  std::optional<RatioResult> best;
  for (const auto& anchor_ids : anchors) {
    DynBitset anchor(f.n());
    for (Vertex v : anchor_ids) anchor.set(v);
    for (;;) {
      Rational lambda = best ? best->value : Rational(0, 1);
      long long p = to_ll(lambda.num()), q = to_ll(lambda.den());
      ClosureOutcome run =
          max_closure(f, allowed_edges, allowed_vertices, anchor, p, q);
      long long threshold =
          p * (static_cast<long long>(anchor_ids.size()) - c);
      if (run.max_value <= threshold) break;
      long long e_w = 0;
      DynBitset wmask(f.n());
      for (Vertex v : run.witness) wmask.set(v);
      for (const Edge& e : allowed_edges)
        if (wmask.test(e.first) && wmask.test(e.second)) ++e_w;
      long long den = static_cast<long long>(run.witness.size()) - c;
      assert(den > 0 && e_w >= 1);
      Rational value(e_w, den);
      assert(!best || best->value < value);
      best = RatioResult{value, run.witness};
    }
  }
  return best;
}

std::optional<RatioResult> dispatch(const Graph& f, long long c,
                                    const VertexSubset& forced,
                                    const VertexSubset& forbidden) {
  if (f.n() <= 20) {
    std::uint32_t forced_mask = 0, allowed_mask = 0;
    for (Vertex v = 0; v < f.n(); ++v)
      if (!forbidden.contains(v)) allowed_mask |= std::uint32_t{1} << v;
    for (Vertex v : forced.ids()) forced_mask |= std::uint32_t{1} << v;
    return exhaustive_core(f, c, forced_mask, allowed_mask);
  }
  return flow_core(f, c, forced.ids(), forbidden.to_mask());
}

DensityValue to_density(const Graph& f, RatioResult r) {
  return DensityValue{std::move(r.value),
                      VertexSubset::of(f.n(), std::move(r.witness))};
}

}  // namespace

DensityValue m_density(const Graph& h) {
  if (h.edge_count() == 0) throw SpanError("m_density: edgeless input");
  auto best =
      dispatch(h, 0, VertexSubset::of(h.n(), {}), VertexSubset::of(h.n(), {}));
  assert(best);
  return to_density(h, std::move(*best));
}

DensityValue m1_density(const Graph& f) {
  if (f.n() < 2 || f.edge_count() == 0)
    throw SpanError("m1_density: requires v(F) >= 2 and e(F) >= 1");
  auto best =
      dispatch(f, 1, VertexSubset::of(f.n(), {}), VertexSubset::of(f.n(), {}));
  assert(best);
  return to_density(f, std::move(*best));
}

DensityValue rooted_density(const Graph& f, const VertexSubset& x) {
  if (x.universe() != f.n())
    throw SpanError("rooted_density: root set universe mismatch");
  if (f.edge_count() == 0) throw SpanError("rooted_density: edgeless input");
  const VertexSubset empty = VertexSubset::of(f.n(), {});
  if (x.empty()) {
    auto best = dispatch(f, 1, empty, empty);
    if (!best)
      throw SpanError("no admissible subgraph with positive denominator");
    return to_density(f, std::move(*best));
  }
  // Either X ⊆ V(F') (denominator v - |X|) or X ∩ V(F') = ∅ (v - 1).
  auto with_x = dispatch(f, static_cast<long long>(x.size()), x, empty);
  auto without_x = dispatch(f, 1, empty, x);
  std::optional<RatioResult> best;
  if (with_x) best = std::move(*with_x);
  if (without_x) {
    if (!best || best->value < without_x->value ||
        (best->value == without_x->value &&
         without_x->witness < best->witness))
      best = std::move(*without_x);
  }
  if (!best)
    throw SpanError("no admissible subgraph with positive denominator");
  return to_density(f, std::move(*best));
}

DensityValue densest_subgraph_flow(const Graph& f,
                                   std::size_t denominator_offset,
                                   const VertexSubset& forced,
                                   const VertexSubset& forbidden) {
  if (forced.universe() != f.n() || forbidden.universe() != f.n())
    throw SpanError("densest_subgraph_flow: subset universe mismatch");
  for (Vertex v : forced.ids())
    if (forbidden.contains(v))
      throw SpanError("densest_subgraph_flow: forced vertex is forbidden");
  auto best = flow_core(f, static_cast<long long>(denominator_offset),
                        forced.ids(), forbidden.to_mask());
  if (!best) throw SpanError("densest_subgraph_flow: no feasible subgraph");
  return to_density(f, std::move(*best));
}

DensityValue densest_subgraph_exhaustive(const Graph& f,
                                         std::size_t denominator_offset,
                                         const VertexSubset& forced,
                                         const VertexSubset& forbidden) {
  if (f.n() > 32)
    throw SpanError("densest_subgraph_exhaustive: more than 32 vertices");
  if (forced.universe() != f.n() || forbidden.universe() != f.n())
    throw SpanError("densest_subgraph_exhaustive: subset universe mismatch");
  std::uint32_t forced_mask = 0, allowed_mask = 0;
  for (Vertex v = 0; v < f.n(); ++v)
    if (!forbidden.contains(v)) allowed_mask |= std::uint32_t{1} << v;
  for (Vertex v : forced.ids()) {
    if (forbidden.contains(v))
      throw SpanError("densest_subgraph_exhaustive: forced vertex forbidden");
    forced_mask |= std::uint32_t{1} << v;
  }
  auto best = exhaustive_core(f, static_cast<long long>(denominator_offset),
                              forced_mask, allowed_mask);
  if (!best)
    throw SpanError("densest_subgraph_exhaustive: no feasible subgraph");
  return to_density(f, std::move(*best));
}

Graph build_F_gamma_plus(const Graph& f, const VertexSubset& gamma) {
  if (gamma.universe() != f.n())
    throw SpanError("build_F_gamma_plus: Γ out of range");
  auto n = static_cast<Vertex>(f.n());
  std::vector<Edge> edges = f.edges();
  for (Vertex t = 0; t < 3; ++t)
    for (Vertex g : gamma.ids()) edges.push_back({g, n + t});
  return Graph::from_unchecked(f.n() + 3, std::move(edges));
}

PathGadget build_F_gamma_path(const GadgetSpec& spec) {
  if (spec.length % 2 != 0)
    throw SpanError("build_F_gamma_path: length must be even");
  if (spec.gamma.universe() != spec.base.n())
    throw SpanError("build_F_gamma_path: Γ out of range");
  std::size_t copies = spec.length / 2;
  std::size_t outside = copies + 1;
  std::size_t base_n = spec.base.n();
  PathGadget out;
  out.outside.resize(outside);
  for (std::size_t i = 0; i < outside; ++i)
    out.outside[i] = static_cast<Vertex>(i);
  out.w = out.outside.front();
  out.w_prime = out.outside.back();
  std::vector<Edge> edges;
  out.copies.resize(copies);
  for (std::size_t j = 0; j < copies; ++j) {
    auto offset = static_cast<Vertex>(outside + j * base_n);
    out.copies[j].resize(base_n);
    for (std::size_t k = 0; k < base_n; ++k)
      out.copies[j][k] = offset + static_cast<Vertex>(k);
    for (const Edge& e : spec.base.edges())
      edges.push_back({offset + e.first, offset + e.second});
    // Copy j sits between outside vertices j and j+1.
    for (Vertex g : spec.gamma.ids()) {
      edges.push_back({out.outside[j], offset + g});
      edges.push_back({out.outside[j + 1], offset + g});
    }
  }
  out.graph =
      Graph::from_unchecked(outside + copies * base_n, std::move(edges));
  return out;
}

}  // namespace spanembed
