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

#include "spanembed/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "spanembed/canonical.hpp"
#include "spanembed/errors.hpp"

namespace spanembed {
namespace {

std::string hex_code(const std::string& raw) {
  static const char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(raw.size() * 2);
  for (unsigned char c : raw) {
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 15]);
  }
  return out;
}

std::string histogram_text(const std::map<std::string, std::size_t>& h) {
  std::string out;
  for (const auto& [code, count] : h) {
    if (!out.empty()) out += ", ";
    out += code.substr(0, 16) + ":" + std::to_string(count);
  }
  return out.empty() ? "(none)" : out;
}

// Grows S_w = {w} u N(w) by absorbing, one at a time, the smallest-id
// outside vertex whose pocket-neighbor count reaches `threshold`. Enforces
// the step and size caps; both are consequences of the degeneracy / degree
// hypotheses, so a violation is an internal error.
std::vector<Vertex> grow_pocket(const Graph& h, Vertex w, std::size_t threshold,
                                std::size_t step_cap, std::size_t size_cap) {
  std::vector<char> in_pocket(h.n(), 0);
  std::vector<std::size_t> pocket_neighbors(h.n(), 0);
  std::vector<Vertex> pocket;

  auto absorb = [&](Vertex v) {
    in_pocket[v] = 1;
    pocket.push_back(v);
    for (Vertex u : h.neighbors(v)) ++pocket_neighbors[u];
  };
  absorb(w);
  for (Vertex u : h.neighbors(w)) absorb(u);

  std::size_t steps = 0;
  while (true) {
    Vertex pick = static_cast<Vertex>(h.n());
    for (std::size_t v = 0; v < h.n(); ++v) {
      if (!in_pocket[v] && pocket_neighbors[v] >= threshold) {
        pick = static_cast<Vertex>(v);
        break;
      }
    }
    if (pick == static_cast<Vertex>(h.n())) break;
    absorb(pick);
    if (++steps > step_cap) {
      throw SpanError("pocket growth exceeded its step cap at anchor " +
                      std::to_string(w));
    }
  }
  if (pocket.size() > size_cap) {
    throw SpanError("pocket size cap exceeded at anchor " + std::to_string(w));
  }
  std::sort(pocket.begin(), pocket.end());
  return pocket;
}

// Buckets the grown pockets by the canonical form of (H[S_w], w), keeps the
// largest bucket (ties to the smaller code), and assembles the decomposition.
Decomposition bucket_and_select(const Graph& h,
                                const std::vector<Vertex>& anchors,
                                const std::vector<std::vector<Vertex>>& pockets) {
  struct Entry {
    std::size_t index;
    CanonicalForm form;
  };
  std::map<std::string, std::vector<Entry>> buckets;
  std::map<std::string, std::size_t> histogram;

  for (std::size_t i = 0; i < anchors.size(); ++i) {
    InducedSubgraph sub = induced_subgraph(h, pockets[i]);
    auto it = std::lower_bound(sub.global_of.begin(), sub.global_of.end(),
                               anchors[i]);
    Vertex local_root = static_cast<Vertex>(it - sub.global_of.begin());
    CanonicalForm form = canonical_rooted_form(sub.graph, local_root);
    std::string key = hex_code(form.code);
    buckets[key].push_back({i, std::move(form)});
  }
  for (const auto& [key, entries] : buckets) histogram[key] = entries.size();

  const std::vector<Entry>* best = nullptr;
  for (const auto& [key, entries] : buckets) {
    if (best == nullptr || entries.size() > best->size()) best = &entries;
  }
  if (best == nullptr || best->empty()) {
    throw SpanError("decomposition found no anchors; bucket histogram: " +
                    histogram_text(histogram));
  }

  Decomposition dec;
  dec.bucket_histogram = std::move(histogram);

  // F* = the canonical relabeling of the first pocket in the bucket; equal
  // codes mean every pocket relabels to this same graph.
  const Entry& first = (*best)[0];
  const InducedSubgraph first_sub = induced_subgraph(h, pockets[first.index]);
  std::vector<Edge> f_edges;
  for (const Edge& e : first_sub.graph.edges()) {
    Vertex a = first.form.position_of[e.first];
    Vertex b = first.form.position_of[e.second];
    if (a > b) std::swap(a, b);
    f_edges.emplace_back(a, b);
  }
  dec.f_star = Graph::from_unchecked(first_sub.graph.n(), std::move(f_edges));
  dec.root = 0;

  for (const Entry& entry : *best) {
    InducedSubgraph sub = induced_subgraph(h, pockets[entry.index]);
    dec.anchors.push_back(anchors[entry.index]);
    dec.pockets.push_back(pockets[entry.index]);
    std::vector<Vertex> map(dec.f_star.n());
    for (std::size_t pos = 0; pos < map.size(); ++pos) {
      map[pos] = sub.global_of[entry.form.vertex_at[pos]];
    }
    dec.pocket_map.push_back(std::move(map));
  }
  dec.k_effective =
      static_cast<double>(h.n()) / static_cast<double>(dec.anchors.size());
  return dec;
}

}  // namespace

Decomposition decompose_degenerate(const Graph& h, std::size_t d,
                                   std::size_t delta, std::size_t k) {
  if (d == 0) throw SpanError("decompose_degenerate: d must be >= 1");
  if (h.max_degree() > delta) {
    throw SpanError("decompose_degenerate: max degree " +
                    std::to_string(h.max_degree()) + " exceeds " +
                    std::to_string(delta));
  }
  auto ordering = degeneracy_ordering_with_anchor(
      h, VertexSubset::of(h.n(), {}), d);
  if (!ordering.ok()) {
    throw SpanError("decompose_degenerate: graph is not " + std::to_string(d) +
                    "-degenerate");
  }
  const std::size_t min_k = 2 * (3 * d * d) + 2;
  if (k < min_k) {
    throw SpanError("decompose_degenerate: separation k must be >= " +
                    std::to_string(min_k));
  }

  std::vector<Vertex> low_degree;
  for (std::size_t v = 0; v < h.n(); ++v) {
    if (h.degree(static_cast<Vertex>(v)) <= 2 * d) {
      low_degree.push_back(static_cast<Vertex>(v));
    }
  }
  VertexSubset anchors_set = distance_k_independent_set(
      h, VertexSubset::of(h.n(), low_degree), k);

  std::vector<Vertex> anchors(anchors_set.ids());
  std::vector<std::vector<Vertex>> pockets;
  pockets.reserve(anchors.size());
  for (Vertex w : anchors) {
    pockets.push_back(grow_pocket(h, w, d + 1, 2 * d * d, 3 * d * d));
  }
  return bucket_and_select(h, anchors, pockets);
}

Decomposition decompose_bounded(const Graph& h, std::size_t delta,
                                std::size_t k) {
  if (delta < 2) throw SpanError("decompose_bounded: delta must be >= 2");
  if (h.max_degree() > delta) {
    throw SpanError("decompose_bounded: max degree " +
                    std::to_string(h.max_degree()) + " exceeds " +
                    std::to_string(delta));
  }
  const std::size_t min_k = 4 * delta + 5;
  if (k < min_k) {
    throw SpanError("decompose_bounded: separation k must be >= " +
                    std::to_string(min_k));
  }

  VertexSubset anchors_set =
      distance_k_independent_set(h, VertexSubset::all(h.n()), k);

  std::vector<Vertex> anchors(anchors_set.ids());
  std::vector<std::vector<Vertex>> pockets;
  pockets.reserve(anchors.size());
  for (Vertex w : anchors) {
    pockets.push_back(grow_pocket(h, w, delta, delta - 1, 2 * delta));
  }
  return bucket_and_select(h, anchors, pockets);
}

DecompositionReport verify_decomposition(const Graph& h,
                                         const Decomposition& dec,
                                         bool mode_degenerate, std::size_t d,
                                         std::size_t delta) {
  DecompositionReport report;
  const std::size_t outside_cap = mode_degenerate ? d : delta - 1;

  // (D1) anchor plus its neighborhood sits inside the pocket.
  for (std::size_t i = 0; i < dec.anchors.size() && report.d1_pass; ++i) {
    const Vertex w = dec.anchors[i];
    const auto& pocket = dec.pockets[i];
    if (mode_degenerate && h.degree(w) > 2 * d) {
      report.d1_pass = false;
      report.d1_witness = w;
      break;
    }
    auto inside = [&pocket](Vertex v) {
      return std::binary_search(pocket.begin(), pocket.end(), v);
    };
    if (!inside(w)) {
      report.d1_pass = false;
      report.d1_witness = w;
      break;
    }
    for (Vertex u : h.neighbors(w)) {
      if (!inside(u)) {
        report.d1_pass = false;
        report.d1_witness = w;
        break;
      }
    }
  }

  // (D2) pocket_map is a root-preserving isomorphism onto F*.
  for (std::size_t i = 0; i < dec.anchors.size() && report.d2_pass; ++i) {
    const auto& map = dec.pocket_map[i];
    const std::size_t fn = dec.f_star.n();
    bool ok = map.size() == fn && dec.pockets[i].size() == fn &&
              dec.root < fn && map[dec.root] == dec.anchors[i];
    if (ok) {
      std::vector<Vertex> sorted_image(map);
      std::sort(sorted_image.begin(), sorted_image.end());
      ok = sorted_image == dec.pockets[i];
    }
    for (std::size_t a = 0; a < fn && ok; ++a) {
      for (std::size_t b = a + 1; b < fn && ok; ++b) {
        bool in_f = dec.f_star.has_edge(static_cast<Vertex>(a),
                                        static_cast<Vertex>(b));
        bool in_h = h.has_edge(map[a], map[b]);
        ok = in_f == in_h;
      }
    }
    if (!ok) {
      report.d2_pass = false;
      report.d2_witness = dec.anchors[i];
    }
  }

  // (D3) pockets pairwise disjoint without cross edges.
  constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(h.n(), kFree);
  for (std::size_t i = 0; i < dec.pockets.size() && report.d3_pass; ++i) {
    for (Vertex v : dec.pockets[i]) {
      if (owner[v] != kFree) {
        report.d3_pass = false;
        report.d3_witness = v;
        break;
      }
      owner[v] = i;
    }
  }
  if (report.d3_pass) {
    for (const Edge& e : h.edges()) {
      if (owner[e.first] != kFree && owner[e.second] != kFree &&
          owner[e.first] != owner[e.second]) {
        report.d3_pass = false;
        report.d3_witness = e.first;
        break;
      }
    }
  }

  // (D4) vertices outside the pocket union see at most `outside_cap` pocket
  // vertices.
  for (std::size_t v = 0; v < h.n() && report.d4_pass; ++v) {
    if (owner[v] != kFree) continue;
    std::size_t hits = 0;
    for (Vertex u : h.neighbors(static_cast<Vertex>(v))) {
      if (owner[u] != kFree) ++hits;
    }
    if (hits > outside_cap) {
      report.d4_pass = false;
      report.d4_witness = static_cast<Vertex>(v);
    }
  }
  return report;
}

RPartition partition_R(const Graph& h, const Decomposition& dec, double beta2,
                       std::size_t delta) {
  RPartition part;
  part.t = dec.anchors.size();

  std::vector<char> in_pockets(h.n(), 0);
  std::vector<Vertex> pocket_vertices;
  for (const auto& pocket : dec.pockets) {
    for (Vertex v : pocket) {
      in_pockets[v] = 1;
      pocket_vertices.push_back(v);
    }
  }
  std::vector<Vertex> r_all;
  for (std::size_t v = 0; v < h.n(); ++v) {
    if (!in_pockets[v]) r_all.push_back(static_cast<Vertex>(v));
  }

  if (beta2 <= 0.0 || r_all.empty()) {
    part.r1 = std::move(r_all);
    return part;
  }

  // Candidates: distance >= 5 from every pocket and pairwise distance >= 5
  // (the greedy at k = 5 actually yields >= 6, which only helps).
  std::vector<std::size_t> dist_s = bfs_distances(h, pocket_vertices);
  std::vector<Vertex> eligible;
  for (Vertex v : r_all) {
    if (dist_s[v] >= 5) eligible.push_back(v);
  }
  VertexSubset spread = distance_k_independent_set(
      h, VertexSubset::of(h.n(), eligible), 5);

  // Punctured ball |(N u N^2)(v) \ {v}| per candidate.
  auto ball = [&h](Vertex v) {
    std::vector<Vertex> out;
    for (Vertex u : h.neighbors(v)) out.push_back(u);
    for (Vertex u : h.neighbors(v)) {
      for (Vertex w : h.neighbors(u)) {
        if (w != v) out.push_back(w);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  const std::size_t max_k = delta * delta;
  std::vector<std::vector<Vertex>> bucket(max_k + 1);
  for (Vertex v : spread.ids()) {
    std::size_t k = ball(v).size();
    if (k <= max_k) bucket[k].push_back(v);
  }

  // Pick the bucket size k maximizing the achievable |I|, ties to smaller k.
  const double budget = beta2 * static_cast<double>(part.t) / 2.0;
  std::size_t best_k = 0;
  std::size_t best_count = 0;
  for (std::size_t k = 0; k <= max_k; ++k) {
    std::size_t cap = bucket[k].size();
    if (k > 0) {
      cap = std::min(cap, static_cast<std::size_t>(
                              std::floor(budget / static_cast<double>(k))));
    }
    if (cap > best_count) {
      best_count = cap;
      best_k = k;
    }
  }
  part.k_bucket = best_k;

  std::vector<char> in_i(h.n(), 0);
  std::vector<char> in_r2(h.n(), 0);
  for (std::size_t i = 0; i < best_count; ++i) {
    Vertex v = bucket[best_k][i];
    part.independent.push_back(v);
    in_i[v] = 1;
  }
  for (Vertex v : part.independent) {
    for (Vertex u : ball(v)) {
      assert(!in_i[u] && !in_pockets[u] && !in_r2[u]);
      in_r2[u] = 1;
      part.r2.push_back(u);
    }
  }
  std::sort(part.r2.begin(), part.r2.end());
  for (Vertex v : r_all) {
    if (!in_i[v] && !in_r2[v]) part.r1.push_back(v);
  }

  // Invariants (a)-(c); all follow from the distance-5 spacing.
  if (part.r2.size() != best_k * part.independent.size()) {
    throw SpanError("partition_R: R2 is not exactly k * |I|");
  }
  std::vector<char> in_sr1i(h.n(), 0);
  for (Vertex v : pocket_vertices) in_sr1i[v] = 1;
  for (Vertex v : part.r1) in_sr1i[v] = 1;
  for (Vertex v : part.independent) in_sr1i[v] = 1;
  for (Vertex v : part.independent) {
    for (Vertex u : h.neighbors(v)) {
      if (in_sr1i[u]) throw SpanError("partition_R: I is not isolated");
    }
  }
  for (Vertex v : part.r2) {
    std::size_t hits = 0;
    for (Vertex u : h.neighbors(v)) {
      if (in_sr1i[u]) ++hits;
    }
    if (hits > delta - 1) {
      throw SpanError("partition_R: an R2 vertex has too many placed neighbors");
    }
  }
  return part;
}

}  // namespace spanembed
