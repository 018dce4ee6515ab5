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

#include "spanembed/pipelines.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "spanembed/bitset.hpp"
#include "spanembed/errors.hpp"
#include "spanembed/robust_template.hpp"

namespace spanembed {
namespace {

Graph union_of(const std::vector<Graph>& exposures) {
  Graph g = exposures[0];
  for (std::size_t i = 1; i < exposures.size(); ++i) {
    g = graph_union(g, exposures[i]);
  }
  return g;
}

// Pocket shape with the root removed; position j of the rooted form maps to
// vertex j - 1 here.
Graph drop_root(const Graph& f_star) {
  std::vector<Edge> edges;
  for (const Edge& e : f_star.edges()) {
    if (e.first == 0 || e.second == 0) continue;
    edges.emplace_back(e.first - 1, e.second - 1);
  }
  return Graph::from_unchecked(f_star.n() - 1, std::move(edges));
}

void note(EmbedOutcome& out, std::string line) {
  out.trace.push_back(std::move(line));
}

std::string size_str(std::size_t v) { return std::to_string(v); }

Reservoir full_host_reservoir(std::size_t n, std::size_t k_cfg,
                              RandomSource& rng) {
  std::vector<Vertex> pool(n);
  for (std::size_t v = 0; v < n; ++v) pool[v] = static_cast<Vertex>(v);
  std::size_t k = k_cfg != 0 ? k_cfg : auto_layer_count(n);
  return make_reservoir(n, std::move(pool), k, rng);
}

// Anchor images must land on hosts adjacent to every already-placed
// neighbor image; collects those image sets per anchor in anchor order.
std::vector<std::vector<Vertex>> anchor_image_sets(
    const Graph& h, const std::vector<Vertex>& anchors,
    const PartialEmbedding& phi) {
  std::vector<std::vector<Vertex>> sets;
  sets.reserve(anchors.size());
  for (Vertex w : anchors) {
    std::vector<Vertex> images;
    for (Vertex u : h.neighbors(w)) {
      if (!phi.placed(u)) {
        throw SpanError("internal: anchor neighbor unplaced before matching");
      }
      images.push_back(phi.image(u));
    }
    std::sort(images.begin(), images.end());
    sets.push_back(std::move(images));
  }
  return sets;
}

void check_total_and_valid(const Graph& host_union, const Graph& target,
                           const PartialEmbedding& phi) {
  if (phi.placed_count() != target.n()) {
    throw SpanError("internal: embedding left target vertices unplaced");
  }
  EmbedVerify v = verify_embedding(host_union, target, phi);
  if (!v.pass) {
    throw SpanError("internal: embedding verification failed: " + v.detail);
  }
}

}  // namespace

EmbedOutcome embed_degenerate(const std::vector<Graph>& exposures,
                              const Graph& h, std::size_t d, std::size_t delta,
                              const EmbedConfig& cfg, RandomSource& rng) {
  if (exposures.size() != 3) {
    throw SpanError("embed_degenerate: expected 3 exposures, got " +
                    size_str(exposures.size()));
  }
  const std::size_t n = exposures[0].n();
  for (const Graph& g : exposures) {
    if (g.n() != n) throw SpanError("embed_degenerate: exposure sizes differ");
  }
  if (h.n() > n) {
    throw SpanError("embed_degenerate: target has more vertices than host");
  }
  if (d == 0) throw SpanError("embed_degenerate: d must be at least 1");
  if (h.max_degree() > delta) {
    throw SpanError("embed_degenerate: target max degree " +
                    size_str(h.max_degree()) + " exceeds bound " +
                    size_str(delta));
  }
  {
    VertexSubset empty_s = VertexSubset::of(h.n(), {});
    auto ord = degeneracy_ordering_with_anchor(h, empty_s, d);
    if (!ord.ok()) {
      throw SpanError("embed_degenerate: target is not " + size_str(d) +
                      "-degenerate");
    }
  }

  Graph host_union = union_of(exposures);
  EmbedOutcome out;

  std::optional<Decomposition> dec;
  try {
    std::size_t k = cfg.separation_degenerate != 0 ? cfg.separation_degenerate
                                                   : 20 * d * d;
    dec = decompose_degenerate(h, d, delta, k);
  } catch (const SpanError& e) {
    out.degraded = true;
    out.degradation_reason = std::string("decomposition unavailable: ") +
                             e.what();
  }

  if (out.degraded) {
    // Direct layered embedding of the whole target; pockets raise the
    // back-degree bound to 2d, capped by the degree bound.
    std::size_t d_eff = std::min(2 * d, delta);
    note(out, "degraded: layered embedding with back-degree bound " +
                  size_str(d_eff));
    VertexSubset empty_s = VertexSubset::of(h.n(), {});
    VertexSubset empty_x = VertexSubset::of(n, {});
    for (std::size_t attempt = 0; attempt < cfg.retries; ++attempt) {
      RandomSource rng_a = rng.split(attempt + 1);
      Reservoir res = full_host_reservoir(n, cfg.reservoir_k, rng_a);
      PartialEmbedding seed(h.n(), n);
      auto got = s_embed(host_union, h, empty_s, seed, empty_x, res, d_eff,
                         rng_a, cfg.gamma);
      if (!got.ok()) {
        out.failure = got.failure();
        note(out, "attempt " + size_str(attempt + 1) +
                      " failed: " + got.failure().detail);
        continue;
      }
      PartialEmbedding phi = std::move(got.value());
      check_total_and_valid(host_union, h, phi);
      out.success = true;
      out.phi = std::move(phi);
      out.layer_occupancy = res.occupancy;
      note(out, "degraded embedding complete on attempt " +
                    size_str(attempt + 1));
      return out;
    }
    return out;
  }

  const std::size_t t = dec->pockets.size();
  const Graph f = drop_root(dec->f_star);
  const std::size_t fv = f.n();
  out.d_size = t;
  note(out, "decomposition: " + size_str(t) + " pockets of size " +
                size_str(dec->f_star.n()));

  // Pocket interiors form S; anchors stay for the final exposure.
  std::vector<char> is_anchor(h.n(), 0);
  for (Vertex w : dec->anchors) is_anchor[w] = 1;
  std::vector<Vertex> s_ids;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < dec->pocket_map[i].size(); ++j) {
      if (j == dec->root) continue;
      s_ids.push_back(dec->pocket_map[i][j]);
    }
  }
  std::vector<Vertex> active_ids;
  for (std::size_t v = 0; v < h.n(); ++v) {
    if (!is_anchor[v]) active_ids.push_back(static_cast<Vertex>(v));
  }
  VertexSubset s_set = VertexSubset::of(h.n(), s_ids);
  VertexSubset active = VertexSubset::of(h.n(), active_ids);
  VertexSubset all_hosts = VertexSubset::all(n);

  for (std::size_t attempt = 0; attempt < cfg.retries; ++attempt) {
    RandomSource rng_a = rng.split(attempt + 1);

    // Phase 1: disjoint pocket copies in the first exposure.
    CopySearchResult fm =
        find_F_matching(exposures[0], f, t, all_hosts, rng_a, cfg.copy_budget);
    if (!fm.ok()) {
      out.failure = fm.failure;
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + fm.failure->detail);
      continue;
    }
    PartialEmbedding phi(h.n(), n);
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = 1; j <= fv; ++j) {
        phi.place(dec->pocket_map[i][j], fm.copies[i][j - 1]);
      }
    }

    // Reserved host set X of size 3t/4 drawn uniformly from the free hosts;
    // the rest seeds the reservoir layers.
    std::vector<Vertex> free1 = phi.free_hosts();
    std::size_t x_size = (3 * t) / 4;
    if (x_size > free1.size()) {
      throw SpanError("internal: reserved set larger than free host count");
    }
    for (std::size_t i = 0; i < x_size; ++i) {
      std::size_t j = i + rng_a.below(free1.size() - i);
      std::swap(free1[i], free1[j]);
    }
    std::vector<Vertex> x_ids(free1.begin(),
                              free1.begin() + static_cast<std::ptrdiff_t>(x_size));
    VertexSubset x = VertexSubset::of(n, x_ids);
    std::vector<Vertex> pool(free1.begin() + static_cast<std::ptrdiff_t>(x_size),
                             free1.end());
    std::size_t k = cfg.reservoir_k != 0 ? cfg.reservoir_k : auto_layer_count(n);
    Reservoir res = make_reservoir(n, std::move(pool), k, rng_a);

    // Phase 2: layered embedding of everything but the anchors in the second
    // exposure, avoiding X. Slack is structural here, not proportional.
    auto got = s_embed(exposures[1], h, s_set, phi, x, res, 2 * d, rng_a, 0.0,
                       &active);
    if (!got.ok()) {
      out.failure = got.failure();
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + got.failure().detail);
      continue;
    }
    phi = std::move(got.value());

    // Phase 3: match anchors into the remaining free hosts. The adjacency
    // is drawn from the whole union (the embedding's host); the third
    // exposure contributes the fresh edges that make the matching likely.
    // Isolated anchors take leftover hosts in ascending order.
    std::vector<Vertex> matched_anchors;
    std::vector<Vertex> isolated_anchors;
    for (Vertex w : dec->anchors) {
      if (h.degree(w) > 0) {
        matched_anchors.push_back(w);
      } else {
        isolated_anchors.push_back(w);
      }
    }
    if (!matched_anchors.empty()) {
      std::vector<std::vector<Vertex>> left_sets =
          anchor_image_sets(h, matched_anchors, phi);
      VertexSubset u_set = VertexSubset::of(n, phi.free_hosts());
      AuxBipartite aux =
          aux_bipartite(host_union, left_sets, matched_anchors, u_set);
      MatchingResult mm = max_matching(aux);
      if (!mm.perfect) {
        std::vector<std::size_t> witness;
        for (std::size_t l : mm.deficient) witness.push_back(aux.owners[l]);
        out.failure = Failure{
            "matching",
            "anchor matching deficient: " + size_str(mm.deficient.size()) +
                " of " + size_str(matched_anchors.size()) +
                " anchors jointly see too few free hosts",
            witness};
        note(out, "attempt " + size_str(attempt + 1) +
                      " failed: " + out.failure->detail);
        continue;
      }
      for (std::size_t l = 0; l < aux.left_sets.size(); ++l) {
        phi.place(aux.owners[l],
                  aux.right[static_cast<std::size_t>(mm.match[l])]);
      }
    }
    if (!isolated_anchors.empty()) {
      std::vector<Vertex> leftovers = phi.free_hosts();
      if (leftovers.size() < isolated_anchors.size()) {
        throw SpanError("internal: not enough hosts for isolated anchors");
      }
      for (std::size_t i = 0; i < isolated_anchors.size(); ++i) {
        phi.place(isolated_anchors[i], leftovers[i]);
      }
    }

    check_total_and_valid(host_union, h, phi);
    out.success = true;
    out.phi = std::move(phi);
    out.layer_occupancy = res.occupancy;
    note(out, "embedding complete on attempt " + size_str(attempt + 1));
    return out;
  }
  return out;
}

EmbedOutcome embed_bounded(const std::vector<Graph>& exposures, const Graph& h,
                           std::size_t delta, const EmbedConfig& cfg,
                           RandomSource& rng) {
  if (exposures.size() != 2) {
    throw SpanError("embed_bounded: expected 2 exposures, got " +
                    size_str(exposures.size()));
  }
  const std::size_t n = exposures[0].n();
  for (const Graph& g : exposures) {
    if (g.n() != n) throw SpanError("embed_bounded: exposure sizes differ");
  }
  if (h.n() > n) {
    throw SpanError("embed_bounded: target has more vertices than host");
  }
  if (delta < 3) throw SpanError("embed_bounded: delta must be at least 3");
  if (h.max_degree() > delta) {
    throw SpanError("embed_bounded: target max degree " +
                    size_str(h.max_degree()) + " exceeds bound " +
                    size_str(delta));
  }

  Graph host_union = union_of(exposures);
  EmbedOutcome out;

  std::optional<Decomposition> dec;
  try {
    std::size_t k = cfg.separation_bounded != 0 ? cfg.separation_bounded
                                                : 4 * delta + 5;
    dec = decompose_bounded(h, delta, k);
  } catch (const SpanError& e) {
    out.degraded = true;
    out.degradation_reason = std::string("decomposition unavailable: ") +
                             e.what();
  }
  if (!out.degraded && dec->f_star.n() < 2) {
    out.degraded = true;
    out.degradation_reason = "pocket shape has no non-root vertices";
  }

  // One Y-robust template serves every attempt; its construction only
  // consumes the dedicated stream.
  BipartiteTemplate tmpl;
  bool have_template = false;
  if (!out.degraded) {
    RandomSource rng_t = rng.split(0x7e);
    for (std::size_t i = 0; i < cfg.template_retries && !have_template; ++i) {
      BipartiteTemplate base =
          make_base_template(cfg.template_m, cfg.template_z_degree, rng_t);
      BipartiteTemplate split = split_high_degree(base);
      BipartiteTemplate sub = subdivide(split, 11);
      RobustVerdict verdict = sub.y_count <= 20
                                  ? verify_Y_robust(sub)
                                  : verify_Y_robust(sub, 200, &rng_t);
      if (verdict.robust) {
        tmpl = std::move(sub);
        have_template = true;
      }
    }
    if (!have_template) {
      out.failure = Failure{
          "absorber",
          "no Y-robust template found after " +
              size_str(cfg.template_retries) + " samples",
          {}};
      return out;
    }
    if (dec->pockets.size() < tmpl.left_size()) {
      out.degraded = true;
      out.degradation_reason =
          "anchor set (" + size_str(dec->pockets.size()) +
          ") smaller than template left side (" +
          size_str(tmpl.left_size()) + ")";
    }
  }

  if (out.degraded) {
    // Direct layered embedding of the unpadded target with the full degree
    // bound; spare hosts stay free.
    note(out, "degraded: layered embedding with degree bound " +
                  size_str(delta));
    VertexSubset empty_s = VertexSubset::of(h.n(), {});
    VertexSubset empty_x = VertexSubset::of(n, {});
    for (std::size_t attempt = 0; attempt < cfg.retries; ++attempt) {
      RandomSource rng_a = rng.split(attempt + 1);
      Reservoir res = full_host_reservoir(n, cfg.reservoir_k, rng_a);
      PartialEmbedding seed(h.n(), n);
      auto got = delta_s_embed(host_union, h, empty_s, seed, empty_x, res,
                               delta, rng_a, cfg.gamma);
      if (!got.ok()) {
        out.failure = got.failure();
        note(out, "attempt " + size_str(attempt + 1) +
                      " failed: " + got.failure().detail);
        continue;
      }
      PartialEmbedding phi = std::move(got.value());
      check_total_and_valid(host_union, h, phi);
      out.success = true;
      out.phi = std::move(phi);
      out.layer_occupancy = res.occupancy;
      note(out, "degraded embedding complete on attempt " +
                    size_str(attempt + 1));
      return out;
    }
    return out;
  }

  // Trim the anchor supply to the template's left side.
  const std::size_t t = tmpl.left_size();
  Decomposition trimmed = *dec;
  trimmed.anchors.resize(t);
  trimmed.pockets.resize(t);
  trimmed.pocket_map.resize(t);
  out.d_size = t;
  out.t = t;
  note(out, "decomposition: " + size_str(dec->pockets.size()) +
                " pockets, trimmed to t = " + size_str(t));

  // Pad the target to spanning size; padding vertices are isolated and fall
  // into the independent part of the R-partition.
  Graph hp = h.n() == n ? h : Graph::from_unchecked(n, h.edges());

  const Graph f = drop_root(trimmed.f_star);
  const std::size_t fv = f.n();
  std::vector<Vertex> gamma_ids;
  for (Vertex u : trimmed.f_star.neighbors(trimmed.root)) {
    gamma_ids.push_back(u - 1);
  }
  VertexSubset gamma = VertexSubset::of(fv, gamma_ids);

  std::vector<char> is_anchor(n, 0);
  for (Vertex w : trimmed.anchors) is_anchor[w] = 1;
  std::vector<Vertex> s_ids;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < trimmed.pocket_map[i].size(); ++j) {
      if (j == trimmed.root) continue;
      s_ids.push_back(trimmed.pocket_map[i][j]);
    }
  }
  VertexSubset s_set = VertexSubset::of(n, s_ids);

  for (std::size_t attempt = 0; attempt < cfg.retries; ++attempt) {
    RandomSource rng_a = rng.split(attempt + 1);

    // Phase 1: realize the absorber in the first exposure and put the pocket
    // interiors onto its gadget copies.
    auto ab = realize_absorber(exposures[0], tmpl, f, gamma, rng_a,
                               cfg.copy_budget);
    if (!ab.ok()) {
      out.failure = ab.failure();
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + ab.failure().detail);
      continue;
    }
    Absorber abs = std::move(ab.value());
    out.absorber_x = abs.x_image;
    out.absorber_y = abs.y_image;
    PartialEmbedding phi(n, n);
    for (std::size_t i = 0; i < t; ++i) {
      for (std::size_t j = 1; j <= fv; ++j) {
        phi.place(trimmed.pocket_map[i][j], abs.copies[i][j - 1]);
      }
    }

    // R-partition of the leftover target vertices. The isolated budget is
    // capped so the slice of Y handed to phase 2c stays within the absorber.
    double beta2_cap =
        2.0 *
        (static_cast<double>(abs.y_image.size() + abs.x_image.size()) -
         static_cast<double>(t)) /
        static_cast<double>(t);
    double beta2_eff = std::min(cfg.beta2, beta2_cap);
    if (beta2_eff < 0.0) beta2_eff = 0.0;
    RPartition rp = partition_R(hp, trimmed, beta2_eff, delta);
    note(out, "partition: |R1| = " + size_str(rp.r1.size()) +
                  ", |I| = " + size_str(rp.independent.size()) +
                  ", |R2| = " + size_str(rp.r2.size()));

    // Hosts reserved from phase 2a: the absorber's X side plus the slice of
    // Y that phase 2c will consume.
    if (abs.x_image.size() >= t + rp.r2.size()) {
      throw SpanError("internal: absorber X side exceeds matching demand");
    }
    std::size_t slice = t + rp.r2.size() - abs.x_image.size();
    if (slice > abs.y_image.size()) {
      throw SpanError("internal: Y slice exceeds absorber Y side");
    }
    std::vector<Vertex> x_abs_ids = abs.x_image;
    std::sort(x_abs_ids.begin(), x_abs_ids.end());
    VertexSubset x_abs = VertexSubset::of(n, x_abs_ids);
    std::vector<Vertex> x_prime_ids = abs.x_image;
    x_prime_ids.insert(x_prime_ids.end(), abs.y_image.begin(),
                       abs.y_image.begin() + static_cast<std::ptrdiff_t>(slice));
    std::sort(x_prime_ids.begin(), x_prime_ids.end());
    VertexSubset x_prime = VertexSubset::of(n, x_prime_ids);

    // Reservoir pool: free hosts minus the absorber's X side. The Y slice
    // stays in the pool so phase 2c can reach it.
    std::vector<Vertex> pool;
    for (Vertex v : phi.free_hosts()) {
      if (!x_abs.contains(v)) pool.push_back(v);
    }
    std::size_t k = cfg.reservoir_k != 0 ? cfg.reservoir_k : auto_layer_count(n);
    Reservoir res = make_reservoir(n, std::move(pool), k, rng_a);

    // Phase 2a: pocket interiors are already placed; embed R1 around them in
    // the second exposure, avoiding both reserved sets.
    std::vector<Vertex> active_2a_ids = s_ids;
    active_2a_ids.insert(active_2a_ids.end(), rp.r1.begin(), rp.r1.end());
    VertexSubset active_2a = VertexSubset::of(n, active_2a_ids);
    auto got_2a = delta_s_embed(exposures[1], hp, s_set, phi, x_prime, res,
                                delta, rng_a, 0.0, &active_2a);
    if (!got_2a.ok()) {
      Failure fail = got_2a.failure();
      fail.detail = "2a: " + fail.detail;
      out.failure = std::move(fail);
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + out.failure->detail);
      continue;
    }
    phi = std::move(got_2a.value());

    // Phase 2b: the independent part fills every free host outside the
    // reserved sets, in ascending order.
    std::vector<Vertex> u_ids;
    for (Vertex v : phi.free_hosts()) {
      if (!x_prime.contains(v)) u_ids.push_back(v);
    }
    if (u_ids.size() != rp.independent.size()) {
      out.failure = Failure{
          "phase2",
          "phase-2b capacity: " + size_str(u_ids.size()) +
              " unreserved free hosts for " +
              size_str(rp.independent.size()) + " independent vertices",
          {}};
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + out.failure->detail);
      continue;
    }
    for (std::size_t i = 0; i < u_ids.size(); ++i) {
      phi.place(rp.independent[i], u_ids[i]);
      for (std::size_t l = 0; l < res.layer_masks.size(); ++l) {
        if (res.layer_masks[l].test(u_ids[i])) {
          ++res.occupancy[l];
          break;
        }
      }
    }

    // Phase 2c: R2 goes into the Y slice. Everything placed so far acts as
    // the anchored set; only the absorber's X side stays reserved.
    std::vector<Vertex> s2_ids;
    std::vector<Vertex> active_2c_ids;
    for (std::size_t v = 0; v < n; ++v) {
      if (phi.placed(static_cast<Vertex>(v))) {
        s2_ids.push_back(static_cast<Vertex>(v));
        active_2c_ids.push_back(static_cast<Vertex>(v));
      }
    }
    active_2c_ids.insert(active_2c_ids.end(), rp.r2.begin(), rp.r2.end());
    std::sort(active_2c_ids.begin(), active_2c_ids.end());
    VertexSubset s2 = VertexSubset::of(n, s2_ids);
    VertexSubset active_2c = VertexSubset::of(n, active_2c_ids);
    auto got_2c = delta_s_embed(exposures[1], hp, s2, phi, x_abs, res, delta,
                                rng_a, 0.0, &active_2c);
    if (!got_2c.ok()) {
      Failure fail = got_2c.failure();
      fail.detail = "2c: " + fail.detail;
      out.failure = std::move(fail);
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + out.failure->detail);
      continue;
    }
    phi = std::move(got_2c.value());

    // After phase 2 the free hosts must be exactly the absorber's X side
    // plus the unconsumed part of Y.
    DynBitset absorber_free(n);
    for (Vertex v : abs.x_image) absorber_free.set(v);
    for (Vertex v : abs.y_image) absorber_free.set(v);
    for (std::size_t v = 0; v < n; ++v) {
      if (!phi.occupied(static_cast<Vertex>(v)) && !absorber_free.test(v)) {
        throw SpanError("internal: free host outside the absorber after phase 2");
      }
    }
    for (Vertex v : abs.x_image) {
      if (phi.occupied(v)) {
        throw SpanError("internal: reserved absorber host consumed in phase 2");
      }
    }

    // Phase 3: anchors match into the free absorber hosts. The containments
    // realized in the first exposure sit inside the union, so Y-robustness
    // guarantees the matching for whichever Y slice remains.
    std::vector<std::vector<Vertex>> left_sets =
        anchor_image_sets(hp, trimmed.anchors, phi);
    VertexSubset u_set = VertexSubset::of(n, phi.free_hosts());
    AuxBipartite aux =
        aux_bipartite(host_union, left_sets, trimmed.anchors, u_set);
    MatchingResult mm = max_matching(aux);
    if (!mm.perfect) {
      std::vector<std::size_t> witness;
      for (std::size_t l : mm.deficient) witness.push_back(aux.owners[l]);
      out.failure = Failure{
          "matching",
          "robust matching deficient: " + size_str(mm.deficient.size()) +
              " of " + size_str(t) + " anchors jointly see too few hosts",
          witness};
      note(out, "attempt " + size_str(attempt + 1) +
                    " failed: " + out.failure->detail);
      continue;
    }
    for (std::size_t l = 0; l < aux.left_sets.size(); ++l) {
      phi.place(aux.owners[l],
                aux.right[static_cast<std::size_t>(mm.match[l])]);
    }

    check_total_and_valid(host_union, hp, phi);

    // Restrict to the original target ids.
    PartialEmbedding final_phi(h.n(), n);
    for (std::size_t v = 0; v < h.n(); ++v) {
      final_phi.place(static_cast<Vertex>(v), phi.image(static_cast<Vertex>(v)));
    }
    out.success = true;
    out.phi = std::move(final_phi);
    out.layer_occupancy = res.occupancy;
    note(out, "embedding complete on attempt " + size_str(attempt + 1));
    return out;
  }
  return out;
}

}  // namespace spanembed
