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

#include "spanembed/absorber.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spanembed/density.hpp"

namespace spanembed {
namespace {

std::optional<std::vector<Vertex>> search_copy(
    const Graph& host, const Graph& f,
    const std::vector<std::pair<Vertex, Vertex>>& fixed,
    const DynBitset& free, RandomSource& rng, CopySearchBudget budget) {
  std::optional<std::vector<Vertex>> copy;
  for (std::size_t a = 0; a < budget.attempts && !copy; ++a)
    copy = embed_copy(host, f, fixed, free, rng, budget.nodes);
  return copy;
}

}  // namespace

Expected<Absorber> realize_absorber(const Graph& exposure,
                                    const BipartiteTemplate& b, const Graph& f,
                                    const VertexSubset& gamma,
                                    RandomSource& rng,
                                    CopySearchBudget budget) {
  if (gamma.universe() != f.n())
    throw SpanError("realize_absorber: gamma universe does not match F");
  if (gamma.empty())
    throw SpanError("realize_absorber: gamma must be nonempty");
  if (b.left_size() == 0)
    throw SpanError("realize_absorber: template has no left vertices");
  for (std::size_t z = 0; z < b.z_count; ++z) {
    if (b.left_adj[z].size() > 3)
      throw SpanError("realize_absorber: z-vertex " + std::to_string(z) +
                      " has degree " + std::to_string(b.left_adj[z].size()) +
                      "; split the template to degree 3 first");
  }
  std::size_t seq_len = 0;
  for (const auto& path : b.paths) {
    if (path.seq.size() < 4 || path.seq.size() % 2 != 0)
      throw SpanError("realize_absorber: malformed template path");
    if (seq_len == 0) seq_len = path.seq.size();
    if (path.seq.size() != seq_len)
      throw SpanError("realize_absorber: template paths differ in length");
    if (path.seq.front() != path.z || path.seq.back() != path.v)
      throw SpanError("realize_absorber: path endpoints disagree with seq");
  }

  const std::size_t host_n = exposure.n();
  const std::size_t right_n = b.right_size();
  Absorber a;
  a.t = b.left_size();
  a.copies.resize(a.t);
  a.gammas.resize(a.t);
  a.right_image.assign(right_n, kNoVertex);
  a.used = DynBitset(host_n);
  DynBitset free(host_n);
  free.set_all();

  auto claim = [&](Vertex hv) {
    a.used.set(hv);
    free.reset(hv);
  };

  // Copies of F plus the three outside vertices for the original Z-vertices.
  // Outside vertex j stands in for z's j-th right neighbor; neighbors whose
  // image exists already are anchors, the rest are hosted fresh.
  Graph plus = build_F_gamma_plus(f, gamma);
  for (std::size_t z = 0; z < b.z_count; ++z) {
    const auto& nbrs = b.left_adj[z];
    std::vector<std::pair<Vertex, Vertex>> fixed;
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
      Vertex image = a.right_image[nbrs[j]];
      if (image != kNoVertex)
        fixed.emplace_back(static_cast<Vertex>(f.n() + j), image);
    }
    auto copy = search_copy(exposure, plus, fixed, free, rng, budget);
    if (!copy) {
      std::vector<std::size_t> witness;
      for (const auto& [fv, hv] : fixed) {
        (void)fv;
        witness.push_back(hv);
      }
      return Failure{"absorber",
                     "F_gamma_plus matching exhausted at z " +
                         std::to_string(z) + " of " +
                         std::to_string(b.z_count),
                     std::move(witness)};
    }
    for (Vertex hv : *copy) claim(hv);
    for (std::size_t j = 0; j < nbrs.size(); ++j)
      if (a.right_image[nbrs[j]] == kNoVertex)
        a.right_image[nbrs[j]] = (*copy)[f.n() + j];
    a.copies[z].assign(copy->begin(), copy->begin() + f.n());
    for (Vertex g : gamma.ids()) a.gammas[z].push_back((*copy)[g]);
    std::sort(a.gammas[z].begin(), a.gammas[z].end());
  }

  // Fresh random hosts for the X u Y vertices nothing identified yet.
  for (std::size_t r = 0; r < b.x_count + b.y_count; ++r) {
    if (a.right_image[r] != kNoVertex) continue;
    std::size_t c = free.count();
    if (c == 0)
      return Failure{
          "absorber", "host exhausted while injecting X u Y vertices", {}};
    auto pick = static_cast<Vertex>(free.nth_set(rng.below(c)));
    a.right_image[r] = pick;
    claim(pick);
  }

  // One anchored gadget path per template path, anchored at the hosted
  // images of its first internal right vertex and its right endpoint. The
  // path interior supplies the remaining X' images and the Z' copies.
  if (!b.paths.empty()) {
    GadgetSpec spec;
    spec.base = f;
    spec.gamma = gamma;
    spec.length = seq_len - 2;
    PathGadget gadget = build_F_gamma_path(spec);
    const std::size_t out_n = gadget.outside.size();
    const std::size_t q = (seq_len - 2) / 2;
    for (const auto& path : b.paths) {
      Vertex a0 = a.right_image[path.seq[1]];
      Vertex a1 = a.right_image[path.seq.back()];
      if (a0 == kNoVertex || a1 == kNoVertex)
        throw SpanError("realize_absorber: path anchor not hosted yet");
      std::vector<std::pair<Vertex, Vertex>> fixed = {
          {gadget.outside[0], a0}, {gadget.outside[out_n - 1], a1}};
      auto copy = search_copy(exposure, gadget.graph, fixed, free, rng, budget);
      if (!copy) {
        return Failure{"absorber",
                       "path search exhausted at path z=" +
                           std::to_string(path.z) + " v=" +
                           std::to_string(path.v),
                       {a0, a1}};
      }
      for (Vertex hv : *copy) claim(hv);
      for (std::size_t j = 1; j + 1 < out_n; ++j)
        a.right_image[path.seq[1 + 2 * j]] = (*copy)[gadget.outside[j]];
      for (std::size_t j = 1; j <= q; ++j) {
        auto lid = static_cast<std::size_t>(path.seq[2 * j]);
        auto& fc = a.copies[lid];
        fc.reserve(f.n());
        for (std::size_t k = 0; k < f.n(); ++k)
          fc.push_back((*copy)[gadget.copies[j - 1][k]]);
        for (Vertex g : gamma.ids())
          a.gammas[lid].push_back((*copy)[gadget.copies[j - 1][g]]);
        std::sort(a.gammas[lid].begin(), a.gammas[lid].end());
      }
    }
  }

  // Realization invariants: total assignment, pairwise-disjoint copies, and
  // every template adjacency present as a host common-neighborhood.
  DynBitset seen(host_n);
  for (std::size_t l = 0; l < a.t; ++l) {
    if (a.gammas[l].empty())
      throw SpanError("realize_absorber: left vertex " + std::to_string(l) +
                      " was never hosted");
    for (Vertex hv : a.copies[l]) {
      if (seen.test(hv))
        throw SpanError("realize_absorber: copies are not disjoint");
      seen.set(hv);
    }
  }
  for (std::size_t r = 0; r < right_n; ++r) {
    Vertex hv = a.right_image[r];
    if (hv == kNoVertex)
      throw SpanError("realize_absorber: right vertex " + std::to_string(r) +
                      " was never hosted");
    if (seen.test(hv))
      throw SpanError("realize_absorber: right image collides with a copy");
  }
  for (std::size_t l = 0; l < a.t; ++l) {
    for (std::uint32_t r : b.left_adj[l]) {
      for (Vertex g : a.gammas[l]) {
        if (!exposure.has_edge(g, a.right_image[r]))
          throw SpanError(
              "realize_absorber: template adjacency not realized in the host");
      }
    }
  }

  a.x_image.reserve(b.non_y_right_size());
  for (std::size_t r = 0; r < b.x_count; ++r)
    a.x_image.push_back(a.right_image[r]);
  for (std::size_t r = b.x_count + b.y_count; r < right_n; ++r)
    a.x_image.push_back(a.right_image[r]);
  a.y_image.reserve(b.y_count);
  for (std::size_t r = b.x_count; r < b.x_count + b.y_count; ++r)
    a.y_image.push_back(a.right_image[r]);
  auto td = static_cast<double>(a.t);
  a.beta1 = (td - static_cast<double>(a.x_image.size())) / td;
  a.beta2 = static_cast<double>(a.y_image.size()) / td - a.beta1;
  return a;
}

AuxBipartite absorber_aux(const Absorber& a, const Graph& host) {
  std::vector<Vertex> right;
  right.reserve(a.x_image.size() + a.y_image.size());
  right.insert(right.end(), a.x_image.begin(), a.x_image.end());
  right.insert(right.end(), a.y_image.begin(), a.y_image.end());
  std::sort(right.begin(), right.end());
  VertexSubset pool = VertexSubset::of(host.n(), std::move(right));
  std::vector<Vertex> owners(a.t);
  for (std::size_t l = 0; l < a.t; ++l) owners[l] = static_cast<Vertex>(l);
  return aux_bipartite(host, a.gammas, std::move(owners), pool);
}

}  // namespace spanembed
