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

#include "spanembed/random_model.hpp"

#include <algorithm>
#include <cmath>

namespace spanembed {

namespace {

constexpr double kSparseCrossover = 0.2;

}  // namespace

Graph sample_gnp(std::size_t n, double p, RandomSource& rng) {
  if (p < 0.0 || p > 1.0) throw SpanError("sample_gnp: p out of range");
  std::vector<Edge> edges;
  std::uint64_t total = n < 2 ? 0 : static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (p <= 0.0 || total == 0) return Graph::from_unchecked(n, {});
  if (p >= 1.0) {
    edges.reserve(total);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
    return Graph::from_unchecked(n, std::move(edges));
  }
  if (p < kSparseCrossover) {
    // Geometric skips over the row-major pair index; the row walk keeps the
    // index-to-pair mapping integer-exact.
    edges.reserve(static_cast<std::size_t>(p * static_cast<double>(total)) + 16);
    std::uint64_t pos = rng.geometric_skip(p);
    Vertex row = 0;
    std::uint64_t row_start = 0;
    std::uint64_t row_len = n - 1;
    while (pos < total) {
      while (pos >= row_start + row_len) {
        row_start += row_len;
        ++row;
        --row_len;
      }
      Vertex col = static_cast<Vertex>(row + 1 + (pos - row_start));
      edges.push_back({row, col});
      pos += 1 + rng.geometric_skip(p);
    }
  } else {
    edges.reserve(static_cast<std::size_t>(p * static_cast<double>(total)) + 16);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v)
        if (rng.bernoulli(p)) edges.push_back({u, v});
  }
  return Graph::from_unchecked(n, std::move(edges));
}

ExposureSplit split_exposure(double p, std::size_t r) {
  if (p < 0.0 || p > 1.0) throw SpanError("split_exposure: p out of range");
  if (r < 1) throw SpanError("split_exposure: r must be >= 1");
  ExposureSplit split;
  split.p = p;
  split.r = r;
  if (p >= 1.0) {
    split.q = 1.0;
    split.flagged = r > 1;
    return split;
  }
  split.q = r == 1 ? p : 1.0 - std::pow(1.0 - p, 1.0 / static_cast<double>(r));
  double round_trip = 1.0 - std::pow(1.0 - split.q, static_cast<double>(r));
  if (std::abs(round_trip - p) > 1e-12 * std::max(p, 1e-3))
    throw SpanError("split_exposure: round-trip drift beyond 1e-12");
  return split;
}

std::vector<Graph> sample_exposures(std::size_t n, double p, std::size_t r,
                                    RandomSource& rng) {
  ExposureSplit split = split_exposure(p, r);
  std::vector<Graph> rounds;
  rounds.reserve(r);
  for (std::size_t i = 0; i < r; ++i)
    rounds.push_back(sample_gnp(n, split.q, rng));
  return rounds;
}

std::vector<ExpansionFamilyReport> check_expansion(
    const Graph& g, const VertexSubset& u, std::size_t d,
    const std::vector<std::vector<std::vector<Vertex>>>& families,
    double lambda, double p) {
  if (u.universe() != g.n()) throw SpanError("check_expansion: U mismatch");
  if (p <= 0.0 || p >= 1.0)
    throw SpanError("check_expansion: p must be in (0,1)");
  double n = static_cast<double>(g.n());
  double pd = std::pow(p, static_cast<double>(d));
  double small_cap = 1.0 / pd;
  double large_floor = std::log(n) / pd;

  auto classify = [&](double count, double partner, double total) {
    ExpansionRegimeCheck check;
    if (count <= small_cap) {
      check.regime = "small";
      check.bound = count * partner * pd / 2.0;
    } else if (count >= large_floor) {
      check.regime = "large";
      check.bound = (1.0 - lambda) * total;
    } else {
      check.regime = "gap";
      return check;
    }
    return check;
  };

  std::vector<ExpansionFamilyReport> reports;
  for (const auto& family : families) {
    DynBitset member_union(g.n());
    std::vector<DynBitset> set_masks;
    for (const auto& set : family) {
      if (set.size() != d)
        throw SpanError("check_expansion: set size differs from d");
      DynBitset mask(g.n());
      for (Vertex v : set) {
        if (v >= g.n()) throw SpanError("check_expansion: vertex out of range");
        if (member_union.test(v))
          throw SpanError("check_expansion: overlapping sets within a family");
        member_union.set(v);
        mask.set(v);
      }
      set_masks.push_back(std::move(mask));
    }

    ExpansionFamilyReport report;
    report.family_size = family.size();
    report.u_size = u.size();
    report.u_overlaps_members = member_union.intersect_count(u.to_mask()) > 0;

    // Forward: vertices of U dominating at least one member set.
    std::size_t covered_u = 0;
    std::vector<char> set_hit(family.size(), 0);
    for (Vertex w : u.ids()) {
      DynBitset local;
      const DynBitset* nbr = nullptr;
      if (g.has_bitsets()) {
        nbr = &g.neighbor_mask(w);
      } else {
        local = DynBitset(g.n());
        for (Vertex x : g.neighbors(w)) local.set(x);
        nbr = &local;
      }
      bool any = false;
      for (std::size_t i = 0; i < set_masks.size(); ++i) {
        if (set_masks[i].is_subset_of(*nbr)) {
          any = true;
          set_hit[i] = 1;
        }
      }
      if (any) ++covered_u;
    }
    std::size_t covered_sets =
        static_cast<std::size_t>(std::count(set_hit.begin(), set_hit.end(), 1));

    report.forward = classify(static_cast<double>(family.size()),
                              static_cast<double>(u.size()),
                              static_cast<double>(u.size()));
    report.forward.observed = covered_u;
    if (report.forward.regime != "gap")
      report.forward.pass =
          static_cast<double>(covered_u) >= report.forward.bound;

    report.reverse = classify(static_cast<double>(u.size()),
                              static_cast<double>(family.size()),
                              static_cast<double>(family.size()));
    report.reverse.observed = covered_sets;
    if (report.reverse.regime != "gap")
      report.reverse.pass =
          static_cast<double>(covered_sets) >= report.reverse.bound;

    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace spanembed
