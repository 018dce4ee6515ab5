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

#include <vector>

#include "doctest.h"
#include "spanembed/density.hpp"
#include "spanembed/errors.hpp"
#include "spanembed/graph.hpp"
#include "spanembed/random_model.hpp"
#include "spanembed/rng.hpp"

namespace {

using namespace spanembed;

Graph triangle() { return Graph::build(3, {{0, 1}, {0, 2}, {1, 2}}); }

Graph complete(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.push_back({i, j});
  return Graph::build(n, e);
}

bool value_is(const DensityValue& d, long long num, long long den) {
  return d.value == Rational(num, den);
}

// The witness must reproduce the reported ratio exactly.
void check_witness_ratio(const Graph& g, const DensityValue& d,
                         std::size_t offset_from_size) {
  const auto& ids = d.witness.ids();
  DynBitset mask(g.n());
  for (Vertex v : ids) mask.set(v);
  std::size_t e = 0;
  for (auto [u, v] : g.edges())
    if (mask.test(u) && mask.test(v)) ++e;
  REQUIRE(ids.size() > offset_from_size);
  Rational ratio(static_cast<long long>(e),
                 static_cast<long long>(ids.size() - offset_from_size));
  CHECK(ratio == d.value);
}

}  // namespace

TEST_CASE("m_density of K_4 is 3/2") {
  auto d = m_density(complete(4));
  CHECK(value_is(d, 3, 2));
  CHECK(d.witness.size() == 4);
  check_witness_ratio(complete(4), d, 0);
}

TEST_CASE("m_density of a single edge is 1/2") {
  auto d = m_density(Graph::build(2, {{0, 1}}));
  CHECK(value_is(d, 1, 2));
}

TEST_CASE("m_density of triangle plus pendant is 1 with triangle witness") {
  Graph g = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  auto d = m_density(g);
  CHECK(value_is(d, 1, 1));
  CHECK(d.witness.ids() == std::vector<Vertex>{0, 1, 2});
}

TEST_CASE("m_density rejects an edgeless graph") {
  CHECK_THROWS_AS(m_density(Graph::build(3, {})), SpanError);
}

TEST_CASE("m1_density of an edge is 1 and of K_3 is 3/2") {
  CHECK(value_is(m1_density(Graph::build(2, {{0, 1}})), 1, 1));
  CHECK(value_is(m1_density(triangle()), 3, 2));
}

TEST_CASE("m1_density of the K_3 plus-gadget is 12/5 on the whole gadget") {
  Graph gadget = build_F_gamma_plus(triangle(), VertexSubset::all(3));
  auto d = m1_density(gadget);
  CHECK(value_is(d, 12, 5));
  CHECK(d.witness.size() == 6);
  check_witness_ratio(gadget, d, 1);
}

TEST_CASE("rooted_density of the star at its leaves is 3") {
  Graph star = Graph::build(4, {{0, 1}, {0, 2}, {0, 3}});
  auto d = rooted_density(star, VertexSubset::of(4, {1, 2, 3}));
  CHECK(value_is(d, 3, 1));
  CHECK(d.witness.size() == 4);
}

TEST_CASE("rooted_density of an edge at one endpoint is 1") {
  auto d = rooted_density(Graph::build(2, {{0, 1}}), VertexSubset::of(2, {0}));
  CHECK(value_is(d, 1, 1));
}

TEST_CASE("rooted_density of the length-10 K_3 path gadget stays below 5/2") {
  GadgetSpec spec{triangle(), VertexSubset::all(3), 10};
  PathGadget pg = build_F_gamma_path(spec);
  auto d = rooted_density(pg.graph,
                          VertexSubset::of(pg.graph.n(), {pg.w, pg.w_prime}));
  CHECK(d.value <= Rational(5, 2));
  check_witness_ratio(
      pg.graph, d,
      d.witness.contains(pg.w) ? 2 : 1);
}

TEST_CASE("flow oracle with no constraints and offset 0 equals m_density") {
  RandomSource rng(11, 0);
  for (int i = 0; i < 20; ++i) {
    Graph g = sample_gnp(8, 0.5, rng);
    if (g.edge_count() == 0) continue;
    auto flow = densest_subgraph_flow(g, 0, VertexSubset::of(8, {}),
                                      VertexSubset::of(8, {}));
    auto ref = m_density(g);
    CHECK(flow.value == ref.value);
  }
}

TEST_CASE("flow and exhaustive oracles agree on random graphs with offset 1") {
  RandomSource rng(12, 0);
  VertexSubset none = VertexSubset::of(7, {});
  for (int i = 0; i < 30; ++i) {
    Graph g = sample_gnp(7, 0.45, rng);
    if (g.edge_count() == 0) continue;
    auto flow = densest_subgraph_flow(g, 1, none, none);
    auto ex = densest_subgraph_exhaustive(g, 1, none, none);
    CHECK(flow.value == ex.value);
    check_witness_ratio(g, flow, 1);
    check_witness_ratio(g, ex, 1);
  }
}

TEST_CASE("oracles respect forced and forbidden vertex constraints") {
  // Triangle {0,1,2} plus pendant 3: forbidding 2 kills the triangle.
  Graph g = Graph::build(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  VertexSubset none = VertexSubset::of(4, {});
  VertexSubset forbid2 = VertexSubset::of(4, {2});
  auto ex = densest_subgraph_exhaustive(g, 0, none, forbid2);
  auto fl = densest_subgraph_flow(g, 0, none, forbid2);
  CHECK(value_is(ex, 1, 2));
  CHECK(fl.value == ex.value);
  // Forcing the pendant vertex keeps it in every witness.
  VertexSubset force3 = VertexSubset::of(4, {3});
  auto exf = densest_subgraph_exhaustive(g, 0, force3, none);
  CHECK(exf.witness.contains(3));
  CHECK(value_is(exf, 4, 4));
}

TEST_CASE("oracles reject an all-forbidden vertex set") {
  Graph g = triangle();
  VertexSubset all = VertexSubset::all(3);
  VertexSubset none = VertexSubset::of(3, {});
  CHECK_THROWS_AS(densest_subgraph_exhaustive(g, 0, none, all), SpanError);
  CHECK_THROWS_AS(densest_subgraph_flow(g, 0, none, all), SpanError);
}

TEST_CASE("exhaustive witness ties break lexicographically") {
  // Two disjoint triangles: both achieve 3/3; the witness must be {0,1,2}.
  Graph g = Graph::build(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  auto d = densest_subgraph_exhaustive(g, 0, VertexSubset::of(6, {}),
                                       VertexSubset::of(6, {}));
  CHECK(d.witness.ids() == std::vector<Vertex>{0, 1, 2});
}

TEST_CASE("plus-gadget on K_3 with full gamma has 6 vertices and 12 edges") {
  Graph gadget = build_F_gamma_plus(triangle(), VertexSubset::all(3));
  CHECK(gadget.n() == 6);
  CHECK(gadget.edge_count() == 12);
  // New vertices 3,4,5 are pairwise nonadjacent with neighborhood exactly Γ.
  for (Vertex v = 3; v < 6; ++v) {
    CHECK(gadget.neighbors(v) == std::vector<Vertex>{0, 1, 2});
    for (Vertex u = 3; u < 6; ++u) CHECK(!gadget.has_edge(u, v));
  }
}

TEST_CASE("plus-gadget with empty gamma adds 3 isolated vertices") {
  Graph gadget = build_F_gamma_plus(triangle(), VertexSubset::of(3, {}));
  CHECK(gadget.n() == 6);
  CHECK(gadget.edge_count() == 3);
  for (Vertex v = 3; v < 6; ++v) CHECK(gadget.degree(v) == 0);
}

TEST_CASE("plus-gadget on a single vertex is the star K_1_3") {
  Graph gadget = build_F_gamma_plus(Graph::build(1, {}), VertexSubset::all(1));
  CHECK(gadget.n() == 4);
  CHECK(gadget.edge_count() == 3);
  CHECK(gadget.degree(0) == 3);
}

TEST_CASE("length-10 K_3 path gadget has 21 vertices and 45 edges") {
  GadgetSpec spec{triangle(), VertexSubset::all(3), 10};
  PathGadget pg = build_F_gamma_path(spec);
  CHECK(pg.graph.n() == 21);
  CHECK(pg.graph.edge_count() == 45);
  CHECK(pg.outside.size() == 6);
  CHECK(pg.copies.size() == 5);
  CHECK(pg.w == pg.outside.front());
  CHECK(pg.w_prime == pg.outside.back());
  // Each copy is a triangle; outside vertices attach to full Γ-copies.
  for (const auto& copy : pg.copies) {
    REQUIRE(copy.size() == 3);
    CHECK(pg.graph.has_edge(copy[0], copy[1]));
    CHECK(pg.graph.has_edge(copy[0], copy[2]));
    CHECK(pg.graph.has_edge(copy[1], copy[2]));
  }
  CHECK(pg.graph.degree(pg.w) == 3);
  CHECK(pg.graph.degree(pg.w_prime) == 3);
  // Edge count matches the identity e = (v-6)(Δ+3)/2 at Δ = 3, and the
  // whole gadget achieves 45/20 = 9/4 < Δ - 1/2.
  CHECK(pg.graph.edge_count() ==
        (pg.graph.n() - 6) * 6 / 2);
  CHECK(m1_density(pg.graph).value == Rational(9, 4));
}

TEST_CASE("length-2 single-vertex path gadget is P_3") {
  GadgetSpec spec{Graph::build(1, {}), VertexSubset::all(1), 2};
  PathGadget pg = build_F_gamma_path(spec);
  CHECK(pg.graph.n() == 3);
  CHECK(pg.graph.edge_count() == 2);
  CHECK(pg.graph.degree(pg.w) == 1);
  CHECK(pg.graph.degree(pg.w_prime) == 1);
}

TEST_CASE("length-0 path gadget is a single outside vertex") {
  GadgetSpec spec{triangle(), VertexSubset::all(3), 0};
  PathGadget pg = build_F_gamma_path(spec);
  CHECK(pg.graph.n() == 1);
  CHECK(pg.graph.edge_count() == 0);
  CHECK(pg.copies.empty());
}

TEST_CASE("path gadget rejects odd lengths") {
  GadgetSpec spec{triangle(), VertexSubset::all(3), 7};
  CHECK_THROWS_AS(build_F_gamma_path(spec), SpanError);
}
