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

#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "spanembed/decompose.hpp"
#include "spanembed/errors.hpp"
#include "spanembed/graph.hpp"

namespace {

using namespace spanembed;

Graph cycle(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, static_cast<Vertex>(i + 1)});
  e.push_back({0, static_cast<Vertex>(n - 1)});
  return Graph::build(n, e);
}

Graph matching_graph(std::size_t pairs) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < pairs; ++i)
    e.push_back({static_cast<Vertex>(2 * i), static_cast<Vertex>(2 * i + 1)});
  return Graph::build(2 * pairs, e);
}

Graph k4_factor(std::size_t blocks) {
  std::vector<Edge> e;
  for (Vertex b = 0; b < blocks; ++b) {
    Vertex base = 4 * b;
    for (Vertex i = 0; i < 4; ++i)
      for (Vertex j = i + 1; j < 4; ++j)
        e.push_back({static_cast<Vertex>(base + i), static_cast<Vertex>(base + j)});
  }
  return Graph::build(4 * blocks, e);
}

Graph long_path(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.push_back({i, static_cast<Vertex>(i + 1)});
  return Graph::build(n, e);
}

void check_pocket_disjointness(const Decomposition& dec) {
  std::set<Vertex> seen;
  for (const auto& pocket : dec.pockets)
    for (Vertex v : pocket) {
      CHECK(!seen.count(v));
      seen.insert(v);
    }
}

}  // namespace

TEST_CASE("degenerate decomposition of a perfect matching uses K_2 pockets") {
  Graph h = matching_graph(40);
  Decomposition dec = decompose_degenerate(h, 1, 1, 22);
  CHECK(dec.f_star.n() == 2);
  CHECK(dec.f_star.edge_count() == 1);
  REQUIRE(!dec.anchors.empty());
  for (std::size_t i = 0; i < dec.anchors.size(); ++i) {
    CHECK(dec.pockets[i].size() == 2);
    CHECK(dec.pocket_map[i][dec.root] == dec.anchors[i]);
  }
  CHECK(verify_decomposition(h, dec, true, 1, 1).all_pass());
  CHECK(dec.k_effective == doctest::Approx(80.0 / dec.anchors.size()));
}

TEST_CASE("degenerate decomposition of C_12 grows P_3 pockets") {
  Graph h = cycle(12);
  // Smallest legal separation for d = 2 in tests keeps |D| > 0 on C_12.
  Decomposition dec = decompose_degenerate(h, 2, 2, 26);
  // No cycle vertex has 3 neighbors in a P_3, so pockets never grow.
  CHECK(dec.f_star.n() == 3);
  CHECK(dec.f_star.edge_count() == 2);
  CHECK(dec.f_star.degree(dec.root) == 2);
  CHECK(verify_decomposition(h, dec, true, 2, 2).all_pass());
  check_pocket_disjointness(dec);
}

TEST_CASE("degenerate decomposition of an edgeless graph uses one vertex") {
  Graph h = Graph::build(30, {});
  Decomposition dec = decompose_degenerate(h, 1, 1, 22);
  CHECK(dec.f_star.n() == 1);
  CHECK(!dec.anchors.empty());
  CHECK(verify_decomposition(h, dec, true, 1, 1).all_pass());
}

TEST_CASE("degenerate decomposition validates its preconditions") {
  Graph k4 = k4_factor(1);
  // K_4 is 3-degenerate, not 2-degenerate.
  CHECK_THROWS_AS(decompose_degenerate(k4, 2, 3, 26), SpanError);
  // Degree above the declared bound.
  CHECK_THROWS_AS(decompose_degenerate(k4, 3, 2, 56), SpanError);
  // Separation below 2*(3d^2)+2.
  CHECK_THROWS_AS(decompose_degenerate(matching_graph(10), 1, 1, 3), SpanError);
}

TEST_CASE("bounded decomposition of disjoint K_4s recovers K_4 pockets") {
  Graph h = k4_factor(30);
  Decomposition dec = decompose_bounded(h, 3, 17);
  CHECK(dec.f_star.n() == 4);
  CHECK(dec.f_star.edge_count() == 6);
  REQUIRE(!dec.anchors.empty());
  for (const auto& pocket : dec.pockets) CHECK(pocket.size() == 4);
  CHECK(verify_decomposition(h, dec, false, 0, 3).all_pass());
  check_pocket_disjointness(dec);
}

TEST_CASE("bounded decomposition of C_12 stays at P_3 pockets") {
  Graph h = cycle(12);
  Decomposition dec = decompose_bounded(h, 2, 13);
  CHECK(dec.f_star.n() == 3);
  CHECK(verify_decomposition(h, dec, false, 0, 2).all_pass());
  for (const auto& pocket : dec.pockets) CHECK(pocket.size() <= 4);
}

TEST_CASE("bounded decomposition of an edgeless graph uses one vertex") {
  Graph h = Graph::build(40, {});
  Decomposition dec = decompose_bounded(h, 3, 17);
  CHECK(dec.f_star.n() == 1);
  CHECK(verify_decomposition(h, dec, false, 0, 3).all_pass());
}

TEST_CASE("bounded pockets respect the 2-delta size cap") {
  // Square of a path pushes growth: interior vertices see 4 neighbors.
  std::vector<Edge> e;
  const std::size_t n = 200;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n && j <= i + 2; ++j) e.push_back({i, j});
  Graph h = Graph::build(n, e);
  Decomposition dec = decompose_bounded(h, 4, 21);
  for (const auto& pocket : dec.pockets) CHECK(pocket.size() <= 8);
  CHECK(verify_decomposition(h, dec, false, 0, 4).all_pass());
}

TEST_CASE("verify_decomposition flags overlapping pockets") {
  Graph h = matching_graph(20);
  Decomposition dec = decompose_degenerate(h, 1, 1, 22);
  REQUIRE(dec.anchors.size() >= 2);
  Decomposition bad = dec;
  bad.pockets[1] = bad.pockets[0];
  bad.pocket_map[1] = bad.pocket_map[0];
  bad.anchors[1] = bad.anchors[0];
  auto report = verify_decomposition(h, bad, true, 1, 1);
  CHECK(!report.d3_pass);
}

TEST_CASE("verify_decomposition flags a root mapped off its anchor") {
  Graph h = matching_graph(20);
  Decomposition dec = decompose_degenerate(h, 1, 1, 22);
  REQUIRE(!dec.anchors.empty());
  Decomposition bad = dec;
  std::swap(bad.pocket_map[0][0], bad.pocket_map[0][1]);
  auto report = verify_decomposition(h, bad, true, 1, 1);
  CHECK(!report.d2_pass);
}

TEST_CASE("verify_decomposition flags a pocket missing the anchor's neighbor") {
  Graph h = cycle(12);
  Decomposition dec = decompose_degenerate(h, 2, 2, 26);
  Decomposition bad = dec;
  // Shrink one pocket below the closed neighborhood.
  bad.pockets[0].pop_back();
  bad.pocket_map[0].pop_back();
  auto report = verify_decomposition(h, bad, true, 2, 2);
  CHECK((!report.d1_pass || !report.d2_pass));
}

TEST_CASE("anchors sit far apart and pockets have no cross edges") {
  Graph h = long_path(120);
  Decomposition dec = decompose_degenerate(h, 1, 2, 22);
  REQUIRE(dec.anchors.size() >= 2);
  check_pocket_disjointness(dec);
  DynBitset in_pockets(h.n());
  for (const auto& pocket : dec.pockets)
    for (Vertex v : pocket) in_pockets.set(v);
  for (std::size_t i = 0; i < dec.pockets.size(); ++i)
    for (Vertex v : dec.pockets[i])
      for (Vertex u : h.neighbors(v)) {
        if (in_pockets.test(u)) {
          bool same_pocket =
              std::binary_search(dec.pockets[i].begin(), dec.pockets[i].end(), u);
          CHECK(same_pocket);
        }
      }
}

TEST_CASE("partition_R on a long path isolates spaced interior vertices") {
  Graph h = long_path(400);
  Decomposition dec = decompose_bounded(h, 2, 13);
  RPartition rp = partition_R(h, dec, 0.5, 2);
  CHECK(rp.t == dec.anchors.size());
  // Pockets and parts cover V(H) exactly once.
  std::vector<char> tag(h.n(), 0);
  for (const auto& pocket : dec.pockets)
    for (Vertex v : pocket) tag[v] += 1;
  for (Vertex v : rp.r1) tag[v] += 1;
  for (Vertex v : rp.independent) tag[v] += 1;
  for (Vertex v : rp.r2) tag[v] += 1;
  for (Vertex v = 0; v < h.n(); ++v) CHECK(tag[v] == 1);
  if (!rp.independent.empty()) {
    CHECK(rp.r2.size() == rp.k_bucket * rp.independent.size());
    // (b) I is isolated within S u R_1 u I.
    DynBitset visible(h.n());
    for (const auto& pocket : dec.pockets)
      for (Vertex v : pocket) visible.set(v);
    for (Vertex v : rp.r1) visible.set(v);
    for (Vertex v : rp.independent) visible.set(v);
    for (Vertex v : rp.independent)
      for (Vertex u : h.neighbors(v)) CHECK(!visible.test(u));
    // (c) R_2 vertices keep a spare neighbor slot.
    for (Vertex v : rp.r2)
      CHECK(h.degree_into(v, visible) <= 1);
  }
}

TEST_CASE("partition_R with beta2 = 0 puts everything in R_1") {
  Graph h = long_path(100);
  Decomposition dec = decompose_bounded(h, 2, 13);
  RPartition rp = partition_R(h, dec, 0.0, 2);
  CHECK(rp.independent.empty());
  CHECK(rp.r2.empty());
  std::size_t pocket_total = 0;
  for (const auto& pocket : dec.pockets) pocket_total += pocket.size();
  CHECK(rp.r1.size() == h.n() - pocket_total);
}

TEST_CASE("partition_R with an empty remainder returns empty parts") {
  Graph h = matching_graph(2);
  Decomposition dec = decompose_degenerate(h, 1, 1, 22);
  if (dec.anchors.size() == 2) {
    RPartition rp = partition_R(h, dec, 0.5, 1);
    CHECK(rp.r1.empty());
    CHECK(rp.independent.empty());
    CHECK(rp.r2.empty());
  }
}

TEST_CASE("decompositions stay valid across a randomized family corpus") {
  // Light version of the acceptance sweep: a few seeds per family here.
  for (std::size_t pairs : {20, 35}) {
    Graph h = matching_graph(pairs);
    auto dec = decompose_degenerate(h, 1, 1, 22);
    CHECK(verify_decomposition(h, dec, true, 1, 1).all_pass());
  }
  for (std::size_t len : {60, 90}) {
    Graph h = long_path(len);
    auto dec = decompose_degenerate(h, 1, 2, 22);
    CHECK(verify_decomposition(h, dec, true, 1, 2).all_pass());
    auto decb = decompose_bounded(h, 2, 13);
    CHECK(verify_decomposition(h, decb, false, 0, 2).all_pass());
  }
  for (std::size_t blocks : {15, 25}) {
    Graph h = k4_factor(blocks);
    auto dec = decompose_bounded(h, 3, 17);
    CHECK(verify_decomposition(h, dec, false, 0, 3).all_pass());
  }
}
