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
#include <functional>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "spanembed/absorber.hpp"
#include "spanembed/errors.hpp"
#include "spanembed/random_model.hpp"
#include "spanembed/rng.hpp"
#include "spanembed/robust_template.hpp"

namespace {

using namespace spanembed;

// Independent robustness oracle: for every admissible Y', run a plain
// augmenting-path matching over left x ((X u X') u Y') and demand left
// saturation. Written against the template struct only.
bool brute_robust(const BipartiteTemplate& b) {
  std::size_t need = b.left_size() - b.non_y_right_size();
  std::vector<std::uint32_t> y_ids;
  for (std::uint32_t r = 0; r < b.right_size(); ++r)
    if (b.right_is_y(r)) y_ids.push_back(r);
  if (need > y_ids.size() || b.left_size() <= b.non_y_right_size() ||
      b.left_size() >= b.non_y_right_size() + y_ids.size())
    throw SpanError("brute_robust: size precondition");
  std::vector<bool> pick(y_ids.size(), false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(need), true);
  std::vector<bool> allowed(b.right_size());
  // Iterate all C(|Y|, need) subsets via prev_permutation on the mask.
  do {
    for (std::uint32_t r = 0; r < b.right_size(); ++r)
      allowed[r] = !b.right_is_y(r);
    for (std::size_t i = 0; i < y_ids.size(); ++i)
      if (pick[i]) allowed[y_ids[i]] = true;
    std::vector<int> owner(b.right_size(), -1);
    std::size_t matched = 0;
    for (std::size_t l = 0; l < b.left_size(); ++l) {
      std::vector<bool> seen(b.right_size(), false);
      // Recursive augmenting search in iterative form via lambda.
      std::function<bool(std::size_t)> aug = [&](std::size_t left) -> bool {
        for (std::uint32_t r : b.left_adj[left]) {
          if (!allowed[r] || seen[r]) continue;
          seen[r] = true;
          if (owner[r] < 0 || aug(static_cast<std::size_t>(owner[r]))) {
            owner[r] = static_cast<int>(left);
            return true;
          }
        }
        return false;
      };
      if (aug(l)) ++matched;
    }
    if (matched < b.left_size()) return false;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return true;
}

// Complete bipartite template with the given block sizes.
BipartiteTemplate complete_template(std::size_t z, std::size_t x,
                                    std::size_t y) {
  BipartiteTemplate b;
  b.z_count = z;
  b.x_count = x;
  b.y_count = y;
  b.left_adj.resize(z);
  for (auto& adj : b.left_adj)
    for (std::uint32_t r = 0; r < x + y; ++r) adj.push_back(r);
  return b;
}

std::vector<std::size_t> sorted_left_degrees(const BipartiteTemplate& b) {
  std::vector<std::size_t> d;
  for (const auto& adj : b.left_adj) d.push_back(adj.size());
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace

TEST_CASE("base template has the prescribed block sizes and left degrees") {
  RandomSource rng(21, 0);
  BipartiteTemplate b = make_base_template(2, 4, rng);
  CHECK(b.z_count == 6);
  CHECK(b.x_count == 4);
  CHECK(b.y_count == 4);
  CHECK(b.z_prime_count == 0);
  CHECK(b.x_prime_count == 0);
  for (const auto& adj : b.left_adj) {
    CHECK(adj.size() == 4);
    CHECK(std::is_sorted(adj.begin(), adj.end()));
    CHECK(std::adjacent_find(adj.begin(), adj.end()) == adj.end());
  }
}

TEST_CASE("base template rejects an infeasible z-degree") {
  RandomSource rng(22, 0);
  CHECK_THROWS_AS(make_base_template(2, 9, rng), SpanError);
}

TEST_CASE("complete bipartite templates are Y-robust") {
  BipartiteTemplate b = complete_template(5, 4, 2);
  auto v = verify_Y_robust(b);
  CHECK(v.robust);
  CHECK(v.subsets_checked == 2);
  CHECK(v.counterexample.empty());
}

TEST_CASE("a zero-degree left vertex breaks robustness") {
  RandomSource rng(23, 0);
  BipartiteTemplate b = make_base_template(2, 0, rng);
  auto v = verify_Y_robust(b);
  CHECK(!v.robust);
  CHECK(!v.counterexample.empty());
}

TEST_CASE("robust verdict matches the brute-force per-subset oracle") {
  RandomSource rng(24, 0);
  std::size_t agreements = 0;
  for (int i = 0; i < 25; ++i) {
    RandomSource trial = rng.split(static_cast<std::uint64_t>(i));
    BipartiteTemplate b = make_base_template(2, 4, trial);
    auto v = verify_Y_robust(b);
    CHECK(v.subsets_checked <= 6);  // C(4, 2) subsets, early exit allowed
    CHECK(v.robust == brute_robust(b));
    agreements += v.robust == brute_robust(b);
    if (!v.robust) {
      REQUIRE(v.counterexample.size() == b.left_size() - b.non_y_right_size());
      for (std::uint32_t r : v.counterexample) CHECK(b.right_is_y(r));
    }
  }
  CHECK(agreements == 25);
}

TEST_CASE("sampled verification agrees on clear-cut instances") {
  RandomSource rng(25, 0);
  BipartiteTemplate good = complete_template(5, 4, 2);
  RandomSource r1 = rng.split(1);
  CHECK(verify_Y_robust(good, 20, &r1).robust);
  RandomSource r2 = rng.split(2);
  BipartiteTemplate bad = complete_template(5, 4, 2);
  bad.left_adj[3].clear();
  CHECK(!verify_Y_robust(bad, 20, &r2).robust);
}

TEST_CASE("verify rejects templates violating the size precondition") {
  // left == non-Y right: nothing to draw from Y.
  BipartiteTemplate b = complete_template(4, 4, 2);
  CHECK_THROWS_AS(verify_Y_robust(b), SpanError);
}

TEST_CASE("splitting one degree-4 vertex yields two degree-3 replacements") {
  BipartiteTemplate b;
  b.z_count = 3;
  b.x_count = 2;
  b.y_count = 2;
  b.left_adj = {{0, 1, 2, 3}, {0, 2}, {1, 3}};
  BipartiteTemplate s = split_high_degree(b);
  CHECK(s.z_count == 4);
  CHECK(s.x_count == 3);
  CHECK(s.y_count == 2);
  CHECK(sorted_left_degrees(s) == std::vector<std::size_t>{2, 2, 3, 3});
}

TEST_CASE("splitting a degree-40 base takes 37 steps per left vertex") {
  RandomSource rng(26, 0);
  BipartiteTemplate b = make_base_template(10, 40, rng);
  REQUIRE(b.z_count == 30);
  BipartiteTemplate s = split_high_degree(b);
  // 37 steps per original vertex; each step grows Z and X by one.
  CHECK(s.z_count == 30 + 37 * 30);
  CHECK(s.x_count == 20 + 37 * 30);
  CHECK(s.y_count == 20);
  CHECK(s.edge_count() == 3 * s.z_count);
  for (const auto& adj : s.left_adj) CHECK(adj.size() <= 3);
}

TEST_CASE("splitting preserves robustness on verifiable instances") {
  RandomSource rng(27, 0);
  int found = 0;
  for (int i = 0; i < 60 && found < 10; ++i) {
    RandomSource trial = rng.split(static_cast<std::uint64_t>(i));
    BipartiteTemplate b = make_base_template(2, 4, trial);
    if (!verify_Y_robust(b).robust) continue;
    ++found;
    BipartiteTemplate s = split_high_degree(b);
    CHECK(verify_Y_robust(s).robust);
    CHECK(brute_robust(s));
  }
  CHECK(found == 10);
}

TEST_CASE("subdividing a single edge at length 3 forms the 4-vertex path") {
  BipartiteTemplate b;
  b.z_count = 1;
  b.x_count = 0;
  b.y_count = 1;
  b.left_adj = {{0}};
  BipartiteTemplate s = subdivide(b, 3);
  CHECK(s.z_count == 1);
  CHECK(s.z_prime_count == 1);
  CHECK(s.x_prime_count == 1);
  CHECK(s.edge_count() == 3);
  REQUIRE(s.paths.size() == 1);
  const auto& seq = s.paths[0].seq;
  REQUIRE(seq.size() == 4);
  CHECK(seq[0] == s.paths[0].z);
  CHECK(seq[3] == s.paths[0].v);
  // Internal pair: an X' right vertex then a Z' left vertex.
  CHECK(seq[1] >= s.x_count + s.y_count);
  CHECK(seq[2] >= s.z_count);
}

TEST_CASE("length-11 subdivision adds five vertices per side per edge") {
  BipartiteTemplate b = complete_template(3, 2, 2);
  BipartiteTemplate s = subdivide(b, 11);
  std::size_t e = b.edge_count();
  CHECK(e == 12);
  CHECK(s.z_prime_count == 5 * e);
  CHECK(s.x_prime_count == 5 * e);
  CHECK(s.z_prime_count == s.x_prime_count);
  CHECK(s.edge_count() == 11 * e);
  CHECK(s.paths.size() == e);
  for (const auto& p : s.paths) CHECK(p.seq.size() == 12);
}

TEST_CASE("subdivision preserves robustness on verifiable instances") {
  BipartiteTemplate b = complete_template(3, 2, 2);
  REQUIRE(verify_Y_robust(b).robust);
  BipartiteTemplate s = subdivide(b, 3);
  CHECK(verify_Y_robust(s).robust);
  CHECK(brute_robust(s));
}

TEST_CASE("subdivide rejects even lengths and repeated application") {
  BipartiteTemplate b = complete_template(3, 2, 2);
  CHECK_THROWS_AS(subdivide(b, 4), SpanError);
  CHECK_THROWS_AS(subdivide(b, 1), SpanError);
  BipartiteTemplate once = subdivide(b, 3);
  CHECK_THROWS_AS(subdivide(once, 3), SpanError);
}

TEST_CASE("templates round-trip through the text form") {
  RandomSource rng(28, 0);
  BipartiteTemplate b = make_base_template(2, 4, rng);
  std::ostringstream out;
  write_template(out, b);
  std::istringstream in(out.str());
  BipartiteTemplate back = read_template(in);
  CHECK(back.left_size() == b.left_size());
  CHECK(back.non_y_right_size() == b.non_y_right_size());
  CHECK(back.y_count == b.y_count);
  CHECK(back.edge_count() == b.edge_count());
  CHECK(verify_Y_robust(back).robust == verify_Y_robust(b).robust);
}

TEST_CASE("subdivided templates serialize with a contiguous non-Y block") {
  BipartiteTemplate b = complete_template(3, 2, 2);
  BipartiteTemplate s = subdivide(b, 3);
  std::ostringstream out;
  write_template(out, s);
  std::istringstream in(out.str());
  BipartiteTemplate back = read_template(in);
  CHECK(back.left_size() == s.left_size());
  CHECK(back.non_y_right_size() == s.non_y_right_size());
  CHECK(back.y_count == s.y_count);
  CHECK(back.edge_count() == s.edge_count());
  CHECK(verify_Y_robust(back).robust);
}

TEST_CASE("read_template rejects malformed input") {
  std::istringstream bad1("x y z\n");
  CHECK_THROWS_AS(read_template(bad1), SpanError);
  std::istringstream bad2("2 1 1\n0 5\n");
  CHECK_THROWS_AS(read_template(bad2), SpanError);
}

TEST_CASE("toy absorber realization places every template vertex") {
  // Robust base: one Z-vertex adjacent to both Y-vertices; subdivided at 11.
  BipartiteTemplate base;
  base.z_count = 1;
  base.x_count = 0;
  base.y_count = 2;
  base.left_adj = {{0, 1}};
  BipartiteTemplate b = subdivide(base, 11);
  REQUIRE(verify_Y_robust(b).robust);
  Graph f = Graph::build(1, {});
  VertexSubset gamma = VertexSubset::all(1);
  RandomSource host_rng(31, 0);
  Graph host = sample_gnp(200, 0.9, host_rng);
  RandomSource rng(31, 1);
  auto r = realize_absorber(host, b, f, gamma, rng);
  REQUIRE(r.ok());
  const Absorber& a = r.value();
  CHECK(a.t == b.left_size());
  CHECK(a.x_image.size() == b.non_y_right_size());
  CHECK(a.y_image.size() == 2);
  // Copies, X, and Y occupy distinct hosts; the only extra usage is the
  // spare outside vertices of original Z-copies below degree 3.
  std::vector<Vertex> all;
  for (const auto& c : a.copies) all.insert(all.end(), c.begin(), c.end());
  all.insert(all.end(), a.x_image.begin(), a.x_image.end());
  all.insert(all.end(), a.y_image.begin(), a.y_image.end());
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
  CHECK(all.size() == a.t * f.n() + a.x_image.size() + a.y_image.size());
  std::size_t spares = 0;
  for (std::size_t z = 0; z < base.z_count; ++z)
    spares += 3 - b.left_adj[z].size();
  CHECK(a.used.count() == all.size() + spares);
  // The auxiliary graph contains the template edges and stays robust.
  AuxBipartite aux = absorber_aux(a, host);
  for (std::size_t l = 0; l < b.left_size(); ++l)
    for (std::uint32_t tr : b.left_adj[l]) {
      Vertex want = a.right_image[tr];
      auto it = std::lower_bound(aux.right.begin(), aux.right.end(), want);
      REQUIRE(it != aux.right.end());
      auto idx = static_cast<std::uint32_t>(it - aux.right.begin());
      bool found = std::binary_search(aux.adj[l].begin(), aux.adj[l].end(), idx);
      CHECK(found);
    }
  // Robustness transfers: recast the aux graph as a template and verify.
  DynBitset is_y(host.n());
  for (Vertex v : a.y_image) is_y.set(v);
  std::vector<std::uint32_t> remap(aux.right.size());
  std::uint32_t next_x = 0;
  auto next_y = static_cast<std::uint32_t>(a.x_image.size());
  for (std::size_t i = 0; i < aux.right.size(); ++i)
    remap[i] = is_y.test(aux.right[i]) ? next_y++ : next_x++;
  BipartiteTemplate aux_t;
  aux_t.z_count = a.t;
  aux_t.x_count = a.x_image.size();
  aux_t.y_count = a.y_image.size();
  aux_t.left_adj.resize(a.t);
  for (std::size_t l = 0; l < a.t; ++l) {
    for (std::uint32_t idx : aux.adj[l]) aux_t.left_adj[l].push_back(remap[idx]);
    std::sort(aux_t.left_adj[l].begin(), aux_t.left_adj[l].end());
  }
  CHECK(verify_Y_robust(aux_t).robust);
}

TEST_CASE("absorber realization in a complete host always succeeds") {
  BipartiteTemplate base;
  base.z_count = 1;
  base.x_count = 0;
  base.y_count = 2;
  base.left_adj = {{0, 1}};
  BipartiteTemplate b = subdivide(base, 11);
  std::vector<Edge> e;
  for (Vertex i = 0; i < 60; ++i)
    for (Vertex j = i + 1; j < 60; ++j) e.push_back({i, j});
  Graph host = Graph::build(60, e);
  Graph f = Graph::build(1, {});
  RandomSource rng(32, 0);
  auto r = realize_absorber(host, b, f, VertexSubset::all(1), rng);
  REQUIRE(r.ok());
  // Complete host: the aux graph is complete bipartite.
  AuxBipartite aux = absorber_aux(r.value(), host);
  for (const auto& adj : aux.adj)
    CHECK(adj.size() == r.value().right_image.size());
}

TEST_CASE("absorber realization fails in phase one on an edgeless host") {
  BipartiteTemplate base;
  base.z_count = 1;
  base.x_count = 0;
  base.y_count = 2;
  base.left_adj = {{0, 1}};
  BipartiteTemplate b = subdivide(base, 11);
  Graph host = Graph::build(100, {});
  Graph f = Graph::build(2, {{0, 1}});
  RandomSource rng(33, 0);
  auto r = realize_absorber(host, b, f, VertexSubset::of(2, {0}), rng);
  REQUIRE(!r.ok());
  CHECK(r.failure().phase == "absorber");
}
