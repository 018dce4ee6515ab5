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

#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "spanembed/errors.hpp"
#include "spanembed/graph.hpp"
#include "spanembed/random_model.hpp"
#include "spanembed/rng.hpp"

namespace {
using namespace spanembed;
}

TEST_CASE("rng streams are deterministic and distinct") {
  RandomSource a(42, 7);
  RandomSource b(42, 7);
  RandomSource c(42, 8);
  bool same = true;
  bool differs = false;
  for (int i = 0; i < 64; ++i) {
    std::uint64_t x = a.next();
    same = same && x == b.next();
    differs = differs || x != c.next();
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("rng split produces independent reproducible children") {
  RandomSource a(9, 1);
  RandomSource b(9, 1);
  RandomSource ca = a.split(5);
  RandomSource cb = b.split(5);
  CHECK(ca.next() == cb.next());
  RandomSource other = b.split(6);
  CHECK(a.split(6).next() == other.next());
}

TEST_CASE("rng below and unit stay in range") {
  RandomSource rng(3, 0);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.below(17) < 17);
    double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("sample_gnp at p = 0 is empty and at p = 1 is complete") {
  RandomSource rng(1, 0);
  Graph empty = sample_gnp(30, 0.0, rng);
  CHECK(empty.edge_count() == 0);
  Graph full = sample_gnp(30, 1.0, rng);
  CHECK(full.edge_count() == 30 * 29 / 2);
}

TEST_CASE("sample_gnp rejects probabilities outside the unit interval") {
  RandomSource rng(1, 0);
  CHECK_THROWS_AS(sample_gnp(10, -0.1, rng), SpanError);
  CHECK_THROWS_AS(sample_gnp(10, 1.5, rng), SpanError);
}

TEST_CASE("sample_gnp is deterministic given seed and stream") {
  RandomSource a(77, 3);
  RandomSource b(77, 3);
  Graph ga = sample_gnp(100, 0.13, a);
  Graph gb = sample_gnp(100, 0.13, b);
  CHECK(ga.edges() == gb.edges());
  RandomSource c(77, 4);
  Graph gc = sample_gnp(100, 0.13, c);
  CHECK(ga.edges() != gc.edges());
}

TEST_CASE("sample_gnp edge counts match binomial moments within 4 sigma") {
  // Sparse regime exercises the geometric-skip path (p < 0.2).
  const std::size_t n = 2000;
  const double p = 0.01;
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const double mean = pairs * p;
  const double sigma = std::sqrt(pairs * p * (1 - p));
  double total = 0;
  RandomSource rng(2026, 0);
  const int samples = 50;
  for (int i = 0; i < samples; ++i) {
    RandomSource trial = rng.split(static_cast<std::uint64_t>(i));
    total += static_cast<double>(sample_gnp(n, p, trial).edge_count());
  }
  double observed = total / samples;
  CHECK(std::abs(observed - mean) <= 4 * sigma / std::sqrt(samples));
}

TEST_CASE("dense sampling path matches moments too") {
  const std::size_t n = 300;
  const double p = 0.5;
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  const double sigma = std::sqrt(pairs * p * (1 - p));
  double total = 0;
  RandomSource rng(2027, 0);
  const int samples = 30;
  for (int i = 0; i < samples; ++i) {
    RandomSource trial = rng.split(static_cast<std::uint64_t>(i));
    total += static_cast<double>(sample_gnp(n, p, trial).edge_count());
  }
  CHECK(std::abs(total / samples - pairs * p) <= 4 * sigma / std::sqrt(samples));
}

TEST_CASE("split_exposure inverts the union law exactly at p = 0.271") {
  ExposureSplit s = split_exposure(0.271, 3);
  CHECK(s.q == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(!s.flagged);
}

TEST_CASE("split_exposure identities at r = 1 and p = 0") {
  CHECK(split_exposure(0.37, 1).q == 0.37);
  CHECK(split_exposure(0.0, 5).q == 0.0);
}

TEST_CASE("split_exposure round-trips within 1e-12") {
  for (double p : {0.05, 0.2, 0.5, 0.8, 0.99}) {
    for (std::size_t r : {std::size_t{1}, std::size_t{2}, std::size_t{3}}) {
      ExposureSplit s = split_exposure(p, r);
      double back = 1.0 - std::pow(1.0 - s.q, static_cast<double>(r));
      CHECK(std::abs(back - p) <= 1e-12 * std::max(p, 1e-3));
    }
  }
}

TEST_CASE("split_exposure flags the p = 1 multi-round corner") {
  ExposureSplit s = split_exposure(1.0, 3);
  CHECK(s.q == 1.0);
  CHECK(s.flagged);
}

TEST_CASE("sample_exposures with r = 1 is a single gnp sample") {
  RandomSource a(5, 1);
  auto list = sample_exposures(50, 0.2, 1, a);
  REQUIRE(list.size() == 1);
  CHECK(list[0].n() == 50);
}

TEST_CASE("exposure union matches the target edge marginal") {
  // Per-pair inclusion frequency across trials within 4 sigma of p.
  const std::size_t n = 120;
  const double p = 0.15;
  const int trials = 60;
  RandomSource rng(99, 0);
  std::size_t total_union_edges = 0;
  for (int t = 0; t < trials; ++t) {
    RandomSource trial = rng.split(static_cast<std::uint64_t>(t));
    auto rounds = sample_exposures(n, p, 3, trial);
    REQUIRE(rounds.size() == 3);
    Graph u = graph_union(graph_union(rounds[0], rounds[1]), rounds[2]);
    total_union_edges += u.edge_count();
  }
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  double mean = pairs * p;
  double sigma = std::sqrt(pairs * p * (1 - p));
  double observed = static_cast<double>(total_union_edges) / trials;
  CHECK(std::abs(observed - mean) <= 4 * sigma / std::sqrt(trials));
}

TEST_CASE("exposure rounds overlap at roughly q squared") {
  const std::size_t n = 400;
  const double p = 0.5;
  ExposureSplit s = split_exposure(p, 2);
  RandomSource rng(123, 0);
  auto rounds = sample_exposures(n, p, 2, rng);
  std::size_t overlap = 0;
  for (auto [u, v] : rounds[0].edges())
    if (rounds[1].has_edge(u, v)) ++overlap;
  const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
  double mean = pairs * s.q * s.q;
  double sigma = std::sqrt(pairs * s.q * s.q * (1 - s.q * s.q));
  CHECK(std::abs(static_cast<double>(overlap) - mean) <= 4 * sigma);
}

TEST_CASE("check_expansion singleton family counts the degree") {
  Graph g = Graph::build(5, {{0, 1}, {0, 2}, {3, 4}});
  std::vector<std::vector<std::vector<Vertex>>> fams = {{{0}}};
  auto reports = check_expansion(g, VertexSubset::all(5), 1, fams, 0.1, 0.5);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].forward.observed == g.degree(0));
}

TEST_CASE("check_expansion on K_n sees everything outside the family") {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 12; ++i)
    for (Vertex j = i + 1; j < 12; ++j) e.push_back({i, j});
  Graph g = Graph::build(12, e);
  // One member set: a vertex dominates it iff it lies outside the set.
  std::vector<std::vector<std::vector<Vertex>>> fams = {{{0, 1}}};
  auto reports = check_expansion(g, VertexSubset::all(12), 2, fams, 0.1, 0.9);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].forward.observed == 12 - 2);
  CHECK(reports[0].u_overlaps_members);
}

TEST_CASE("check_expansion rejects overlapping sets within a family") {
  Graph g = Graph::build(6, {{0, 1}});
  std::vector<std::vector<std::vector<Vertex>>> fams = {{{0, 1}, {1, 2}}};
  CHECK_THROWS_AS(check_expansion(g, VertexSubset::all(6), 2, fams, 0.1, 0.5),
                  SpanError);
}
