// Copyright 2026 The spanembed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "spanembed/graph.hpp"
#include "spanembed/harness.hpp"
#include "spanembed/random_model.hpp"

using namespace spanembed;

namespace {

TargetParams params_with(std::size_t d, std::size_t delta) {
  TargetParams p;
  p.d = d;
  p.delta = delta;
  return p;
}

// True when g has no cycle: every component contributes |C| - 1 edges.
bool is_forest(const Graph& g) {
  std::size_t comp = components(g).size();
  return g.edge_count() == g.n() - comp;
}

struct CsvRow {
  double p = 0.0;
  std::size_t n = 0;
  std::string mode;
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t fails[4] = {0, 0, 0, 0};
  std::string mean_ms;
};

std::vector<CsvRow> parse_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line ==
        "p,n,mode,trials,successes,fail_decompose,fail_absorber,"
        "fail_phase2,fail_matching,mean_ms");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 10);
    CsvRow row;
    row.p = std::stod(cells[0]);
    row.n = std::stoul(cells[1]);
    row.mode = cells[2];
    row.trials = std::stoul(cells[3]);
    row.successes = std::stoul(cells[4]);
    for (int i = 0; i < 4; ++i) row.fails[i] = std::stoul(cells[5 + i]);
    row.mean_ms = cells[9];
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("clique factor family tiles n with K_{delta+1} blocks") {
  RandomSource rng(900, 0);
  Graph g = generate_test_graph("k_delta1_factor", 12, params_with(1, 3), rng);
  CHECK(g.n() == 12);
  CHECK(g.edge_count() == 18);
  for (Vertex v = 0; v < 12; ++v) CHECK(g.degree(v) == 3);
  auto comps = components(g);
  REQUIRE(comps.size() == 3);
  for (const auto& c : comps) {
    REQUIRE(c.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        CHECK(g.has_edge(c[i], c[j]));
      }
    }
  }
}

TEST_CASE("clique factor leaves a remainder block isolated") {
  RandomSource rng(901, 0);
  Graph g = generate_test_graph("k_delta1_factor", 14, params_with(1, 3), rng);
  CHECK(g.n() == 14);
  CHECK(g.edge_count() == 18);
  CHECK(g.degree(12) == 0);
  CHECK(g.degree(13) == 0);
}

TEST_CASE("clique factor rejects n below the clique size") {
  RandomSource rng(902, 0);
  CHECK_THROWS_AS(
      generate_test_graph("k_delta1_factor", 3, params_with(1, 3), rng),
      SpanError);
}

TEST_CASE("power of a path connects indices within distance d") {
  RandomSource rng(903, 0);
  Graph g = generate_test_graph("d_power_path", 6, params_with(2, 4), rng);
  CHECK(g.n() == 6);
  CHECK(g.edge_count() == 9);
  CHECK(g.max_degree() <= 4);
  for (Vertex u = 0; u < 6; ++u) {
    for (Vertex v = u + 1; v < 6; ++v) {
      CHECK(g.has_edge(u, v) == (v - u <= 2));
    }
  }
  CHECK_THROWS_AS(
      generate_test_graph("d_power_path", 6, params_with(0, 4), rng),
      SpanError);
}

TEST_CASE("random forest family is acyclic with bounded degree") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    RandomSource rng(904, s);
    Graph g =
        generate_test_graph("random_forest", 200, params_with(1, 3), rng);
    CHECK(g.n() == 200);
    CHECK(g.max_degree() <= 3);
    CHECK(is_forest(g));
  }
}

TEST_CASE("random regular family hits the degree exactly") {
  RandomSource rng(905, 0);
  Graph g = generate_test_graph("random_regular", 100, params_with(1, 3), rng);
  CHECK(g.n() == 100);
  CHECK(g.edge_count() == 150);
  for (Vertex v = 0; v < 100; ++v) CHECK(g.degree(v) == 3);
}

TEST_CASE("random regular rejects odd degree sums") {
  RandomSource rng(906, 0);
  CHECK_THROWS_WITH_AS(
      generate_test_graph("random_regular", 5, params_with(1, 3), rng),
      "random_regular: n * delta must be even", SpanError);
}

TEST_CASE("cycle union covers every vertex with cycles of length >= 3") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    RandomSource rng(907, s);
    Graph g = generate_test_graph("cycle_union", 37, params_with(1, 3), rng);
    CHECK(g.n() == 37);
    CHECK(g.edge_count() == 37);
    for (Vertex v = 0; v < 37; ++v) CHECK(g.degree(v) == 2);
    for (const auto& c : components(g)) CHECK(c.size() >= 3);
  }
  RandomSource rng(907, 9);
  CHECK_THROWS_AS(generate_test_graph("cycle_union", 2, params_with(1, 3), rng),
                  SpanError);
}

TEST_CASE("capped random graph respects the degree bound") {
  RandomSource rng(908, 0);
  TargetParams p = params_with(1, 3);
  p.edge_p = 0.4;
  Graph g = generate_test_graph("erdos_renyi_capped", 80, p, rng);
  CHECK(g.n() == 80);
  CHECK(g.max_degree() <= 3);
  CHECK(g.edge_count() > 0);
}

TEST_CASE("factor plus cycles splits coverage between cliques and cycles") {
  RandomSource rng(909, 0);
  TargetParams p = params_with(1, 3);
  p.coverage = 0.8;
  Graph g = generate_test_graph("factor_cycles", 20, p, rng);
  CHECK(g.n() == 20);
  // coverage 0.8 of 20 = 16 vertices in four K_4 blocks, 4 left for cycles.
  for (Vertex v = 0; v < 16; ++v) CHECK(g.degree(v) == 3);
  for (Vertex v = 16; v < 20; ++v) CHECK(g.degree(v) == 2);

  p.coverage = 1.5;
  CHECK_THROWS_AS(generate_test_graph("factor_cycles", 20, p, rng), SpanError);
}

TEST_CASE("unknown family and zero n are rejected") {
  RandomSource rng(910, 0);
  CHECK_THROWS_WITH_AS(
      generate_test_graph("moebius_ladder", 10, params_with(1, 3), rng),
      "generate_test_graph: unknown family 'moebius_ladder'", SpanError);
  CHECK_THROWS_AS(
      generate_test_graph("k_delta1_factor", 0, params_with(1, 3), rng),
      SpanError);
}

TEST_CASE("generators are deterministic per seed and stream") {
  RandomSource a(911, 4);
  RandomSource b(911, 4);
  Graph ga = generate_test_graph("random_forest", 60, params_with(1, 3), a);
  Graph gb = generate_test_graph("random_forest", 60, params_with(1, 3), b);
  CHECK(ga.edges() == gb.edges());
}

TEST_CASE("empty config keeps documented defaults") {
  ExperimentConfig cfg = parse_experiment_config("{}");
  CHECK(cfg.n == 100);
  CHECK(cfg.mode == "bounded");
  CHECK(cfg.d == 2);
  CHECK(cfg.delta == 3);
  CHECK(cfg.p_grid.empty());
  CHECK(cfg.trials == 1);
  CHECK(cfg.seed == 1);
  CHECK(cfg.retries == 5);
  CHECK(cfg.gamma == doctest::Approx(0.05));
  CHECK(cfg.beta2 == doctest::Approx(0.25));
  CHECK(cfg.lambda == doctest::Approx(0.0125));
  CHECK(cfg.reservoir_k == 0);
  CHECK(cfg.template_m == 1);
  CHECK(cfg.template_z_degree == 3);
  CHECK(cfg.target_kind == "k_delta1_factor");
  CHECK(cfg.target_v == 0);
  CHECK(cfg.target_coverage == doctest::Approx(0.8));
  CHECK(cfg.target_edge_p == doctest::Approx(0.5));
  CHECK_FALSE(cfg.fixed_timing);
}

TEST_CASE("full config round-trips every field") {
  const char* text = R"({
    "n": 240, "mode": "degenerate", "d": 1, "delta": 4,
    "p_grid": [0.3, 0.6, 0.9], "trials": 7, "seed": 42, "retries": 2,
    "gamma": 0.1, "beta2": 0.5, "lambda": 0.02, "reservoir_k": 5,
    "template_m": 2, "template_z_degree": 4, "fixed_timing": true,
    "target": {"kind": "random_forest", "v": 180, "coverage": 0.7,
               "edge_p": 0.25}
  })";
  ExperimentConfig cfg = parse_experiment_config(text);
  CHECK(cfg.n == 240);
  CHECK(cfg.mode == "degenerate");
  CHECK(cfg.d == 1);
  CHECK(cfg.delta == 4);
  REQUIRE(cfg.p_grid.size() == 3);
  CHECK(cfg.p_grid[1] == doctest::Approx(0.6));
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 42);
  CHECK(cfg.retries == 2);
  CHECK(cfg.gamma == doctest::Approx(0.1));
  CHECK(cfg.beta2 == doctest::Approx(0.5));
  CHECK(cfg.lambda == doctest::Approx(0.02));
  CHECK(cfg.reservoir_k == 5);
  CHECK(cfg.template_m == 2);
  CHECK(cfg.template_z_degree == 4);
  CHECK(cfg.fixed_timing);
  CHECK(cfg.target_kind == "random_forest");
  CHECK(cfg.target_v == 180);
  CHECK(cfg.target_coverage == doctest::Approx(0.7));
  CHECK(cfg.target_edge_p == doctest::Approx(0.25));
}

TEST_CASE("config rejects unknown keys by name") {
  CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"bogus": 1})"),
                       "config: unknown key 'bogus'", SpanError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_config(R"({"target": {"flavour": "salt"}})"),
      "config: unknown target key 'flavour'", SpanError);
}

TEST_CASE("config rejects malformed documents and values") {
  CHECK_THROWS_AS(parse_experiment_config("{"), SpanError);
  CHECK_THROWS_AS(parse_experiment_config("[1, 2]"), SpanError);
  CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"n": "many"})"),
                       "config: bad value for key 'n'", SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"target": 3})"), SpanError);
}

TEST_CASE("config validation enforces grid, mode, and size invariants") {
  CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"p_grid": [0.5, 0.4]})"),
                       "config: p_grid must be ascending", SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"p_grid": [0.0, 0.5]})"),
                  SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"p_grid": [0.5, 1.5]})"),
                  SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"mode": "sideways"})"),
                  SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"trials": 0})"), SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"retries": 0})"), SpanError);
  CHECK_THROWS_AS(parse_experiment_config(R"({"gamma": 1.0})"), SpanError);
  CHECK_THROWS_WITH_AS(
      parse_experiment_config(R"({"n": 50, "target": {"v": 60}})"),
      "config: target v exceeds host n", SpanError);
}

TEST_CASE("config loads from a file and reports missing paths") {
  const char* path = "harness_cfg_tmp.json";
  {
    std::ofstream out(path);
    out << R"({"n": 64, "mode": "direct", "p_grid": [1.0]})";
  }
  ExperimentConfig cfg = load_experiment_config(path);
  CHECK(cfg.n == 64);
  CHECK(cfg.mode == "direct");
  REQUIRE(cfg.p_grid.size() == 1);
  std::remove(path);
  CHECK_THROWS_AS(load_experiment_config("no_such_config.json"), SpanError);
}

TEST_CASE("trial at p = 1 succeeds in direct mode") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 40, "mode": "direct", "delta": 3, "seed": 920,
    "target": {"kind": "cycle_union", "v": 30}
  })");
  TrialRecord rec = run_trial(cfg, 1.0, 0);
  CHECK(rec.success);
  CHECK(rec.failing_phase.empty());
  CHECK(rec.p == doctest::Approx(1.0));
  CHECK(rec.stream == 0);
  CHECK(rec.wall_ms >= 0.0);
  std::size_t placed = 0;
  for (std::size_t c : rec.layer_occupancy) placed += c;
  CHECK(placed == 30);
}

TEST_CASE("trial at p = 1 succeeds in degenerate mode") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 120, "mode": "degenerate", "d": 1, "delta": 3, "seed": 921,
    "target": {"kind": "random_forest", "v": 90}
  })");
  TrialRecord rec = run_trial(cfg, 1.0, 0);
  CHECK(rec.success);
  CHECK(rec.failing_phase.empty());
  CHECK(rec.d_size > 0);
}

TEST_CASE("trial at p = 0 fails in a named phase") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 40, "mode": "direct", "delta": 3, "seed": 922, "retries": 2,
    "target": {"kind": "cycle_union", "v": 30}
  })");
  TrialRecord rec = run_trial(cfg, 0.0, 0);
  CHECK_FALSE(rec.success);
  std::set<std::string> phases = {"decompose", "absorber", "phase2",
                                  "matching"};
  CHECK(phases.count(rec.failing_phase) == 1);
}

TEST_CASE("trial rerun with a fixed stream reproduces the record") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 60, "mode": "direct", "delta": 3, "seed": 923,
    "target": {"kind": "cycle_union", "v": 45}
  })");
  TrialRecord a = run_trial(cfg, 0.8, 5);
  TrialRecord b = run_trial(cfg, 0.8, 5);
  CHECK(a.success == b.success);
  CHECK(a.failing_phase == b.failing_phase);
  CHECK(a.layer_occupancy == b.layer_occupancy);
  CHECK(a.d_size == b.d_size);
  CHECK(a.t == b.t);
  CHECK(a.absorber_x == b.absorber_x);
  CHECK(a.absorber_y == b.absorber_y);
  CHECK(a.stream == b.stream);
  TrialRecord c = run_trial(cfg, 0.8, 6);
  CHECK(c.stream != a.stream);
}

TEST_CASE("trial rejects p outside the unit interval") {
  ExperimentConfig cfg = parse_experiment_config(R"({"mode": "direct"})");
  CHECK_THROWS_AS(run_trial(cfg, -0.1, 0), SpanError);
  CHECK_THROWS_AS(run_trial(cfg, 1.1, 0), SpanError);
}

TEST_CASE("sweep at p = 1 reports full success per row") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 40, "mode": "direct", "delta": 3, "seed": 924, "trials": 3,
    "p_grid": [1.0], "fixed_timing": true,
    "target": {"kind": "cycle_union", "v": 30}
  })");
  std::string csv = sweep(cfg);
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].p == doctest::Approx(1.0));
  CHECK(rows[0].n == 40);
  CHECK(rows[0].mode == "direct");
  CHECK(rows[0].trials == 3);
  CHECK(rows[0].successes == 3);
  for (int i = 0; i < 4; ++i) CHECK(rows[0].fails[i] == 0);
  CHECK(rows[0].mean_ms == "0.000");
}

TEST_CASE("sweep accounts every trial to success or one phase") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 40, "mode": "direct", "delta": 3, "seed": 925, "trials": 4,
    "p_grid": [0.05, 0.5, 1.0], "fixed_timing": true,
    "target": {"kind": "cycle_union", "v": 32}
  })");
  std::string csv = sweep(cfg);
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 3);
  for (const CsvRow& row : rows) {
    std::size_t failed = row.fails[0] + row.fails[1] + row.fails[2] +
                         row.fails[3];
    CHECK(row.successes + failed == row.trials);
  }
  CHECK(rows[2].successes == 4);
}

TEST_CASE("sweep rows match stream-indexed single trials") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 36, "mode": "direct", "delta": 3, "seed": 926, "trials": 2,
    "p_grid": [0.4, 0.9], "fixed_timing": true,
    "target": {"kind": "cycle_union", "v": 27}
  })");
  std::string csv = sweep(cfg);
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 2);
  for (std::size_t point = 0; point < 2; ++point) {
    std::size_t expect = 0;
    for (std::size_t trial = 0; trial < 2; ++trial) {
      TrialRecord rec = run_trial(cfg, cfg.p_grid[point], point * 2 + trial);
      if (rec.success) ++expect;
    }
    CHECK(rows[point].successes == expect);
  }
}

TEST_CASE("sweep with fixed timing is byte-identical across reruns") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 36, "mode": "direct", "delta": 3, "seed": 927, "trials": 2,
    "p_grid": [0.35, 0.95], "fixed_timing": true,
    "target": {"kind": "cycle_union", "v": 27}
  })");
  std::string first = sweep(cfg);
  std::string second = sweep(cfg);
  CHECK(first == second);
}

TEST_CASE("sweep covers the bounded pipeline end to end") {
  ExperimentConfig cfg = parse_experiment_config(R"({
    "n": 150, "mode": "bounded", "delta": 3, "seed": 928, "trials": 2,
    "p_grid": [0.8], "fixed_timing": true,
    "target": {"kind": "k_delta1_factor", "v": 32}
  })");
  std::string csv = sweep(cfg);
  auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].mode == "bounded");
  std::size_t failed = rows[0].fails[0] + rows[0].fails[1] + rows[0].fails[2] +
                       rows[0].fails[3];
  CHECK(rows[0].successes + failed == 2);
}
