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

#include "spanembed/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <utility>

#include "json.hpp"
#include "spanembed/errors.hpp"
#include "spanembed/random_model.hpp"

namespace spanembed {
namespace {

using nlohmann::json;

Graph clique_factor(std::size_t n, std::size_t delta) {
  std::size_t clique = delta + 1;
  if (n < clique) {
    throw SpanError("k_delta1_factor: n = " + std::to_string(n) +
                    " below clique size " + std::to_string(clique));
  }
  std::size_t copies = n / clique;
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < copies; ++c) {
    Vertex base = static_cast<Vertex>(c * clique);
    for (std::size_t i = 0; i < clique; ++i) {
      for (std::size_t j = i + 1; j < clique; ++j) {
        edges.emplace_back(base + static_cast<Vertex>(i),
                           base + static_cast<Vertex>(j));
      }
    }
  }
  return Graph::from_unchecked(n, std::move(edges));
}

Graph power_path(std::size_t n, std::size_t d) {
  if (d == 0) throw SpanError("d_power_path: d must be at least 1");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && j - i <= d; ++j) {
      edges.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(j));
    }
  }
  return Graph::from_unchecked(n, std::move(edges));
}

Graph forest(std::size_t n, std::size_t delta, RandomSource& rng) {
  if (delta == 0) throw SpanError("random_forest: delta must be at least 1");
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    if (rng.below(10) == 0) continue;  // start a new tree
    bool attached = false;
    for (std::size_t attempt = 0; attempt < 32 && !attached; ++attempt) {
      std::size_t u = rng.below(v);
      if (deg[u] < delta) {
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
        ++deg[u];
        ++deg[v];
        attached = true;
      }
    }
  }
  return Graph::from_unchecked(n, std::move(edges));
}

Graph regular(std::size_t n, std::size_t delta, RandomSource& rng) {
  if (delta == 0) throw SpanError("random_regular: delta must be at least 1");
  if (delta >= n) throw SpanError("random_regular: delta must be below n");
  if ((n * delta) % 2 != 0) {
    throw SpanError("random_regular: n * delta must be even");
  }
  std::size_t points = n * delta;
  std::vector<Vertex> perm(points);
  const std::size_t cap = 200000;
  for (std::size_t attempt = 0; attempt < cap; ++attempt) {
    for (std::size_t i = 0; i < points; ++i) perm[i] = static_cast<Vertex>(i);
    for (std::size_t i = 0; i + 1 < points; ++i) {
      std::size_t j = i + rng.below(points - i);
      std::swap(perm[i], perm[j]);
    }
    std::vector<Edge> edges;
    edges.reserve(points / 2);
    std::set<std::pair<Vertex, Vertex>> seen;
    bool ok = true;
    for (std::size_t i = 0; i < points && ok; i += 2) {
      Vertex u = static_cast<Vertex>(perm[i] / delta);
      Vertex v = static_cast<Vertex>(perm[i + 1] / delta);
      if (u == v) {
        ok = false;
      } else {
        if (u > v) std::swap(u, v);
        if (!seen.emplace(u, v).second) {
          ok = false;
        } else {
          edges.emplace_back(u, v);
        }
      }
    }
    if (ok) return Graph::from_unchecked(n, std::move(edges));
  }
  throw SpanError("random_regular: pairing model exhausted its resample cap");
}

void append_cycle_chunks(std::vector<Edge>& edges, std::size_t first,
                         std::size_t count, RandomSource& rng) {
  std::size_t start = first;
  std::size_t remaining = count;
  while (remaining > 0) {
    std::size_t len;
    if (remaining < 6) {
      len = remaining;  // 3, 4, or 5: one final cycle
    } else {
      std::size_t span = std::min<std::size_t>(8, remaining - 3) - 2;
      len = 3 + rng.below(span);
    }
    for (std::size_t i = 0; i + 1 < len; ++i) {
      edges.emplace_back(static_cast<Vertex>(start + i),
                         static_cast<Vertex>(start + i + 1));
    }
    edges.emplace_back(static_cast<Vertex>(start),
                       static_cast<Vertex>(start + len - 1));
    start += len;
    remaining -= len;
  }
}

Graph cycles(std::size_t n, RandomSource& rng) {
  if (n < 3) throw SpanError("cycle_union: n must be at least 3");
  std::vector<Edge> edges;
  append_cycle_chunks(edges, 0, n, rng);
  return Graph::from_unchecked(n, std::move(edges));
}

Graph er_capped(std::size_t n, std::size_t delta, double edge_p,
                RandomSource& rng) {
  if (delta == 0) throw SpanError("erdos_renyi_capped: delta must be >= 1");
  Graph raw = sample_gnp(n, edge_p, rng);
  std::vector<Edge> pool = raw.edges();
  for (std::size_t i = 0; i + 1 < pool.size(); ++i) {
    std::size_t j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<std::size_t> deg(n, 0);
  std::vector<Edge> edges;
  for (const Edge& e : pool) {
    if (deg[e.first] < delta && deg[e.second] < delta) {
      edges.push_back(e);
      ++deg[e.first];
      ++deg[e.second];
    }
  }
  return Graph::from_unchecked(n, std::move(edges));
}

Graph factor_plus_cycles(std::size_t n, std::size_t delta, double coverage,
                         RandomSource& rng) {
  if (coverage < 0.0 || coverage > 1.0) {
    throw SpanError("factor_cycles: coverage must lie in [0, 1]");
  }
  std::size_t clique = delta + 1;
  std::size_t covered = static_cast<std::size_t>(coverage *
                                                 static_cast<double>(n));
  std::size_t blocks = covered / clique;
  std::size_t used = blocks * clique;
  std::vector<Edge> edges;
  for (std::size_t c = 0; c < blocks; ++c) {
    Vertex base = static_cast<Vertex>(c * clique);
    for (std::size_t i = 0; i < clique; ++i) {
      for (std::size_t j = i + 1; j < clique; ++j) {
        edges.emplace_back(base + static_cast<Vertex>(i),
                           base + static_cast<Vertex>(j));
      }
    }
  }
  std::size_t rest = n - used;
  if (rest >= 3) {
    append_cycle_chunks(edges, used, rest, rng);
  }
  // rest of 1 or 2 stays isolated
  return Graph::from_unchecked(n, std::move(edges));
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string fmt_ms(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n == 0) throw SpanError("config: n must be at least 1");
  if (cfg.mode != "degenerate" && cfg.mode != "bounded" &&
      cfg.mode != "direct") {
    throw SpanError("config: mode must be degenerate, bounded, or direct");
  }
  if (cfg.trials == 0) throw SpanError("config: trials must be at least 1");
  if (cfg.retries == 0) throw SpanError("config: retries must be at least 1");
  if (cfg.d == 0) throw SpanError("config: d must be at least 1");
  if (cfg.delta == 0) throw SpanError("config: delta must be at least 1");
  if (cfg.gamma < 0.0 || cfg.gamma >= 1.0) {
    throw SpanError("config: gamma must lie in [0, 1)");
  }
  if (cfg.beta2 < 0.0) throw SpanError("config: beta2 must be nonnegative");
  if (cfg.target_v > cfg.n) {
    throw SpanError("config: target v exceeds host n");
  }
  double prev = 0.0;
  for (double p : cfg.p_grid) {
    if (p <= 0.0 || p > 1.0) {
      throw SpanError("config: p_grid entries must lie in (0, 1]");
    }
    if (p <= prev) throw SpanError("config: p_grid must be ascending");
    prev = p;
  }
}

// Reads j[key] into out when present; enforces the JSON type.
template <typename T>
void read_key(const json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const std::exception&) {
    throw SpanError(std::string("config: bad value for key '") + key + "'");
  }
}

EmbedConfig embed_config_of(const ExperimentConfig& cfg) {
  EmbedConfig e;
  e.retries = cfg.retries;
  e.gamma = cfg.gamma;
  e.beta2 = cfg.beta2;
  e.lambda = cfg.lambda;
  e.reservoir_k = cfg.reservoir_k;
  e.template_m = cfg.template_m;
  e.template_z_degree = cfg.template_z_degree;
  return e;
}

void fill_from_outcome(TrialRecord& rec, const EmbedOutcome& out) {
  rec.success = out.success;
  rec.degraded = out.degraded;
  rec.d_size = out.d_size;
  rec.t = out.t;
  rec.absorber_x = out.absorber_x.size();
  rec.absorber_y = out.absorber_y.size();
  rec.layer_occupancy = out.layer_occupancy;
  if (!out.success) {
    if (!out.failure.has_value()) {
      throw SpanError("internal: failed outcome carries no failure record");
    }
    rec.failing_phase = out.failure->phase;
  }
}

std::size_t phase_column(const std::string& phase) {
  if (phase == "decompose") return 0;
  if (phase == "absorber") return 1;
  if (phase == "phase2") return 2;
  if (phase == "matching") return 3;
  throw SpanError("internal: unknown failure phase '" + phase + "'");
}

}  // namespace

Graph generate_test_graph(const std::string& kind, std::size_t n,
                          const TargetParams& params, RandomSource& rng) {
  if (n == 0) throw SpanError("generate_test_graph: n must be at least 1");
  if (kind == "k_delta1_factor") return clique_factor(n, params.delta);
  if (kind == "d_power_path") return power_path(n, params.d);
  if (kind == "random_forest") return forest(n, params.delta, rng);
  if (kind == "random_regular") return regular(n, params.delta, rng);
  if (kind == "cycle_union") return cycles(n, rng);
  if (kind == "erdos_renyi_capped") {
    return er_capped(n, params.delta, params.edge_p, rng);
  }
  if (kind == "factor_cycles") {
    return factor_plus_cycles(n, params.delta, params.coverage, rng);
  }
  throw SpanError("generate_test_graph: unknown family '" + kind + "'");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw SpanError(std::string("config: parse error: ") + e.what());
  }
  if (!j.is_object()) throw SpanError("config: top level must be an object");
  static const std::set<std::string> known = {
      "n",       "mode",         "d",          "delta",
      "p_grid",  "trials",       "seed",       "retries",
      "gamma",   "beta2",        "lambda",     "reservoir_k",
      "template_m", "template_z_degree", "target", "fixed_timing"};
  for (const auto& item : j.items()) {
    if (known.find(item.key()) == known.end()) {
      throw SpanError("config: unknown key '" + item.key() + "'");
    }
  }
  ExperimentConfig cfg;
  read_key(j, "n", cfg.n);
  read_key(j, "mode", cfg.mode);
  read_key(j, "d", cfg.d);
  read_key(j, "delta", cfg.delta);
  read_key(j, "p_grid", cfg.p_grid);
  read_key(j, "trials", cfg.trials);
  read_key(j, "seed", cfg.seed);
  read_key(j, "retries", cfg.retries);
  read_key(j, "gamma", cfg.gamma);
  read_key(j, "beta2", cfg.beta2);
  read_key(j, "lambda", cfg.lambda);
  read_key(j, "reservoir_k", cfg.reservoir_k);
  read_key(j, "template_m", cfg.template_m);
  read_key(j, "template_z_degree", cfg.template_z_degree);
  read_key(j, "fixed_timing", cfg.fixed_timing);
  auto target = j.find("target");
  if (target != j.end()) {
    if (!target->is_object()) {
      throw SpanError("config: 'target' must be an object");
    }
    static const std::set<std::string> known_t = {"kind", "v", "coverage",
                                                  "edge_p"};
    for (const auto& item : target->items()) {
      if (known_t.find(item.key()) == known_t.end()) {
        throw SpanError("config: unknown target key '" + item.key() + "'");
      }
    }
    read_key(*target, "kind", cfg.target_kind);
    read_key(*target, "v", cfg.target_v);
    read_key(*target, "coverage", cfg.target_coverage);
    read_key(*target, "edge_p", cfg.target_edge_p);
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpanError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str());
}

TrialRecord run_trial(const ExperimentConfig& cfg, double p,
                      std::uint64_t stream) {
  if (p < 0.0 || p > 1.0) {
    throw SpanError("run_trial: p must lie in [0, 1]");
  }
  TrialRecord rec;
  rec.stream = stream;
  rec.p = p;
  RandomSource root(cfg.seed, stream);
  RandomSource rng_target = root.split(1);
  RandomSource rng_host = root.split(2);
  RandomSource rng_embed = root.split(3);

  std::size_t v = cfg.target_v != 0 ? cfg.target_v : cfg.n;
  if (v > cfg.n) throw SpanError("run_trial: target size exceeds host size");
  TargetParams params;
  params.d = cfg.d;
  params.delta = cfg.delta;
  params.coverage = cfg.target_coverage;
  params.edge_p = cfg.target_edge_p;
  Graph h = generate_test_graph(cfg.target_kind, v, params, rng_target);

  auto start = std::chrono::steady_clock::now();
  if (cfg.mode == "degenerate") {
    std::vector<Graph> exposures = sample_exposures(cfg.n, p, 3, rng_host);
    EmbedOutcome out =
        embed_degenerate(exposures, h, cfg.d, cfg.delta,
                         embed_config_of(cfg), rng_embed);
    fill_from_outcome(rec, out);
  } else if (cfg.mode == "bounded") {
    std::vector<Graph> exposures = sample_exposures(cfg.n, p, 2, rng_host);
    EmbedOutcome out = embed_bounded(exposures, h, cfg.delta,
                                     embed_config_of(cfg), rng_embed);
    fill_from_outcome(rec, out);
  } else if (cfg.mode == "direct") {
    Graph g = sample_gnp(cfg.n, p, rng_host);
    VertexSubset empty_s = VertexSubset::of(h.n(), {});
    VertexSubset empty_x = VertexSubset::of(cfg.n, {});
    for (std::size_t attempt = 0; attempt < cfg.retries; ++attempt) {
      RandomSource rng_a = rng_embed.split(attempt + 1);
      std::vector<Vertex> pool(cfg.n);
      for (std::size_t i = 0; i < cfg.n; ++i) pool[i] = static_cast<Vertex>(i);
      std::size_t k = cfg.reservoir_k != 0 ? cfg.reservoir_k
                                           : auto_layer_count(cfg.n);
      Reservoir res = make_reservoir(cfg.n, std::move(pool), k, rng_a);
      PartialEmbedding seed(h.n(), cfg.n);
      auto got = delta_s_embed(g, h, empty_s, seed, empty_x, res, cfg.delta,
                               rng_a, cfg.gamma);
      if (!got.ok()) {
        rec.failing_phase = got.failure().phase;
        continue;
      }
      PartialEmbedding phi = std::move(got.value());
      EmbedVerify check = verify_embedding(g, h, phi);
      if (!check.pass) {
        throw SpanError("internal: direct embedding failed verification: " +
                        check.detail);
      }
      rec.success = true;
      rec.failing_phase.clear();
      rec.layer_occupancy = res.occupancy;
      break;
    }
  } else {
    throw SpanError("run_trial: unknown mode '" + cfg.mode + "'");
  }
  auto stop = std::chrono::steady_clock::now();
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(stop - start).count();
  return rec;
}

std::string sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const std::size_t points = cfg.p_grid.size();
  const std::size_t total = points * cfg.trials;
  std::vector<TrialRecord> records(total);
  std::vector<std::exception_ptr> errors(total);

  auto work = [&](std::size_t idx) {
    try {
      double p = cfg.p_grid[idx / cfg.trials];
      records[idx] = run_trial(cfg, p, static_cast<std::uint64_t>(idx));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  workers = std::min(workers, total == 0 ? std::size_t{1} : total);
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&]() {
        for (;;) {
          std::size_t idx = next.fetch_add(1);
          if (idx >= total) return;
          work(idx);
        }
      });
    }
    for (std::thread& th : threads) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::ostringstream out;
  out << "p,n,mode,trials,successes,fail_decompose,fail_absorber,"
         "fail_phase2,fail_matching,mean_ms\n";
  for (std::size_t i = 0; i < points; ++i) {
    std::size_t successes = 0;
    std::size_t fails[4] = {0, 0, 0, 0};
    double ms = 0.0;
    for (std::size_t j = 0; j < cfg.trials; ++j) {
      const TrialRecord& rec = records[i * cfg.trials + j];
      if (rec.success) {
        ++successes;
      } else {
        ++fails[phase_column(rec.failing_phase)];
      }
      ms += rec.wall_ms;
    }
    double mean_ms =
        cfg.fixed_timing ? 0.0 : ms / static_cast<double>(cfg.trials);
    out << fmt_g(cfg.p_grid[i]) << ',' << cfg.n << ',' << cfg.mode << ','
        << cfg.trials << ',' << successes << ',' << fails[0] << ','
        << fails[1] << ',' << fails[2] << ',' << fails[3] << ','
        << fmt_ms(mean_ms) << '\n';
  }
  return out.str();
}

}  // namespace spanembed
