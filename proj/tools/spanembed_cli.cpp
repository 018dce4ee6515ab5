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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spanembed/density.hpp"
#include "spanembed/harness.hpp"
#include "spanembed/random_model.hpp"

namespace {

using namespace spanembed;

void emit_graph(const Graph& g, const std::string& out_path) {
  if (out_path.empty()) {
    write_edge_list(g, std::cout);
  } else {
    write_edge_list_file(g, out_path);
  }
}

std::string rational_str(const Rational& r) {
  std::ostringstream s;
  s << r.num() << "/" << r.den();
  return s.str();
}

void print_density(const char* label, const DensityValue& dv) {
  std::cout << label << " = " << rational_str(dv.value) << "\nwitness:";
  for (Vertex v : dv.witness.ids()) std::cout << ' ' << v;
  std::cout << "\n";
}

// Assigns each host edge to one of r rounds uniformly; the union of the
// rounds reproduces the host exactly.
std::vector<Graph> partition_host(const Graph& host, std::size_t r,
                                  RandomSource& rng) {
  std::vector<std::vector<Edge>> buckets(r);
  for (const Edge& e : host.edges()) {
    buckets[rng.below(r)].push_back(e);
  }
  std::vector<Graph> exposures;
  exposures.reserve(r);
  for (std::size_t i = 0; i < r; ++i) {
    exposures.push_back(Graph::from_unchecked(host.n(), std::move(buckets[i])));
  }
  return exposures;
}

int run_embed(const std::string& target_path, const std::string& host_path,
              std::size_t n, double p, const std::string& mode, std::size_t d,
              std::size_t delta, std::uint64_t seed, std::size_t retries,
              double gamma, const std::string& trace_path,
              const std::string& out_path) {
  Graph h = read_edge_list_file(target_path);
  RandomSource root(seed, 0);
  RandomSource rng_host = root.split(2);
  RandomSource rng_embed = root.split(3);

  EmbedConfig cfg;
  cfg.retries = retries;
  cfg.gamma = gamma;

  EmbedOutcome out;
  std::size_t host_n = 0;
  if (mode == "direct") {
    Graph g = host_path.empty() ? sample_gnp(n, p, rng_host)
                                : read_edge_list_file(host_path);
    host_n = g.n();
    VertexSubset empty_s = VertexSubset::of(h.n(), {});
    VertexSubset empty_x = VertexSubset::of(g.n(), {});
    for (std::size_t attempt = 0; attempt < retries; ++attempt) {
      RandomSource rng_a = rng_embed.split(attempt + 1);
      std::vector<Vertex> pool(g.n());
      for (std::size_t i = 0; i < g.n(); ++i) pool[i] = static_cast<Vertex>(i);
      Reservoir res =
          make_reservoir(g.n(), std::move(pool), auto_layer_count(g.n()), rng_a);
      PartialEmbedding seed_phi(h.n(), g.n());
      auto got = delta_s_embed(g, h, empty_s, seed_phi, empty_x, res, delta,
                               rng_a, gamma);
      if (!got.ok()) {
        out.failure = got.failure();
        out.trace.push_back("attempt " + std::to_string(attempt + 1) +
                            " failed: " + got.failure().detail);
        continue;
      }
      out.success = true;
      out.phi = std::move(got.value());
      break;
    }
  } else {
    std::size_t r = mode == "degenerate" ? 3 : 2;
    std::vector<Graph> exposures =
        host_path.empty()
            ? sample_exposures(n, p, r, rng_host)
            : partition_host(read_edge_list_file(host_path), r, rng_host);
    host_n = exposures[0].n();
    out = mode == "degenerate"
              ? embed_degenerate(exposures, h, d, delta, cfg, rng_embed)
              : embed_bounded(exposures, h, delta, cfg, rng_embed);
  }

  if (!trace_path.empty()) {
    std::ofstream tf(trace_path);
    if (!tf) throw SpanError("cannot open trace file " + trace_path);
    for (const std::string& line : out.trace) tf << line << "\n";
  }

  if (out.success) {
    std::cout << "success: " << h.n() << " vertices embedded into " << host_n
              << "-vertex host";
    if (out.degraded) std::cout << " (degraded: " << out.degradation_reason
                                << ")";
    std::cout << "\n";
    if (!out_path.empty()) {
      std::ofstream mf(out_path);
      if (!mf) throw SpanError("cannot open output file " + out_path);
      for (std::size_t v = 0; v < h.n(); ++v) {
        mf << v << ' ' << out.phi.image(static_cast<Vertex>(v)) << "\n";
      }
    }
    return 0;
  }
  std::cout << "failure";
  if (out.failure.has_value()) {
    std::cout << " at phase " << out.failure->phase << ": "
              << out.failure->detail;
  }
  std::cout << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spanning subgraph embedding simulator"};
  app.require_subcommand(1);

  // gen-gnp
  std::size_t gnp_n = 100;
  double gnp_p = 0.5;
  std::uint64_t gnp_seed = 1;
  std::uint64_t gnp_stream = 0;
  std::string gnp_out;
  auto* gnp = app.add_subcommand("gen-gnp", "Sample G(n,p) as an edge list");
  gnp->add_option("--n", gnp_n, "Vertex count")->required();
  gnp->add_option("--p", gnp_p, "Edge probability")->required();
  gnp->add_option("--seed", gnp_seed, "Seed");
  gnp->add_option("--stream", gnp_stream, "Stream id");
  gnp->add_option("--out", gnp_out, "Output path (default stdout)");

  // gen-target
  std::string tgt_kind = "k_delta1_factor";
  std::size_t tgt_n = 100, tgt_d = 1, tgt_delta = 3;
  double tgt_coverage = 0.8, tgt_edge_p = 0.5;
  std::uint64_t tgt_seed = 1;
  std::string tgt_out;
  auto* tgt = app.add_subcommand("gen-target", "Generate a target family member");
  tgt->add_option("--kind", tgt_kind,
                  "k_delta1_factor | d_power_path | random_forest | "
                  "random_regular | cycle_union | erdos_renyi_capped | "
                  "factor_cycles")
      ->required();
  tgt->add_option("--n", tgt_n, "Vertex count")->required();
  tgt->add_option("--d", tgt_d, "Path power");
  tgt->add_option("--delta", tgt_delta, "Degree bound");
  tgt->add_option("--coverage", tgt_coverage, "Clique coverage fraction");
  tgt->add_option("--edge-p", tgt_edge_p, "Density before degree capping");
  tgt->add_option("--seed", tgt_seed, "Seed");
  tgt->add_option("--out", tgt_out, "Output path (default stdout)");

  // density
  std::string den_input, den_measure = "m1";
  std::vector<std::uint32_t> den_roots;
  auto* den = app.add_subcommand("density", "Exact density measures");
  den->add_option("--input", den_input, "Edge-list file")->required();
  den->add_option("--mode", den_measure, "m | m1 | rooted");
  den->add_option("--roots", den_roots, "Root vertices (rooted mode)");

  // decompose
  std::string dec_input, dec_mode = "bounded";
  std::size_t dec_d = 2, dec_delta = 3, dec_k = 0;
  auto* dcs = app.add_subcommand("decompose", "Anchor/pocket decomposition");
  dcs->add_option("--input", dec_input, "Edge-list file")->required();
  dcs->add_option("--mode", dec_mode, "degenerate | bounded");
  dcs->add_option("--d", dec_d, "Degeneracy bound");
  dcs->add_option("--delta", dec_delta, "Degree bound");
  dcs->add_option("--k", dec_k, "Pocket separation (0 = default)");

  // absorber build | verify
  std::size_t abs_m = 1, abs_z = 3, abs_len = 11, abs_n = 0;
  double abs_p = 0.5;
  std::uint64_t abs_seed = 1;
  std::string abs_out, abs_input;
  std::size_t abs_trials = 0;
  auto* ab = app.add_subcommand("absorber", "Robust-template operations");
  ab->require_subcommand(1);
  auto* abb = ab->add_subcommand(
      "build", "Sample, split, subdivide; optionally realize in G(n,p)");
  abb->add_option("--m", abs_m, "Template size parameter");
  abb->add_option("--z-degree", abs_z, "Base left degree");
  abb->add_option("--length", abs_len, "Subdivision length (odd)");
  abb->add_option("--n", abs_n, "Host size for realization (0 = skip)");
  abb->add_option("--p", abs_p, "Host edge probability for realization");
  abb->add_option("--seed", abs_seed, "Seed");
  abb->add_option("--out", abs_out, "Write the template to this file");
  auto* abv = ab->add_subcommand("verify", "Check Y-robustness of a template");
  abv->add_option("--input", abs_input, "Template file")->required();
  abv->add_option("--trials", abs_trials,
                  "Sampled subsets (0 = exhaustive)");
  abv->add_option("--seed", abs_seed, "Seed for sampled verification");

  // embed
  std::string emb_target, emb_host, emb_mode = "bounded", emb_trace, emb_out;
  std::size_t emb_n = 0, emb_d = 2, emb_delta = 3, emb_retries = 5;
  double emb_p = 0.5, emb_gamma = 0.05;
  std::uint64_t emb_seed = 1;
  auto* emb = app.add_subcommand("embed", "Run an embedding pipeline");
  emb->add_option("--target", emb_target, "Target edge-list file")->required();
  emb->add_option("--host", emb_host,
                  "Host edge-list file (edges split into exposures)");
  emb->add_option("--n", emb_n, "Host size when sampling");
  emb->add_option("--p", emb_p, "Host edge probability when sampling");
  emb->add_option("--mode", emb_mode, "degenerate | bounded | direct");
  emb->add_option("--d", emb_d, "Degeneracy bound");
  emb->add_option("--delta", emb_delta, "Degree bound");
  emb->add_option("--seed", emb_seed, "Seed");
  emb->add_option("--retries", emb_retries, "Attempt budget");
  emb->add_option("--gamma", emb_gamma, "Capacity slack (direct mode)");
  emb->add_option("--trace", emb_trace, "Write per-phase trace to this file");
  emb->add_option("--out", emb_out, "Write the vertex mapping to this file");

  // sweep
  std::string sw_config, sw_out;
  auto* sw = app.add_subcommand("sweep", "p-sweep experiment to CSV");
  sw->add_option("--config", sw_config, "JSON config path")->required();
  sw->add_option("--out", sw_out, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gnp->parsed()) {
      RandomSource rng(gnp_seed, gnp_stream);
      emit_graph(sample_gnp(gnp_n, gnp_p, rng), gnp_out);
      return 0;
    }
    if (tgt->parsed()) {
      RandomSource rng(tgt_seed, 0);
      TargetParams params;
      params.d = tgt_d;
      params.delta = tgt_delta;
      params.coverage = tgt_coverage;
      params.edge_p = tgt_edge_p;
      emit_graph(generate_test_graph(tgt_kind, tgt_n, params, rng), tgt_out);
      return 0;
    }
    if (den->parsed()) {
      Graph g = read_edge_list_file(den_input);
      if (den_measure == "m") {
        print_density("m", m_density(g));
      } else if (den_measure == "m1") {
        print_density("m1", m1_density(g));
      } else if (den_measure == "rooted") {
        VertexSubset x = VertexSubset::of(g.n(), den_roots);
        print_density("m_rooted", rooted_density(g, x));
      } else {
        throw SpanError("unknown measure '" + den_measure + "'");
      }
      return 0;
    }
    if (dcs->parsed()) {
      Graph h = read_edge_list_file(dec_input);
      bool degenerate = dec_mode == "degenerate";
      if (!degenerate && dec_mode != "bounded") {
        throw SpanError("unknown decompose mode '" + dec_mode + "'");
      }
      std::size_t k = dec_k != 0 ? dec_k
                      : degenerate ? 20 * dec_d * dec_d
                                   : 4 * dec_delta + 5;
      Decomposition dec = degenerate
                              ? decompose_degenerate(h, dec_d, dec_delta, k)
                              : decompose_bounded(h, dec_delta, k);
      std::cout << "anchors: " << dec.anchors.size() << "\n"
                << "pocket shape: " << dec.f_star.n() << " vertices, "
                << dec.f_star.edge_count() << " edges\n"
                << "separation: " << dec.k_effective << "\n"
                << "buckets:\n";
      for (const auto& kv : dec.bucket_histogram) {
        std::cout << "  " << kv.first << ": " << kv.second << "\n";
      }
      DecompositionReport rep =
          verify_decomposition(h, dec, degenerate, dec_d, dec_delta);
      std::cout << "valid: " << (rep.all_pass() ? "yes" : "no") << "\n";
      return rep.all_pass() ? 0 : 1;
    }
    if (abb->parsed()) {
      RandomSource rng(abs_seed, 0);
      RandomSource rng_t = rng.split(1);
      BipartiteTemplate base = make_base_template(abs_m, abs_z, rng_t);
      BipartiteTemplate tmpl = subdivide(split_high_degree(base), abs_len);
      RobustVerdict verdict = tmpl.y_count <= 20
                                  ? verify_Y_robust(tmpl)
                                  : verify_Y_robust(tmpl, 200, &rng_t);
      std::cout << "template: left " << tmpl.left_size() << ", right "
                << tmpl.right_size() << " (|Y| = " << tmpl.y_count << ")\n"
                << "Y-robust: " << (verdict.robust ? "yes" : "no") << " ("
                << verdict.subsets_checked << " subsets checked)\n";
      if (!abs_out.empty()) {
        std::ofstream tf(abs_out);
        if (!tf) throw SpanError("cannot open " + abs_out);
        write_template(tf, tmpl);
      }
      if (abs_n == 0) return verdict.robust ? 0 : 1;
      if (!verdict.robust) return 1;
      RandomSource rng_h = rng.split(2);
      Graph host = sample_gnp(abs_n, abs_p, rng_h);
      Graph f = Graph::build(3, {{0, 1}, {0, 2}, {1, 2}});
      VertexSubset gamma = VertexSubset::all(3);
      RandomSource rng_r = rng.split(3);
      auto got = realize_absorber(host, tmpl, f, gamma, rng_r);
      if (!got.ok()) {
        std::cout << "realization failed: " << got.failure().detail << "\n";
        return 1;
      }
      const Absorber& a = got.value();
      std::cout << "realized: t = " << a.t << ", |X| = " << a.x_image.size()
                << ", |Y| = " << a.y_image.size() << ", hosts used = "
                << a.used.count() << "\n";
      return 0;
    }
    if (abv->parsed()) {
      std::ifstream tf(abs_input);
      if (!tf) throw SpanError("cannot open " + abs_input);
      BipartiteTemplate tmpl = read_template(tf);
      RandomSource rng(abs_seed, 0);
      RobustVerdict verdict = abs_trials == 0
                                  ? verify_Y_robust(tmpl)
                                  : verify_Y_robust(tmpl, abs_trials, &rng);
      std::cout << "Y-robust: " << (verdict.robust ? "yes" : "no") << " ("
                << verdict.subsets_checked << " subsets checked)\n";
      if (!verdict.robust) {
        std::cout << "counterexample Y':";
        for (std::uint32_t r : verdict.counterexample) std::cout << ' ' << r;
        std::cout << "\n";
      }
      return verdict.robust ? 0 : 1;
    }
    if (emb->parsed()) {
      if (emb_host.empty() && emb_n == 0) {
        throw SpanError("embed: provide --host or --n/--p");
      }
      return run_embed(emb_target, emb_host, emb_n, emb_p, emb_mode, emb_d,
                       emb_delta, emb_seed, emb_retries, emb_gamma, emb_trace,
                       emb_out);
    }
    if (sw->parsed()) {
      ExperimentConfig cfg = load_experiment_config(sw_config);
      std::string csv = sweep(cfg);
      if (sw_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream out(sw_out);
        if (!out) throw SpanError("cannot open " + sw_out);
        out << csv;
      }
      return 0;
    }
  } catch (const SpanError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
